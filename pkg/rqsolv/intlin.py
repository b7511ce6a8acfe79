from collections import namedtuple

import numpy as np

from rqsolv.words import exponent_vector

'''Exact integer linear algebra: Smith normal form and the first homology of
   a one-relator presentation.  Entries are Python integers held in numpy
   object arrays, so nothing overflows.
   '''

H1Data = namedtuple('H1Data', ['betti', 'torsion'])


class IntMatrix(object):
    '''Integer matrix

       entries: nested sequence of ints (rows of equal length)
       rows, cols: int - needed only to describe matrices without entries
       '''

    def __init__(self, entries, rows=None, cols=None):
        grid = np.array(entries, dtype=object)
        if grid.size == 0:
            grid = np.zeros((rows or 0, cols or 0), dtype=object)
        if grid.ndim != 2:
            raise ValueError('IntMatrix: expected a 2-dimensional grid, got shape %r' % (grid.shape,))
        if (rows is not None and grid.shape[0] != rows) or (cols is not None and grid.shape[1] != cols):
            raise ValueError('IntMatrix: grid of shape %r does not match %rx%r' % (grid.shape, rows, cols))
        self.entries = np.vectorize(int, otypes=[object])(grid) if grid.size else grid

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @classmethod
    def relation_matrix(cls, presentation):
        """|S| x 1 matrix whose column is the exponent vector of the relator."""
        vector = exponent_vector(presentation.relator, presentation.alphabet)
        return cls([[vector[s]] for s in presentation.alphabet])

    def tolist(self):
        return [[int(x) for x in row] for row in self.entries]


def _smallest_nonzero(block):
    best = None
    for (i, j), value in np.ndenumerate(block):
        if value != 0 and (best is None or abs(value) < best[0]):
            best = (abs(value), i, j)
    return best


def _swap(a, t, i, j):
    if i != t:
        a[[t, i]] = a[[i, t]]
    if j != t:
        a[:, [t, j]] = a[:, [j, t]]


def smith_normal_form(m):
    '''Invariant factors d1 | d2 | ... of an integer matrix

       Parameters
       ==========
       m: IntMatrix or nested sequence of ints

       Returns min(rows, cols) nonnegative integers, zeros last.
       '''
    if not isinstance(m, IntMatrix):
        m = IntMatrix(m)
    a = m.entries.copy()
    rows, cols = a.shape
    size = min(rows, cols)
    factors = []
    t = 0
    while t < size:
        best = _smallest_nonzero(a[t:, t:])
        if best is None:
            break
        _swap(a, t, t + best[1], t + best[2])
        while True:
            pivot = a[t, t]
            for i in range(t + 1, rows):
                if a[i, t] != 0:
                    a[i, t:] -= (a[i, t] // pivot) * a[t, t:]
            for j in range(t + 1, cols):
                if a[t, j] != 0:
                    a[t:, j] -= (a[t, j] // pivot) * a[t:, t]
            # remainders smaller than the pivot move into the pivot position
            rest = None
            for i in range(t + 1, rows):
                if a[i, t] != 0 and (rest is None or abs(a[i, t]) < rest[0]):
                    rest = (abs(a[i, t]), i, t)
            for j in range(t + 1, cols):
                if a[t, j] != 0 and (rest is None or abs(a[t, j]) < rest[0]):
                    rest = (abs(a[t, j]), t, j)
            if rest is not None:
                _swap(a, t, rest[1], rest[2])
                continue
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i, j] % pivot != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            a[t, :] += a[offender, :]
        factors.append(abs(a[t, t]))
        t += 1
    return [int(d) for d in factors] + [0] * (size - len(factors))


def h1_of_presentation(p):
    '''First homology of <S | w>: rational rank and torsion invariant factors'''
    factors = smith_normal_form(IntMatrix.relation_matrix(p))
    rank = len([d for d in factors if d != 0])
    return H1Data(betti=len(p.alphabet) - rank, torsion=tuple(d for d in factors if d > 1))
