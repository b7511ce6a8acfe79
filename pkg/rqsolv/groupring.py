import threading
from fractions import Fraction

from rqsolv.magnus import build_solver
from rqsolv.words import (ReducedWord, UnknownGenerator, free_reduce, invert,
                          format_letters, shortlex_key, exponent_sums, reduce)

'''Group rings Q[F] and Q[F/<<r>>] with Fox free differential calculus.

   Elements are finite formal sums keyed by freely reduced letter tuples.
   Over a quotient the keys are representatives chosen by a word-problem
   oracle: the first key seen in an equality class represents it.
   '''

IDENTITY = ()


class GroupRingElement(object):
    '''Finite formal sum of group elements with rational coefficients

       terms: dict - letter tuple -> coefficient, zero coefficients are dropped
       '''
    __slots__ = ('terms',)

    def __init__(self, terms=None):
        clean = {}
        for key, coefficient in (terms or {}).items():
            coefficient = Fraction(coefficient)
            if coefficient != 0:
                clean[tuple(key)] = coefficient
        self.terms = clean

    @classmethod
    def scalar(cls, c):
        return cls({IDENTITY: c})

    @classmethod
    def element(cls, word, c=1):
        letters = word.letters if isinstance(word, ReducedWord) else free_reduce(word)
        return cls({letters: c})

    def support(self):
        return set(self.terms)

    def is_zero(self):
        return not self.terms

    def is_integral(self):
        return all(c.denominator == 1 for c in self.terms.values())

    def coefficient(self, key):
        if isinstance(key, ReducedWord):
            key = key.letters
        return self.terms.get(tuple(key), Fraction(0))

    def augmentation(self):
        return sum(self.terms.values(), Fraction(0))

    def __add__(self, other):
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0) + c
        return GroupRingElement(terms)

    def __neg__(self):
        return GroupRingElement(dict((k, -c) for k, c in self.terms.items()))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return GroupRingElement(dict((k, v * c) for k, v in self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self, alphabet):
        return sorted(self.terms.items(), key=lambda item: shortlex_key(item[0], alphabet))

    def to_pairs(self, alphabet):
        """[[coefficient, word], ...] in shortlex order, integers kept as ints."""
        pairs = []
        for key, c in self.sorted_terms(alphabet):
            value = int(c) if c.denominator == 1 else str(c)
            pairs.append([value, format_letters(key)])
        return pairs

    def format(self, alphabet):
        if not self.terms:
            return '0'
        out = []
        for key, c in self.sorted_terms(alphabet):
            word = format_letters(key) if key else ''
            magnitude = abs(c)
            if not word:
                body = str(magnitude)
            elif magnitude == 1:
                body = word
            else:
                body = '%s%s' % (magnitude, word)
            if not out:
                out.append(body if c > 0 else '-' + body)
            else:
                out.append(('+ ' if c > 0 else '- ') + body)
        return ' '.join(out)

    def __repr__(self):
        return 'GroupRingElement(%r)' % dict((format_letters(k) or '1', str(c)) for k, c in self.terms.items())


class FreeGroupContext(object):
    '''Q[F(S)]: keys compare as reduced words'''

    def __init__(self, alphabet):
        self.alphabet = alphabet

    def representative(self, key):
        return free_reduce(key)

    def equal(self, u, v):
        return free_reduce(u) == free_reduce(v)


class OneRelatorQuotient(object):
    '''Q[F(S)/<<r>>], with group equality decided by a word-problem solver

       presentation: Presentation - <S | r>
       solver: WordProblemSolver - built from the presentation when omitted
       budget: ResourceBudget - used only when the solver is built here

       Representatives and equality verdicts are memoized per instance; the
       memo is guarded by a lock so one context may serve several threads.
       '''

    def __init__(self, presentation, solver=None, budget=None):
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.solver = solver or build_solver(presentation, budget)
        relator_sums = exponent_sums(presentation.relator.letters)
        self._relator_vector = [relator_sums.get(s, 0) for s in self.alphabet]
        self._pivot = next((i for i, v in enumerate(self._relator_vector) if v != 0), None)
        # the identity always represents its own class
        self._buckets = {self._abelian_key(IDENTITY): [IDENTITY]}
        self._cache = {IDENTITY: IDENTITY}
        self._lock = threading.RLock()

    def _abelian_key(self, key):
        # image in H1 of the quotient: equal elements share it
        sums = exponent_sums(key)
        vector = [sums.get(s, 0) for s in self.alphabet]
        if self._pivot is not None:
            q = vector[self._pivot] // self._relator_vector[self._pivot]
            vector = [x - q * v for x, v in zip(vector, self._relator_vector)]
        return tuple(vector)

    def representative(self, key):
        key = free_reduce(key)
        with self._lock:
            found = self._cache.get(key)
            if found is not None:
                return found
            bucket = self._buckets.setdefault(self._abelian_key(key), [])
            for candidate in bucket:
                if self.solver.is_trivial(key + invert(candidate)):
                    self._cache[key] = candidate
                    return candidate
            bucket.append(key)
            self._cache[key] = key
            return key

    def equal(self, u, v):
        return self.representative(u) == self.representative(v)


def _normalize(terms, ctx):
    merged = {}
    for key, c in terms.items():
        rep = ctx.representative(key)
        merged[rep] = merged.get(rep, 0) + c
    return GroupRingElement(merged)


def gr_multiply(a, b, ctx):
    '''Ring product of a and b with like terms merged in ctx'''
    product = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            key = free_reduce(ka + kb)
            product[key] = product.get(key, 0) + ca * cb
    return _normalize(product, ctx)


def fox_derivative(w, s):
    '''Fox derivative dw/ds in Z[F] as a GroupRingElement

       Parameters
       ==========
       w: ReducedWord
       s: generator name of w's alphabet
       '''
    if s not in w.alphabet:
        raise UnknownGenerator('fox_derivative: generator %r is not in %r' % (s, w.alphabet.symbols))
    letters = free_reduce(w.letters)
    terms = {}
    for i, (gen, sign) in enumerate(letters):
        if gen != s:
            continue
        if sign > 0:
            key = letters[:i]
            terms[key] = terms.get(key, 0) + 1
        else:
            key = letters[:i + 1]
            terms[key] = terms.get(key, 0) - 1
    return GroupRingElement(terms)


def project_to_quotient(e, ctx):
    return _normalize(e.terms, ctx)


def chain_vector(w, ctx):
    '''1-chain of the path spelling w from the identity: s -> pi(dw/ds)'''
    if isinstance(w, str):
        w = reduce(w, ctx.alphabet)
    return dict((s, project_to_quotient(fox_derivative(w, s), ctx)) for s in ctx.alphabet)


def support_lemma_probe(a, b):
    '''True iff [supp(ab) in supp(b)] <=> [supp(a) = {1}] holds in Q[F]'''
    product = gr_multiply(a, b, FreeGroupContext(None))
    inside = product.support() <= b.support()
    return inside == (a.support() == {IDENTITY})
