import logging
from collections import deque

from rqsolv.common import RqsolvException, DEFAULT_BALL_VERTICES
from rqsolv.groupring import OneRelatorQuotient
from rqsolv.magnus import build_solver
from rqsolv.words import Presentation, ReducedWord, free_reduce, format_letters, reduce

'''Balls in the Cayley graph of F(S)/<<r>> and the chain test on them.

   Vertices are numbered in breadth-first order from the identity (vertex 0);
   an edge (src, s, dst) joins v to v.s for a positive generator s.
   '''

logger = logging.getLogger(__name__)


class BallTooLarge(RqsolvException):
    pass


class PathEscapesBall(RqsolvException):
    pass


class Ball(object):
    '''Ball of a given radius around the identity

       vertices: list - representative letter tuples, vertex 0 is the identity
       edges: list - (source index, generator, target index)
       radius: int
       '''

    def __init__(self, presentation, radius, vertices, edges, distances):
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.radius = radius
        self.vertices = vertices
        self.edges = edges
        self.distances = distances
        self.basepoint = 0
        self.forward = dict(((src, gen), i) for i, (src, gen, _) in enumerate(edges))
        self.backward = dict(((dst, gen), i) for i, (_, gen, dst) in enumerate(edges))

    def __len__(self):
        return len(self.vertices)

    def words(self):
        return [ReducedWord(v, self.alphabet) for v in self.vertices]

    def to_dict(self):
        return {'radius': self.radius,
                'vertices': [format_letters(v) for v in self.vertices],
                'edges': [[src, gen, dst] for src, gen, dst in self.edges]}

    def __repr__(self):
        return 'Ball(%r, radius=%d, vertices=%d, edges=%d)' % (self.presentation, self.radius,
                                                               len(self.vertices), len(self.edges))


def build_ball(r, alphabet, radius, budget=None, max_vertices=None, solver=None):
    '''Breadth-first ball of the given radius in the Cayley graph of <alphabet | r>

       Parameters
       ==========
       r: ReducedWord or word text - the relator
       alphabet: Alphabet
       radius: int - nonnegative
       budget: ResourceBudget - for the equality oracle
       max_vertices: int - raise BallTooLarge beyond this many vertices
       solver: WordProblemSolver - reuse an existing oracle for the same presentation
       '''
    if radius < 0:
        raise ValueError('build_ball: radius must be nonnegative, got %r' % radius)
    limit = DEFAULT_BALL_VERTICES if max_vertices is None else max_vertices
    presentation = Presentation(alphabet, reduce(r, alphabet))
    quotient = OneRelatorQuotient(presentation, solver or build_solver(presentation, budget))
    letters = alphabet.letters()
    vertices = [()]
    index = {(): 0}
    distances = [0]
    queue = deque([0])
    while queue:
        current = queue.popleft()
        if distances[current] == radius:
            continue
        for letter in letters:
            key = quotient.representative(free_reduce(vertices[current] + (letter,)))
            if key in index:
                continue
            index[key] = len(vertices)
            vertices.append(key)
            distances.append(distances[current] + 1)
            if len(vertices) > limit:
                raise BallTooLarge('BallTooLarge: more than %d vertices within radius %d of %r'
                                   % (limit, radius, presentation))
            queue.append(index[key])
    edges = []
    for src, vertex in enumerate(vertices):
        for gen in alphabet:
            dst = index.get(quotient.representative(free_reduce(vertex + ((gen, 1),))))
            if dst is not None:
                edges.append((src, gen, dst))
    logger.debug('Ball of radius %d for %r: %d vertices, %d edges' % (radius, presentation, len(vertices), len(edges)))
    return Ball(presentation, radius, vertices, edges, distances)


def edge_chain(letters, ball, start=None):
    '''Trace a word from start (the basepoint by default): (endpoint, {edge index: coefficient})'''
    position = ball.basepoint if start is None else start
    chain = {}
    for gen, sign in letters:
        edge = ball.forward.get((position, gen)) if sign > 0 else ball.backward.get((position, gen))
        if edge is None:
            raise PathEscapesBall('PathEscapesBall: %s leaves the ball of radius %d'
                                  % (format_letters(letters), ball.radius))
        src, _, dst = ball.edges[edge]
        chain[edge] = chain.get(edge, 0) + sign
        position = dst if sign > 0 else src
    return position, dict((e, c) for e, c in chain.items() if c != 0)


def _loop_multiple(chain_w, chain_r):
    if not chain_r or set(chain_w) != set(chain_r):
        return None
    edge = min(chain_r)
    if chain_w[edge] % chain_r[edge]:
        return None
    k = chain_w[edge] // chain_r[edge]
    if all(chain_w[e] == k * c for e, c in chain_r.items()):
        return k
    return None


def chain_multiple_check(w, r, ball):
    '''Nonzero k with chain(w) = k times the relator loop at some vertex, or None

       Loops of r are tried from the basepoint first, then from every other
       vertex in breadth-first order; loops that leave the ball are skipped.
       Returns None when w does not close up in the ball (w is not in <<r>>)
       or when its chain is not a nonzero multiple of any relator loop.
       '''
    endpoint, chain_w = edge_chain(w.letters, ball)
    if endpoint != ball.basepoint or not chain_w:
        return None
    for start in range(len(ball.vertices)):
        try:
            end, chain_r = edge_chain(r.letters, ball, start)
        except PathEscapesBall:
            continue
        if end != start:
            continue
        k = _loop_multiple(chain_w, chain_r)
        if k is not None:
            return k
    return None
