import time
import logging

from rqsolv.common import (RqsolvException, DEFAULT_BUDGET_DEPTH, DEFAULT_BUDGET_LENGTH,
                           DEFAULT_BUDGET_CALLS, peak_rss_mb)
from rqsolv.words import (PRIME, Presentation, UnknownGenerator, free_reduce, invert, cyclic_core,
                          exponent_sums, format_generator, format_letters)

'''Word problem in one-relator groups by the Magnus breakdown.

   A solver decides membership of a word in a Magnus subgroup <Y> (Y a set
   of generators omitting one that the relator mentions, so <Y> is free on
   Y) and returns the unique reduced word over Y representing it.  Triviality
   is membership in the subgroup generated by the empty set.

   Breakdown nodes:
     FreeBase           - empty relator, or a relator x^(+-1) killing x
     TorsionBase        - relator x^n, |n| > 1: Z/n * free
     HnnStep            - a generator t with exponent sum 0: HNN extension of
                          the group on x_i = t^-i x t^i with shorter relator
     ChangeOfVariables  - all exponent sums nonzero: embed via
                          x -> u v^-beta, y -> v^alpha and split on v
   '''

logger = logging.getLogger(__name__)


class BudgetExceeded(RqsolvException):
    '''A resource limit was hit; the question stays undecided

       limit: string - 'depth', 'length' or 'calls'
       report: dict - resource usage at the time of the failure
       '''

    def __init__(self, message, limit=None, report=None):
        super(BudgetExceeded, self).__init__(message)
        self.limit = limit
        self.report = report or {}


class ResourceBudget(object):
    '''Limits for one solver tree

       Parameters
       ==========
       max_depth: int - nesting of breakdown nodes
       max_length: int - longest relator or query word after rewriting
       max_calls: int - membership queries answered without the memo
       '''

    def __init__(self, max_depth=None, max_length=None, max_calls=None):
        self.max_depth = DEFAULT_BUDGET_DEPTH if max_depth is None else max_depth
        self.max_length = DEFAULT_BUDGET_LENGTH if max_length is None else max_length
        self.max_calls = DEFAULT_BUDGET_CALLS if max_calls is None else max_calls
        for name in ('max_depth', 'max_length', 'max_calls'):
            if getattr(self, name) < 1:
                raise ValueError('ResourceBudget: %s must be positive, got %r' % (name, getattr(self, name)))

    def to_dict(self):
        return {'max_depth': self.max_depth, 'max_length': self.max_length, 'max_calls': self.max_calls}

    def __repr__(self):
        return 'ResourceBudget(%d, %d, %d)' % (self.max_depth, self.max_length, self.max_calls)


class Meter(object):
    """Usage counters shared by every node of one solver tree."""

    def __init__(self, budget):
        self.budget = budget
        self.calls = 0
        self.depth_reached = 0
        self.longest = 0
        self.exhausted = None
        self.started = time.time()

    def _fail(self, limit, message):
        self.exhausted = limit
        raise BudgetExceeded('BudgetExceeded: %s' % message, limit, self.report())

    def call(self):
        self.calls += 1
        if self.calls > self.budget.max_calls:
            self._fail('calls', 'more than %d oracle calls' % self.budget.max_calls)

    def depth(self, depth):
        if depth > self.depth_reached:
            self.depth_reached = depth
        if depth > self.budget.max_depth:
            self._fail('depth', 'breakdown deeper than %d' % self.budget.max_depth)

    def length(self, n):
        if n > self.longest:
            self.longest = n
        if n > self.budget.max_length:
            self._fail('length', 'rewritten word of length %d exceeds %d' % (n, self.budget.max_length))

    def report(self):
        report = self.budget.to_dict()
        report.update({'calls_used': self.calls,
                       'depth_reached': self.depth_reached,
                       'longest_word': self.longest,
                       'exhausted': self.exhausted,
                       'elapsed_seconds': round(time.time() - self.started, 3),
                       'peak_rss_mb': peak_rss_mb()})
        return report


def _power(gen, n):
    return ((gen, 1),) * n if n >= 0 else ((gen, -1),) * (-n)


def _shift(letters, d):
    return tuple(((g[0], g[1] + d), s) for g, s in letters)


def _names(gens):
    return [format_generator(g) for g in gens]


class FreeBase(object):
    '''Free group on the generators, one of them possibly set to 1'''

    def __init__(self, generators, killed=None):
        self.generators = tuple(g for g in generators if g != killed)
        self.killed = killed

    def express(self, letters, subset):
        if self.killed is not None:
            letters = free_reduce(l for l in letters if l[0] != self.killed)
        if all(g in subset for g, _ in letters):
            return letters
        return None

    def describe(self):
        return {'node': 'FreeBase', 'generators': _names(self.generators),
                'killed': None if self.killed is None else format_generator(self.killed)}


class TorsionBase(object):
    '''<x | x^n> * F(rest) decided by free-product normal form'''

    def __init__(self, generators, generator, order):
        self.generators = tuple(generators)
        self.generator = generator
        self.order = order

    def normal_form(self, letters):
        """Syllables: free letters, and [x, e] entries with 0 < e < order."""
        x, n = self.generator, self.order
        stack = []
        for gen, sign in letters:
            top = stack[-1] if stack else None
            if gen == x:
                if isinstance(top, list):
                    top[1] = (top[1] + sign) % n
                    if top[1] == 0:
                        stack.pop()
                else:
                    stack.append([x, sign % n])
            elif top is not None and not isinstance(top, list) and top[0] == gen and top[1] == -sign:
                stack.pop()
            else:
                stack.append((gen, sign))
        return stack

    def express(self, letters, subset):
        syllables = self.normal_form(letters)
        if any(isinstance(s, list) for s in syllables):
            return None
        if all(g in subset for g, _ in syllables):
            return tuple(syllables)
        return None

    def describe(self):
        return {'node': 'TorsionBase', 'generators': _names(self.generators),
                'generator': format_generator(self.generator), 'order': self.order}


class HnnStep(object):
    '''HNN splitting over a stable letter with exponent sum zero

       Parameters
       ==========
       generators: tuple - generators mentioned by the relator
       relator: tuple - cyclically reduced relator letters
       stable: generator with exponent sum zero in the relator
       '''

    def __init__(self, generators, relator, stable, meter, depth):
        self.generators = tuple(generators)
        self.relator = relator
        self.stable = stable
        self.meter = meter
        self.depth = depth
        rewritten = []
        level = 0
        for gen, sign in relator:
            if gen == stable:
                level += sign
            else:
                rewritten.append(((gen, -level), sign))
        self.rewritten = cyclic_core(free_reduce(rewritten))
        self.windows = {}
        for (gen, i), _ in self.rewritten:
            low, high = self.windows.get(gen, (i, i))
            self.windows[gen] = (min(low, i), max(high, i))
        self.base_generators = tuple((g, i) for g in self.generators if g != stable
                                     for i in range(self.windows[g][0], self.windows[g][1] + 1))
        self.lower = frozenset((g, i) for g, (low, high) in self.windows.items() for i in range(low, high))
        self.upper = frozenset((g, i) for g, (low, high) in self.windows.items() for i in range(low + 1, high + 1))
        self.sums = exponent_sums(relator)
        logger.debug('HnnStep on %s: %s -> %s' % (format_generator(stable), format_letters(relator),
                                                  format_letters(self.rewritten)))
        self.base = WordProblemSolver(self.base_generators, self.rewritten, meter, depth + 1)
        self._auxiliary = None

    def _tokens(self, letters):
        t = self.stable
        expanded = []
        for gen, sign in letters:
            if gen == t:
                expanded.append((t, sign))
            else:
                m = self.windows[gen][0]
                expanded.extend(_power(t, m))
                expanded.append(((gen, m), sign))
                expanded.extend(_power(t, -m))
        return free_reduce(expanded)

    def _pinch(self, segment, sign):
        # t^-1 g t needs g in the lower subgroup, t g t^-1 the upper one
        if sign < 0:
            found = self.base.express(segment, self.lower)
            return None if found is None else _shift(found, 1)
        found = self.base.express(segment, self.upper)
        return None if found is None else _shift(found, -1)

    def britton(self, letters):
        '''Britton-reduced form of a word

           Returns (segments, signs): base words g_0 .. g_n and the stable
           letter exponents between them, with no pinch left.
           '''
        t = self.stable
        segments, signs = [[]], []
        for letter in self._tokens(letters):
            if letter[0] == t:
                signs.append(letter[1])
                segments.append([])
            else:
                segments[-1].append(letter)
        self.meter.length(len(letters) + len(signs))
        stack_segments, stack_signs = [tuple(segments[0])], []
        for sign, segment in zip(signs, segments[1:]):
            if stack_signs and stack_signs[-1] == -sign:
                image = self._pinch(stack_segments[-1], stack_signs[-1])
                if image is not None:
                    stack_segments.pop()
                    stack_signs.pop()
                    stack_segments[-1] = free_reduce(stack_segments[-1] + image + tuple(segment))
                    continue
            stack_signs.append(sign)
            stack_segments.append(tuple(segment))
        return stack_segments, stack_signs

    def _lift(self, letters):
        t = self.stable
        out = []
        for (gen, i), sign in letters:
            out.extend(_power(t, -i))
            out.append((gen, sign))
            out.extend(_power(t, i))
        return tuple(out)

    def _window_subset(self, gens):
        return frozenset((g, i) for g in gens for i in range(self.windows[g][0], self.windows[g][1] + 1))

    def _express_with_stable(self, letters, subset):
        # <t, Y'> meets the base in <y_i>; walk the reduced form moving the
        # associated-subgroup part of each segment across the next stable letter
        t = self.stable
        inner = self._window_subset(g for g in subset if g != t)
        segments, signs = self.britton(letters)
        carry = ()
        pieces = []
        for segment, sign in zip(segments, signs):
            current = free_reduce(carry + segment)
            associated = self.lower if sign > 0 else self.upper
            found = self.base.express(current, inner | associated)
            if found is None:
                return None
            cut = 0
            while cut < len(found) and found[cut][0] in inner:
                cut += 1
            tail = len(found)
            while tail > 0 and found[tail - 1][0] in associated:
                tail -= 1
            if tail > cut:
                return None
            pieces.append(self._lift(found[:cut]))
            pieces.append(((t, sign),))
            carry = _shift(found[cut:], 1 if sign > 0 else -1)
        found = self.base.express(free_reduce(carry + segments[-1]), inner)
        if found is None:
            return None
        pieces.append(self._lift(found))
        return free_reduce(letter for piece in pieces for letter in piece)

    def _alignment(self, subset):
        low = max(self.windows[g][0] for g in subset)
        high = min(self.windows[g][1] for g in subset)
        return low if low <= high else None

    def _express_aligned(self, letters, subset, c):
        t = self.stable
        conjugated = _power(t, -c) + tuple(letters) + _power(t, c)
        segments, signs = self.britton(conjugated)
        if signs:
            return None
        found = self.base.express(segments[0], frozenset((g, c) for g in subset))
        if found is None:
            return None
        return tuple((g, sign) for (g, _), sign in found)

    def auxiliary(self):
        '''Breakdown used for the subgroup on every generator except t'''
        if self._auxiliary is None:
            others = [g for g in self.generators if g != self.stable]
            zero = [g for g in others if self.sums[g] == 0]
            if zero:
                self._auxiliary = HnnStep(self.generators, self.relator, zero[0], self.meter, self.depth)
            else:
                self._auxiliary = ChangeOfVariables(self.generators, self.relator, self.meter, self.depth,
                                                    x=others[0], y=others[1])
            logger.debug('HnnStep on %s: auxiliary %s' % (format_generator(self.stable),
                                                          self._auxiliary.__class__.__name__))
        return self._auxiliary

    def express(self, letters, subset):
        t = self.stable
        if t in subset:
            return self._express_with_stable(letters, subset)
        if sum(s for g, s in letters if g == t) != 0:
            return None
        if not subset:
            return self._express_aligned(letters, subset, 0)
        c = self._alignment(subset)
        if c is not None:
            return self._express_aligned(letters, subset, c)
        if any(g not in subset and g != t for g in self.generators):
            found = self._express_with_stable(letters, subset | {t})
            if found is None or any(g == t for g, _ in found):
                return None
            return found
        return self.auxiliary().express(letters, subset)

    def describe(self):
        return {'node': 'HnnStep',
                'stable': format_generator(self.stable),
                'relator': format_letters(self.relator),
                'rewritten': format_letters(self.rewritten),
                'windows': dict((format_generator(g), list(w)) for g, w in sorted(
                    self.windows.items(), key=lambda item: self.generators.index(item[0]))),
                'lower': sorted(_names(self.lower)),
                'upper': sorted(_names(self.upper)),
                'base': self.base.describe()}


class ChangeOfVariables(object):
    '''Embedding into a one-relator group with a zero exponent sum

       x -> u v^-beta, y -> v^alpha with alpha, beta the exponent sums of x
       and y; the generator v of the image has exponent sum zero.
       '''

    def __init__(self, generators, relator, meter, depth, x=None, y=None):
        self.generators = tuple(generators)
        self.relator = relator
        self.meter = meter
        self.depth = depth
        self.x = self.generators[0] if x is None else x
        self.y = next(g for g in self.generators if g != self.x) if y is None else y
        sums = exponent_sums(relator)
        self.alpha, self.beta = sums[self.x], sums[self.y]
        self.u, self.v = (self.x, PRIME), (self.y, PRIME)
        self.images = {self.x: ((self.u, 1),) + _power(self.v, -self.beta),
                       self.y: _power(self.v, self.alpha)}
        inner_generators = tuple(self.u if g == self.x else self.v if g == self.y else g
                                 for g in self.generators)
        image = cyclic_core(self.substitute(relator))
        logger.debug('ChangeOfVariables %s, %s: %s -> %s' % (
            format_generator(self.x), format_generator(self.y), format_letters(relator), format_letters(image)))
        self.inner = WordProblemSolver(inner_generators, image, meter, depth + 1, stable=self.v)
        self._swapped = None

    def substitute(self, letters):
        out = []
        for gen, sign in letters:
            image = self.images.get(gen)
            if image is None:
                out.append((gen, sign))
            else:
                out.extend(image if sign > 0 else invert(image))
        return free_reduce(out)

    def _pull_back(self, letters):
        x, y, u, v = self.x, self.y, self.u, self.v
        expanded = []
        for gen, sign in letters:
            if gen == u:
                piece = ((x, 1),) + _power(v, self.beta)
                expanded.extend(piece if sign > 0 else invert(piece))
            else:
                expanded.append((gen, sign))
        out = []
        run = 0
        for gen, sign in free_reduce(expanded) + ((None, 0),):
            if gen == v:
                run += sign
                continue
            if run:
                if run % self.alpha:
                    return None
                out.extend(_power(y, run // self.alpha))
                run = 0
            if gen is not None:
                out.append((gen, sign))
        return free_reduce(out)

    def swapped(self):
        if self._swapped is None:
            self._swapped = ChangeOfVariables(self.generators, self.relator, self.meter, self.depth,
                                              x=self.y, y=self.x)
        return self._swapped

    def express(self, letters, subset):
        if self.x in subset and self.y not in subset:
            return self.swapped().express(letters, subset)
        target = set(g for g in subset if g != self.x and g != self.y)
        if self.x in subset:
            target.add(self.u)
        if self.y in subset:
            target.add(self.v)
        found = self.inner.express(self.substitute(letters), frozenset(target))
        if found is None:
            return None
        return self._pull_back(found)

    def describe(self):
        return {'node': 'ChangeOfVariables',
                'substitution': {format_generator(self.x): format_letters(self.images[self.x]),
                                 format_generator(self.y): format_letters(self.images[self.y])},
                'inner': self.inner.describe()}


class WordProblemSolver(object):
    '''Decision structure for F(generators)/<<relator>>

       Parameters
       ==========
       generators: sequence of generator names
       relator: sequence of letters
       meter: Meter - shared with every node built below this one
       depth: int - nesting level of this solver
       stable: preferred stable letter when several have exponent sum zero

       Use build_solver() for the public entry point.
       '''

    def __init__(self, generators, relator, meter, depth=0, stable=None):
        self.generators = tuple(generators)
        self.meter = meter
        self.depth = depth
        self.presentation = None
        self.budget = meter.budget
        meter.depth(depth)
        relator = cyclic_core(free_reduce(relator))
        meter.length(len(relator))
        self.relator = relator
        mentioned = set(g for g, _ in relator)
        self.core = frozenset(mentioned)
        self.free = tuple(g for g in self.generators if g not in mentioned)
        self._memo = {}
        if not relator:
            self.tree = FreeBase(self.generators)
            self.free = ()
        elif len(mentioned) == 1:
            x = relator[0][0]
            n = abs(sum(s for _, s in relator))
            if n == 1:
                self.tree = FreeBase(self.generators, killed=x)
            else:
                self.tree = TorsionBase(self.generators, x, n)
            self.free = ()
        else:
            core = tuple(g for g in self.generators if g in mentioned)
            sums = exponent_sums(relator)
            zero = [g for g in core if sums[g] == 0]
            if zero:
                t = stable if stable in zero else zero[0]
                self.tree = HnnStep(core, relator, t, meter, depth)
            else:
                self.tree = ChangeOfVariables(core, relator, meter, depth)

    def _free_product_express(self, letters, subset):
        core = self.core
        syllables = []
        for letter in letters:
            inside = letter[0] in core
            if syllables and syllables[-1][0] == inside:
                syllables[-1][1].append(letter)
            else:
                syllables.append((inside, [letter]))
        stack = []
        for inside, syllable in syllables:
            syllable = tuple(syllable)
            if stack and stack[-1][0] == inside:
                syllable = free_reduce(stack.pop()[1] + syllable)
            if not syllable or (inside and self.tree.express(syllable, frozenset()) is not None):
                continue
            stack.append((inside, syllable))
        inner = frozenset(g for g in subset if g in core)
        out = []
        for inside, syllable in stack:
            if inside:
                found = self.tree.express(syllable, inner)
                if found is None:
                    return None
                out.extend(found)
            elif all(g in subset for g, _ in syllable):
                out.extend(syllable)
            else:
                return None
        return free_reduce(out)

    def express(self, letters, subset=frozenset()):
        '''Reduced word over subset equal to letters, or None

           subset must omit a generator mentioned by the relator.
           '''
        letters = free_reduce(letters)
        subset = frozenset(subset)
        key = (letters, subset)
        if key in self._memo:
            return self._memo[key]
        if self.core and self.core <= subset:
            raise ValueError('WordProblemSolver: %r is not a Magnus subset for %s'
                             % (sorted(_names(subset)), format_letters(self.relator)))
        self.meter.call()
        self.meter.length(len(letters))
        if self.free:
            found = self._free_product_express(letters, subset)
        else:
            found = self.tree.express(letters, subset)
        self._memo[key] = found
        return found

    def is_trivial(self, letters):
        return self.express(letters, frozenset()) == ()

    def equal(self, u, v):
        return self.is_trivial(tuple(u) + invert(v))

    @property
    def stats(self):
        return self.meter.report()

    def describe(self):
        return {'generators': _names(self.generators),
                'relator': format_letters(self.relator),
                'free_factor': _names(self.free),
                'tree': self.tree.describe()}


def build_solver(p, budget=None):
    '''Breakdown tree for the presentation p

       Parameters
       ==========
       p: Presentation
       budget: ResourceBudget - defaults from the environment when omitted
       '''
    budget = budget or ResourceBudget()
    solver = WordProblemSolver(p.alphabet.symbols, p.relator.letters, Meter(budget))
    solver.presentation = p
    return solver


def _letters(w, solver):
    letters = getattr(w, 'letters', w)
    for gen, _ in letters:
        if gen not in solver.generators:
            raise UnknownGenerator('is_trivial: generator %r is not in %r' % (gen, solver.generators))
    return letters


def is_trivial(w, solver):
    return solver.is_trivial(_letters(w, solver))


def in_normal_closure(w, r, budget=None):
    '''True iff w lies in the normal closure of r in F(alphabet of w)'''
    return build_solver(Presentation(w.alphabet, r), budget).is_trivial(w.letters)
