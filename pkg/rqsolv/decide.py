import time
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor

from tqdm import tqdm

from rqsolv.common import RqsolvException, RqsolvWarning, DEFAULT_THREADS, peak_rss_mb
from rqsolv.groupring import IDENTITY, GroupRingElement, OneRelatorQuotient, chain_vector, gr_multiply
from rqsolv.intlin import h1_of_presentation
from rqsolv.magnus import BudgetExceeded, ResourceBudget, build_solver
from rqsolv.words import (EmptyWord, Presentation, ReducedWord, cyclic_core, cyclic_reduce, enumerate_candidates,
                          format_generator, free_reduce, invert, is_conjugate, primitive_root, reduce)

'''Witness search and the residual rational solvability verdict.

   For a relator w the search looks for r with |r| <= |w| and k >= 1 such that
   w lies in r^k [<<r>>, <<r>>]; among the candidates that pass, the one whose
   normal closure contains all the others gives the maximal residually
   rationally solvable quotient <S | r>.  The group <S | w> is residually
   rationally solvable exactly when that r is conjugate to w or w^-1.
   '''

logger = logging.getLogger(__name__)

NOT_IN_CLOSURE = 'not-in-closure'
CHAIN_MISMATCH = 'chain-mismatch'
INCONCLUSIVE = 'inconclusive'


class InternalContradiction(RqsolvException):
    pass


class Witness(object):
    '''r and k >= 1 with w in r^k [<<r>>, <<r>>]

       r: ReducedWord - inverted when the chain equation gave a negative k
       k: int
       trace: list of (candidate text, outcome) pairs
       k_sign_folded: bool - True when r was replaced by its inverse
       conjugator: ReducedWord - g with chain(w) = k g chain(r), so w is
           congruent to (g r g^-1)^k modulo [<<r>>, <<r>>]
       '''

    def __init__(self, r, k, trace=None, k_sign_folded=False, conjugator=None):
        self.r = r
        self.k = k
        self.trace = trace or []
        self.k_sign_folded = k_sign_folded
        self.conjugator = conjugator if conjugator is not None else ReducedWord((), r.alphabet)
        self.report = {}

    def __repr__(self):
        return 'Witness(r=%r, k=%d)' % (str(self.r), self.k)


class NoneFound(object):
    """No candidate passed (only possible in bounded search)."""

    def __init__(self, trace, report=None):
        self.trace = trace
        self.report = report or {}


class Verdict(object):
    label = None
    exit_code = None

    def __init__(self, w, witness=None, reason=None, trace=None, report=None, bounded=False):
        self.w = w
        self.witness = witness
        self.reason = reason
        self.trace = trace if trace is not None else (witness.trace if witness else [])
        self.budget_report = report or {}
        self.bounded = bounded
        self.residually_solvable = None

    @property
    def r(self):
        return self.witness.r if self.witness else None

    @property
    def k(self):
        return self.witness.k if self.witness else None

    def max_quotient(self):
        if self.witness is None:
            return None
        p = Presentation(self.w.alphabet, self.witness.r)
        h1 = h1_of_presentation(p)
        return {'gens': ''.join(format_generator(s) for s in p.alphabet),
                'rel': str(p.relator),
                'h1': {'betti': h1.betti, 'torsion': list(h1.torsion)}}

    def to_dict(self):
        return {'verdict': self.label,
                'w': str(self.w),
                'r': None if self.witness is None else str(self.witness.r),
                'k': self.k,
                'k_sign_folded': None if self.witness is None else self.witness.k_sign_folded,
                'conjugator': None if self.witness is None else str(self.witness.conjugator),
                'residually_solvable': self.residually_solvable,
                'bounded': self.bounded,
                'reason': self.reason,
                'max_quotient': self.max_quotient(),
                'trace': [[c, o] for c, o in self.trace],
                'budget_report': self.budget_report}

    def __repr__(self):
        return '%s(w=%r, r=%r, k=%r)' % (self.__class__.__name__, str(self.w),
                                         None if self.r is None else str(self.r), self.k)


class ResiduallyQSolvable(Verdict):
    label = 'YES'
    exit_code = 0

    def __init__(self, *args, **kwargs):
        super(ResiduallyQSolvable, self).__init__(*args, **kwargs)
        self.residually_solvable = True


class NotResiduallyQSolvable(Verdict):
    label = 'NO'
    exit_code = 1


class Inconclusive(Verdict):
    label = 'INCONCLUSIVE'
    exit_code = 2


def _merge_reports(reports, started):
    merged = {}
    for report in reports:
        if not merged:
            merged = dict(report)
            continue
        merged['calls_used'] += report['calls_used']
        merged['depth_reached'] = max(merged['depth_reached'], report['depth_reached'])
        merged['longest_word'] = max(merged['longest_word'], report['longest_word'])
        merged['exhausted'] = merged['exhausted'] or report['exhausted']
    if merged:
        merged['elapsed_seconds'] = round(time.time() - started, 3)
        merged['peak_rss_mb'] = peak_rss_mb()
    return merged


def _chain_multiple(w, r, quotient):
    '''(k, g) with chain(w) = k g chain(r) over the quotient, or None

       g ranges over the translates that line the pivot term of chain(r) up
       with a term of chain(w); the identity is tried first.
       '''
    alphabet = quotient.alphabet
    chain_w = chain_vector(w, quotient)
    chain_r = chain_vector(r, quotient)
    pivot = next(((s, key, c) for s in alphabet for key, c in chain_r[s].sorted_terms(alphabet)), None)
    if pivot is None:
        return None
    s, key, c = pivot
    shifts = [IDENTITY] + [free_reduce(term + invert(key)) for term, _ in chain_w[s].sorted_terms(alphabet)]
    tried = set()
    for shift in shifts:
        g = quotient.representative(shift)
        if g in tried:
            continue
        tried.add(g)
        k = chain_w[s].coefficient(quotient.representative(free_reduce(g + key))) / c
        if k == 0 or k.denominator != 1:
            continue
        translate = GroupRingElement.element(g, int(k))
        if all(chain_w[t] == gr_multiply(translate, chain_r[t], quotient) for t in alphabet):
            return int(k), g
    return None


def _screen(w, r, budget):
    '''(outcome, (signed k, translate) or None, budget report) for one candidate'''
    try:
        solver = build_solver(Presentation(w.alphabet, r), budget)
        if not solver.is_trivial(w.letters):
            return NOT_IN_CLOSURE, None, solver.stats
        found = _chain_multiple(w, r, OneRelatorQuotient(solver.presentation, solver))
    except BudgetExceeded as e:
        logger.debug('Candidate %s: %s' % (r, e))
        return INCONCLUSIVE, None, e.report
    if found is None:
        return CHAIN_MISMATCH, None, solver.stats
    return 'k=%d' % found[0], found, solver.stats


def divisibility(w, r, budget=None):
    '''Signed k != 0 with chain(w) = k g chain(r) over <<r>> for some g, or None

       Parameters
       ==========
       w: ReducedWord
       r: ReducedWord - nonempty relator over the alphabet of w
       budget: ResourceBudget

       None when w is not in <<r>> or its chain is not a nonzero multiple of the
       relator chain.  Raises BudgetExceeded when the oracle gives up.
       '''
    if not r:
        raise EmptyWord('divisibility: the relator must be nonempty')
    solver = build_solver(Presentation(w.alphabet, r), budget)
    if not solver.is_trivial(w.letters):
        return None
    found = _chain_multiple(w, r, OneRelatorQuotient(solver.presentation, solver))
    return None if found is None else found[0]


def _screen_all(core, candidates, budget, threads, progress):
    def task(candidate):
        return _screen(core, candidate, budget)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(tqdm(executor.map(task, candidates), total=len(candidates),
                             desc='candidates', disable=not progress))
    return [task(c) for c in tqdm(candidates, desc='candidates', disable=not progress)]


def _select_maximal(passing, budget, reports):
    # candidate order is shortlex, so the first maximal one wins ties
    for i, (r, _, _) in enumerate(passing):
        solver = build_solver(Presentation(r.alphabet, r), budget)
        try:
            contains = all(solver.is_trivial(q.letters) for j, (q, _, _) in enumerate(passing) if j != i)
        finally:
            reports.append(solver.stats)
        if contains:
            return i
    return None


def find_witness(w, alphabet=None, max_r_len=None, budget=None, threads=None, progress=False):
    '''Maximal witness r, k for the relator w

       Parameters
       ==========
       w: ReducedWord - cyclically reduced internally
       alphabet: Alphabet - defaults to the alphabet of w
       max_r_len: int - longest candidate, defaults to the length of the cyclic core
       budget: ResourceBudget
       threads: int - candidates screened in parallel, each with its own solver
       progress: bool - show a tqdm bar on stderr

       Returns Witness, NoneFound (bounded search only) or Inconclusive.  Raises
       InternalContradiction when a full search finds no passing or no maximal candidate.
       '''
    started = time.time()
    alphabet = alphabet or w.alphabet
    budget = budget or ResourceBudget()
    threads = threads or DEFAULT_THREADS
    w = reduce(w.letters, alphabet)
    core = ReducedWord(cyclic_core(w.letters), alphabet)
    if not core:
        return Witness(core, 1)
    full = len(core)
    bounded = max_r_len is not None and max_r_len < full
    candidates = enumerate_candidates(core, alphabet, max_r_len if bounded else full)
    logger.info('Screening %d candidate relators of length <= %d for %s'
                % (len(candidates), max_r_len if bounded else full, core))
    results = _screen_all(core, candidates, budget, threads, progress)
    trace = []
    passing = []
    reports = []
    inconclusive = 0
    for candidate, (outcome, found, report) in zip(candidates, results):
        trace.append((str(candidate), outcome))
        reports.append(report)
        if outcome == INCONCLUSIVE:
            inconclusive += 1
        elif found is not None:
            k, g = found
            passing.append((candidate.inverse() if k < 0 else candidate, k, ReducedWord(g, alphabet)))
    if inconclusive:
        logger.warning('%d candidate(s) exhausted the budget' % inconclusive)
        return Inconclusive(core, reason='budget exhausted on %d candidate(s)' % inconclusive, trace=trace,
                            report=_merge_reports(reports, started), bounded=bounded)
    if not passing:
        if not bounded:
            # the class of w itself always passes a full search
            raise InternalContradiction('InternalContradiction: no candidate passed for %s' % core)
        return NoneFound(trace, _merge_reports(reports, started))
    try:
        chosen = _select_maximal(passing, budget, reports)
    except BudgetExceeded as e:
        reports.append(e.report)
        return Inconclusive(core, reason='budget exhausted while comparing normal closures', trace=trace,
                            report=_merge_reports(reports, started), bounded=bounded)
    if chosen is None:
        if bounded:
            return Inconclusive(core, reason='no maximal candidate of length <= %d' % max_r_len, trace=trace,
                                report=_merge_reports(reports, started), bounded=bounded)
        raise InternalContradiction('InternalContradiction: no maximal candidate among %s'
                                    % [str(r) for r, _, _ in passing])
    r, k, g = passing[chosen]
    witness = Witness(r, abs(k), trace, k_sign_folded=k < 0, conjugator=g)
    witness.report = _merge_reports(reports, started)
    logger.info('Witness for %s: r = %s, k = %d (%d passing)' % (core, r, abs(k), len(passing)))
    return witness


def _power_certificate(core, budget):
    '''True when core = p^n with n >= 2 and <S | p> is residually Q-solvable'''
    p, n = primitive_root(core)
    if n < 2:
        return None
    verdict = decide(p, p.alphabet, budget)
    return True if isinstance(verdict, ResiduallyQSolvable) else None


def decide(w, alphabet=None, budget=None, max_r_len=None, threads=None, progress=False):
    '''Is <alphabet | w> residually rationally solvable?

       Parameters
       ==========
       w: ReducedWord
       alphabet: Alphabet - defaults to the alphabet of w
       budget: ResourceBudget
       max_r_len: int - bounded search; NO stays sound, a possible YES is reported as Inconclusive

       Returns ResiduallyQSolvable, NotResiduallyQSolvable or Inconclusive.
       '''
    alphabet = alphabet or w.alphabet
    w = reduce(w.letters, alphabet)
    core, _ = cyclic_reduce(w)
    bounded = max_r_len is not None and max_r_len < len(core)
    found = find_witness(core, alphabet, max_r_len, budget, threads, progress)
    if isinstance(found, Inconclusive):
        return found
    if isinstance(found, NoneFound):
        # only the class of w itself could still pass, and it is longer than the bound
        message = 'no witness of length <= %s for %s; residual rational solvability is not certified' \
                  % (max_r_len, core)
        warnings.warn(message, RqsolvWarning)
        logger.warning(message)
        return Inconclusive(core, reason=message, trace=found.trace, report=found.report, bounded=bounded)
    report = found.report
    if not core or is_conjugate(core, found.r) or is_conjugate(core, found.r.inverse()):
        return ResiduallyQSolvable(core, found, report=report)
    verdict = NotResiduallyQSolvable(core, found, report=report, bounded=bounded)
    try:
        verdict.residually_solvable = _power_certificate(core, budget)
    except BudgetExceeded:
        verdict.residually_solvable = None
    return verdict
