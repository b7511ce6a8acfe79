import sys
import logging
import argparse

from rqsolv.common import RqsolvException, DEFAULT_THREADS, init_logging, json_dump
from rqsolv.cayley import build_ball, BallTooLarge
from rqsolv.decide import InternalContradiction, Inconclusive, NoneFound, decide, find_witness
from rqsolv.groupring import fox_derivative
from rqsolv.intlin import h1_of_presentation
from rqsolv.magnus import BudgetExceeded, ResourceBudget, build_solver, in_normal_closure
from rqsolv.words import (EmptyWord, Presentation, PresentationError, UnknownGenerator,
                          parse_presentation, reduce)

'''Command line front end: rqsolv <command> [options]

   Exit codes: 0 yes / trivial / done, 1 no / nontrivial, 2 inconclusive,
   64 usage error, 70 internal error.
   '''

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70


class UsageError(RqsolvException):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError('%s: %s' % (self.prog, message))


def _common_options():
    common = ArgumentParser(add_help=False)
    common.add_argument('--presentation', metavar='FILE', help='file with "gens:" and "rel:" lines')
    common.add_argument('--gens', help='generator letters, e.g. ab')
    common.add_argument('--rel', help='relator text; uppercase letters are inverses')
    common.add_argument('--json', action='store_true', help='print a single JSON object')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v info, -vv debug logging')
    common.add_argument('--budget-depth', type=int, help='maximal breakdown depth')
    common.add_argument('--budget-length', type=int, help='maximal rewritten word length')
    common.add_argument('--budget-calls', type=int, help='maximal number of oracle calls')
    return common


def build_parser():
    common = _common_options()
    parser = ArgumentParser(prog='rqsolv', description='Residual rational solvability of one-relator groups')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    for name, text in (('decide', 'decide residual rational solvability of <gens | rel>'),
                       ('witness', 'maximal witness r and k for the relator')):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument('--max-r-len', type=int, help='bounded search: longest candidate relator')
        sub.add_argument('--threads', type=int, default=DEFAULT_THREADS, help='screen candidates in parallel')
        sub.add_argument('--progress', action='store_true', help='progress bar on stderr')

    sub = commands.add_parser('wp', parents=[common], help='is the word trivial in <gens | rel>')
    sub.add_argument('--word', required=True)
    sub = commands.add_parser('nc-member', parents=[common], help='is the word in the normal closure of rel')
    sub.add_argument('--word', required=True)
    sub = commands.add_parser('ball', parents=[common], help='ball in the Cayley graph of <gens | rel>')
    sub.add_argument('--radius', type=int, required=True)
    sub = commands.add_parser('fox', parents=[common], help='Fox derivative of a word')
    sub.add_argument('--word', required=True)
    sub.add_argument('--generator', required=True)
    commands.add_parser('h1', parents=[common], help='first homology of <gens | rel>')
    return parser


def load_presentation(args, need_relator=True):
    '''Presentation from --presentation, with --gens/--rel overriding the file'''
    gens, rel = None, None
    if args.presentation:
        try:
            with open(args.presentation) as handle:
                p = parse_presentation(handle.read())
        except IOError as e:
            raise UsageError('UsageError: cannot read %s: %s' % (args.presentation, e))
        gens, rel = ''.join(p.alphabet.symbols), str(p.relator)
    gens = args.gens if args.gens is not None else gens
    rel = args.rel if args.rel is not None else rel
    if gens is None:
        raise UsageError('UsageError: give --gens or --presentation')
    if rel is None:
        if need_relator:
            raise UsageError('UsageError: give --rel or --presentation')
        rel = ''
    return Presentation.from_text(gens, rel)


def _budget(args):
    try:
        return ResourceBudget(args.budget_depth, args.budget_length, args.budget_calls)
    except ValueError as e:
        raise UsageError('UsageError: %s' % e)


def _emit(result, args, out):
    if args.json:
        out.write(json_dump(result) + '\n')
        return
    for key, value in result.items():
        if isinstance(value, (dict, list)):
            value = json_dump(value)
        out.write('%-20s %s\n' % (key + ':', '-' if value is None else value))


def _search_options(args):
    if args.max_r_len is not None and args.max_r_len < 1:
        raise UsageError('UsageError: --max-r-len must be positive, got %d' % args.max_r_len)
    if args.threads < 1:
        raise UsageError('UsageError: --threads must be positive, got %d' % args.threads)


def _decide(args, out):
    p = load_presentation(args)
    _search_options(args)
    verdict = decide(p.relator, p.alphabet, _budget(args), args.max_r_len, args.threads, args.progress)
    _emit(verdict.to_dict(), args, out)
    return verdict.exit_code


def _witness(args, out):
    p = load_presentation(args)
    _search_options(args)
    found = find_witness(p.relator, p.alphabet, args.max_r_len, _budget(args), args.threads, args.progress)
    if isinstance(found, Inconclusive):
        _emit({'r': None, 'k': None, 'reason': found.reason, 'trace': [list(t) for t in found.trace],
               'budget_report': found.budget_report}, args, out)
        return EXIT_INCONCLUSIVE
    if isinstance(found, NoneFound):
        _emit({'r': None, 'k': None, 'trace': [list(t) for t in found.trace],
               'budget_report': found.report}, args, out)
        return EXIT_NO
    _emit({'r': str(found.r), 'k': found.k, 'k_sign_folded': found.k_sign_folded,
           'conjugator': str(found.conjugator),
           'trace': [list(t) for t in found.trace], 'budget_report': found.report}, args, out)
    return EXIT_YES


def _wp(args, out):
    p = load_presentation(args)
    word = reduce(args.word, p.alphabet)
    solver = build_solver(p, _budget(args))
    try:
        trivial = solver.is_trivial(word.letters)
    except BudgetExceeded as e:
        _emit({'word': str(word), 'result': 'inconclusive', 'budget_report': e.report}, args, out)
        return EXIT_INCONCLUSIVE
    result = {'word': str(word), 'result': 'trivial' if trivial else 'nontrivial'}
    if args.json:
        result['tree'] = solver.describe()
        result['budget_report'] = solver.stats
    _emit(result, args, out)
    return EXIT_YES if trivial else EXIT_NO


def _nc_member(args, out):
    p = load_presentation(args)
    word = reduce(args.word, p.alphabet)
    try:
        member = in_normal_closure(word, p.relator, _budget(args))
    except BudgetExceeded as e:
        _emit({'word': str(word), 'relator': str(p.relator), 'result': 'inconclusive',
               'budget_report': e.report}, args, out)
        return EXIT_INCONCLUSIVE
    _emit({'word': str(word), 'relator': str(p.relator),
           'result': 'member' if member else 'not-member'}, args, out)
    return EXIT_YES if member else EXIT_NO


def _ball(args, out):
    p = load_presentation(args, need_relator=False)
    if args.radius < 0:
        raise UsageError('UsageError: --radius must be nonnegative')
    ball = build_ball(p.relator, p.alphabet, args.radius, _budget(args))
    _emit(ball.to_dict(), args, out)
    return EXIT_YES


def _fox(args, out):
    alphabet = load_presentation(args, need_relator=False).alphabet
    derivative = fox_derivative(reduce(args.word, alphabet), args.generator)
    _emit({'word': str(reduce(args.word, alphabet)), 'generator': args.generator,
           'derivative': derivative.to_pairs(alphabet)}, args, out)
    return EXIT_YES


def _h1(args, out):
    p = load_presentation(args, need_relator=False)
    h1 = h1_of_presentation(p)
    _emit({'betti': h1.betti, 'torsion': list(h1.torsion)}, args, out)
    return EXIT_YES


HANDLERS = {'decide': _decide, 'witness': _witness, 'wp': _wp, 'nc-member': _nc_member,
            'ball': _ball, 'fox': _fox, 'h1': _h1}


def run_command(argv, out=None):
    '''Run one command line and return its exit code

       Parameters
       ==========
       argv: list of strings - arguments without the program name
       out: file object for results, stdout by default
       '''
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write('%s\n' % e)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_YES if not e.code else EXIT_USAGE
    init_logging(logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING)
    try:
        return HANDLERS[args.command](args, out)
    except (UsageError, UnknownGenerator, PresentationError, EmptyWord) as e:
        logger.error('%s' % e)
        sys.stderr.write('%s\n' % e)
        return EXIT_USAGE
    except BudgetExceeded as e:
        _emit({'result': 'inconclusive', 'reason': str(e), 'budget_report': e.report}, args, out)
        return EXIT_INCONCLUSIVE
    except BallTooLarge as e:
        logger.error('%s' % e)
        return EXIT_INCONCLUSIVE
    except InternalContradiction as e:
        logger.exception('%s' % e)
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception('Unexpected error in %s: %s' % (args.command, e))
        return EXIT_INTERNAL


def main(argv=None):
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == '__main__':
    sys.exit(main())
