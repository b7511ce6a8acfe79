import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from rqsolv.magnus import (BudgetExceeded, ChangeOfVariables, FreeBase, HnnStep, ResourceBudget, TorsionBase,
                           build_solver, in_normal_closure, is_trivial)
from rqsolv.words import Alphabet, Presentation, UnknownGenerator, cyclic_core, reduce

AB = Alphabet('ab')
ABT = Alphabet('abt')


def w(text, alphabet=AB):
    return reduce(text, alphabet)


def solver(gens, rel, budget=None):
    return build_solver(Presentation.from_text(gens, rel), budget)


def random_word(rng, alphabet, length):
    letters = []
    while len(letters) < length:
        letter = rng.choice(alphabet.letters())
        if letters and letters[-1] == (letter[0], -letter[1]):
            continue
        letters.append(letter)
    return reduce(letters, alphabet)


def random_relator(rng, alphabet, length, mention):
    while True:
        r = reduce(cyclic_core(random_word(rng, alphabet, length).letters), alphabet)
        if r and mention in r.generators():
            return r


def conjugate_product(rng, r, count, alphabet):
    product = w('', alphabet)
    for _ in range(count):
        g = random_word(rng, alphabet, rng.randint(0, 6))
        product = product * g.inverse() * r ** rng.choice([1, -1]) * g
    return product


def test_magnus_build_solver_nodes():
    assert isinstance(solver('ab', 'a').tree, FreeBase)
    assert solver('ab', 'a').tree.killed == 'a'
    torsion = solver('ab', 'aa').tree
    assert isinstance(torsion, TorsionBase)
    assert (torsion.generator, torsion.order) == ('a', 2)
    hnn = solver('at', 'TataTAtAA').tree
    assert isinstance(hnn, HnnStep)
    assert hnn.stable == 't'
    assert isinstance(solver('ab', 'aab').tree, ChangeOfVariables)
    assert isinstance(solver('ab', '').tree, FreeBase)


def test_magnus_solver_attributes():
    p = Presentation.from_text('at', 'TataTAtAA')
    s = build_solver(p, ResourceBudget(10, 1000, 1000))
    assert s.presentation == p
    assert s.budget.max_depth == 10
    tree = s.describe()['tree']
    assert tree['node'] == 'HnnStep'
    assert tree['stable'] == 't'
    assert tree['windows'] == {'a': [0, 1]}


def test_magnus_is_trivial_examples():
    assert not is_trivial(w('a'), solver('ab', 'aa'))
    assert is_trivial(w('aa'), solver('ab', 'aa'))
    assert is_trivial(w('bAAB'), solver('ab', 'aa'))
    assert not is_trivial(w('AbaB'), solver('ab', 'aa'))
    assert not is_trivial(w('ab'), solver('ab', 'aa'))
    assert not is_trivial(w('t', Alphabet('at')), solver('at', 'TataTAtAA'))
    assert is_trivial(w('TataTAtAA', Alphabet('at')), solver('at', 'TataTAtAA'))
    assert is_trivial(w('aTAt', Alphabet('at')), solver('at', 'aTAt'))
    with pytest.raises(UnknownGenerator):
        is_trivial(w('c', Alphabet('c')), solver('ab', 'aa'))


def test_magnus_baumslag_gersten_relations():
    at = Alphabet('at')
    s = solver('at', 'TataTAtAA')
    # [a^t, a] = a
    assert is_trivial(w('TataTAtA', at).letters + w('A', at).letters, s)
    assert not is_trivial(w('a', at), s)
    assert not is_trivial(w('TatA', at), s)
    assert not is_trivial(w('TataTAtAAA', at), s)


def test_magnus_in_normal_closure():
    assert in_normal_closure(w('aa'), w('a'))
    assert not in_normal_closure(w('a'), w('aa'))
    assert not in_normal_closure(w('b'), w('a'))
    assert in_normal_closure(w('BabA'), w('abAB'))
    assert in_normal_closure(w('baBA'), w('abAB'))


def test_magnus_commutator_relator():
    s = solver('ab', 'abAB')
    assert is_trivial(w('abAB'), s)
    assert is_trivial(w('aabABA'), s)
    assert not is_trivial(w('aabAB'), s)
    assert s.equal(w('ab').letters, w('ba').letters)


def test_magnus_change_of_variables_relator():
    s = solver('ab', 'aabbb')
    assert is_trivial(w('aabbb'), s)
    assert is_trivial(w('bbbaa'), s)
    assert is_trivial(w('Baabbbb'), s)
    assert not is_trivial(w('aa'), s)
    assert not is_trivial(w('abAB'), s)


def test_magnus_free_factor():
    s = build_solver(Presentation.from_text('abc', 'aa'))
    assert is_trivial(w('caaC', Alphabet('abc')), s)
    assert not is_trivial(w('cacA', Alphabet('abc')), s)
    s = build_solver(Presentation.from_text('abct', 'TataTAtAA'))
    abct = Alphabet('abct')
    assert is_trivial(w('cTataTAtAAC', abct), s)
    assert not is_trivial(w('cb', abct), s)
    assert s.express(w('cb', abct).letters, {'b', 'c'}) == w('cb', abct).letters


def test_magnus_express_magnus_subgroup():
    s = solver('ab', 'abAB')
    assert s.express(w('abA').letters, {'b'}) == w('b').letters
    assert s.express(w('aabA').letters, {'a'}) is None
    with pytest.raises(ValueError):
        s.express(w('a').letters, {'a', 'b'})
    s = solver('at', 'TataTAtAA')
    at = Alphabet('at')
    assert s.express(w('TataTAtA', at).letters, {'a'}) == w('a', at).letters


def test_magnus_budget_exceeded():
    s = solver('at', 'TataTAtAA', ResourceBudget(max_calls=1))
    with pytest.raises(BudgetExceeded) as e:
        is_trivial(w('TataTAtAA', Alphabet('at')), s)
    assert e.value.limit == 'calls'
    assert e.value.report['exhausted'] == 'calls'
    with pytest.raises(BudgetExceeded):
        solver('at', 'TataTAtAA', ResourceBudget(max_depth=1))
    with pytest.raises(ValueError):
        ResourceBudget(max_depth=0)


def test_magnus_budget_report_fields():
    s = solver('ab', 'abAB')
    is_trivial(w('abAB'), s)
    assert set(s.stats) == {'max_depth', 'max_length', 'max_calls', 'calls_used', 'depth_reached',
                            'longest_word', 'exhausted', 'elapsed_seconds', 'peak_rss_mb'}
    assert s.stats['calls_used'] >= 1
    assert s.stats['exhausted'] is None


def test_magnus_torsion_normal_form():
    rng = random.Random(5)
    s = solver('ab', 'aaa')
    for _ in range(200):
        x = random_word(rng, AB, rng.randint(0, 10))
        syllables = s.tree.normal_form(x.letters)
        assert is_trivial(x, s) == (syllables == [])


def test_magnus_soundness_on_normal_closure():
    rng = random.Random(17)
    for _ in range(60):
        r = random_relator(rng, AB, rng.randint(1, 6), rng.choice('ab'))
        s = build_solver(Presentation(AB, r), ResourceBudget(max_calls=10 ** 5))
        try:
            assert is_trivial(conjugate_product(rng, r, 3, AB), s)
        except BudgetExceeded:
            pass


def test_magnus_equality_is_equivalence():
    rng = random.Random(23)
    s = solver('ab', 'abAAB')
    sample = [random_word(rng, AB, rng.randint(0, 5)) for _ in range(12)]
    sample += [x * w('abAAB') for x in sample[:4]]
    for x in sample:
        assert s.equal(x.letters, x.letters)
        for y in sample:
            assert s.equal(x.letters, y.letters) == s.equal(y.letters, x.letters)
            for z in sample:
                if s.equal(x.letters, y.letters) and s.equal(y.letters, z.letters):
                    assert s.equal(x.letters, z.letters)


@pytest.mark.slow
def test_magnus_freiheitssatz():
    rng = random.Random(31)
    ab = [letter for letter in ABT.letters() if letter[0] != 't']
    trivial = 0
    for _ in range(500):
        r = random_relator(rng, ABT, rng.randint(1, 8), 't')
        u = []
        while not u:
            u = list(reduce([rng.choice(ab) for _ in range(rng.randint(1, 8))], ABT).letters)
        s = build_solver(Presentation(ABT, r), ResourceBudget(max_calls=10 ** 5))
        try:
            if is_trivial(u, s):
                trivial += 1
        except BudgetExceeded:
            pass
    assert trivial == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(AB.letters()), min_size=1, max_size=5), st.integers(0, 2 ** 16))
def test_magnus_relator_conjugates_are_trivial(letters, seed):
    r = reduce(cyclic_core(reduce(letters, AB).letters), AB)
    if not r:
        return
    rng = random.Random(seed)
    s = build_solver(Presentation(AB, r), ResourceBudget(max_calls=10 ** 5))
    try:
        assert is_trivial(conjugate_product(rng, r, 2, AB), s)
        assert is_trivial(r.inverse(), s)
    except BudgetExceeded:
        pass


def test_magnus_budget_monotone():
    word = w('TataTAtAATataTAtAA', Alphabet('at'))
    small = solver('at', 'TataTAtAA', ResourceBudget(max_calls=10 ** 4))
    large = solver('at', 'TataTAtAA', ResourceBudget(max_calls=10 ** 6))
    assert is_trivial(word, small) == is_trivial(word, large)
