import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from rqsolv.words import (Alphabet, EmptyWord, Presentation, PresentationError, UnknownGenerator, baumslag_gersten,
                          canonical_representative, commutator, conjugate, cyclic_reduce, enumerate_candidates,
                          exponent_vector, free_reduce, is_conjugate, is_positive, is_proper_power,
                          parse_presentation, primitive_root, reduce, shortlex_key)

AB = Alphabet('ab')

words = st.lists(st.sampled_from(AB.letters()), max_size=24).map(lambda letters: reduce(letters, AB))
short_words = st.lists(st.sampled_from(AB.letters()), min_size=1, max_size=5).map(lambda letters: reduce(letters, AB))


def w(text, alphabet=AB):
    return reduce(text, alphabet)


def test_words_reduce():
    assert str(w('aA b')) == 'b'
    assert str(w('abBA')) == ''
    assert str(w('aabA')) == 'aabA'


def test_words_reduce_unknown_generator():
    with pytest.raises(UnknownGenerator):
        w('abc')
    with pytest.raises(UnknownGenerator):
        reduce([('c', 1)], AB)


def test_words_cyclic_reduce():
    core, conjugator = cyclic_reduce(w('Bab'))
    assert (str(core), str(conjugator)) == ('a', 'b')
    core, conjugator = cyclic_reduce(w('abAB'))
    assert (str(core), str(conjugator)) == ('abAB', '')
    core, conjugator = cyclic_reduce(w('a'))
    assert (str(core), str(conjugator)) == ('a', '')


def test_words_is_conjugate():
    assert is_conjugate(w('abAB'), w('bABa'))
    assert is_conjugate(w('ab'), w('ba'))
    assert not is_conjugate(w('a'), w('b'))


def test_words_primitive_root():
    root, n = primitive_root(w('abab'))
    assert (str(root), n) == ('ab', 2)
    root, n = primitive_root(w('aaa'))
    assert (str(root), n) == ('a', 3)
    root, n = primitive_root(w('ab'))
    assert (str(root), n) == ('ab', 1)
    with pytest.raises(EmptyWord):
        primitive_root(w(''))


def test_words_exponent_vector():
    assert exponent_vector(w('abAB')) == {'a': 0, 'b': 0}
    assert exponent_vector(w('TataTAtAA', Alphabet('at'))) == {'a': -1, 't': 0}
    assert exponent_vector(w('aab')) == {'a': 2, 'b': 1}


def test_words_enumerate_candidates():
    found = [str(c) for c in enumerate_candidates(w('aa'), AB, 2)]
    assert 'a' in found
    assert 'b' not in found and 'ab' not in found
    assert [str(c) for c in enumerate_candidates(w('ab'), AB, 2)] == ['ab']
    assert enumerate_candidates(w(''), AB) == []


def test_words_enumerate_candidates_order_and_uniqueness():
    found = enumerate_candidates(w('abAB'), AB)
    keys = [c.key() for c in found]
    assert keys == sorted(keys)
    assert len(set(canonical_representative(c) for c in found)) == len(found)
    assert [str(c) for c in found] == ['abAB']


def test_words_canonical_representative():
    assert str(canonical_representative(w('bABa'))) == 'abAB'
    assert str(canonical_representative(w('BAba'))) == 'abAB'
    assert str(canonical_representative(w('Bab'))) == 'a'
    assert str(canonical_representative(w('A'))) == 'a'


def test_words_shortlex_order():
    ordered = [w(x) for x in ('a', 'A', 'b', 'B', 'aa', 'ab')]
    assert sorted(ordered, key=lambda x: shortlex_key(x, AB)) == ordered


def test_words_positive_and_powers():
    assert is_positive(w('aab'))
    assert not is_positive(w('aB'))
    assert is_proper_power(w('abab'))
    assert is_proper_power(w('Baab'))
    assert not is_proper_power(w('aab'))


def test_words_baumslag_gersten():
    assert str(baumslag_gersten(2)) == 'TataTAtAA'
    assert str(baumslag_gersten(3)) == 'TataTAtAAA'
    a, b = w('a'), w('b')
    assert str(commutator(a, b)) == 'abAB'
    assert str(conjugate(a, b)) == 'Bab'


def test_words_presentation():
    p = parse_presentation('# Baumslag-Gersten\ngens: at\n\nrel: TataTAtAA\n')
    assert p == Presentation.from_text('at', 'TataTAtAA')
    assert str(p.relator) == 'TataTAtAA'
    assert str(Presentation.from_text('ab', 'bAAB').cyclically_reduced().relator) == 'AA'
    with pytest.raises(PresentationError):
        parse_presentation('rel: ab')
    with pytest.raises(PresentationError):
        Alphabet.from_text('')
    with pytest.raises(PresentationError):
        Alphabet.from_text('aa')


@given(words)
def test_words_reduce_idempotent(x):
    assert reduce(x.letters, AB) == x
    assert free_reduce(x.letters) == x.letters


@given(words)
def test_words_cyclic_reduce_round_trip(x):
    core, conjugator = cyclic_reduce(x)
    assert conjugator.inverse() * core * conjugator == x
    if core:
        assert core.letters[0] != (core.letters[-1][0], -core.letters[-1][1])


@given(words, words, words)
def test_words_is_conjugate_equivalence(x, y, z):
    assert is_conjugate(x, x)
    assert is_conjugate(x, y) == is_conjugate(y, x)
    assert is_conjugate(x, y) == is_conjugate(x.inverse(), y.inverse())
    if is_conjugate(x, y) and is_conjugate(y, z):
        assert is_conjugate(x, z)


@given(words, words)
def test_words_is_conjugate_detects_conjugates(x, y):
    assert is_conjugate(x, y.inverse() * x * y)


@given(words)
def test_words_primitive_root_properties(x):
    core, _ = cyclic_reduce(x)
    if not core:
        return
    root, n = primitive_root(core)
    assert len(root) * n == len(core)
    assert primitive_root(root)[1] == 1
    assert root ** n == core


@given(words, words)
def test_words_exponent_vector_homomorphism(x, y):
    vx, vy, vxy = exponent_vector(x), exponent_vector(y), exponent_vector(x * y)
    assert all(vxy[s] == vx[s] + vy[s] for s in AB)
    assert exponent_vector(x.inverse()) == dict((s, -v) for s, v in vx.items())


@settings(max_examples=40, deadline=None)
@given(short_words)
def test_words_enumerate_contains_own_class(x):
    core, _ = cyclic_reduce(x)
    if not core:
        return
    found = enumerate_candidates(core, AB, len(core))
    assert canonical_representative(core) in found


def test_words_enumerate_candidates_brute_force():
    # every cyclically reduced word up to length 4 with a compatible exponent vector
    target = w('aabAB')
    expected = set()
    letters = AB.letters()

    def extend(prefix, length):
        if len(prefix) == length:
            first, last = prefix[0], prefix[-1]
            if first != (last[0], -last[1]):
                vector = exponent_vector(reduce(prefix, AB))
                if vector['a'] in (1, -1) and vector['b'] == 0:
                    expected.add(canonical_representative(reduce(prefix, AB)))
            return
        for letter in letters:
            if prefix and prefix[-1] == (letter[0], -letter[1]):
                continue
            extend(prefix + [letter], length)

    for length in range(1, 5):
        extend([], length)
    found = enumerate_candidates(target, AB, 4)
    assert set(found) == expected
    assert len(found) == len(expected)
