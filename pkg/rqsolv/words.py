from math import gcd

from rqsolv.common import RqsolvException

'''Free-group words: reduction, cyclic words, conjugacy, roots and the
   candidate relators examined by the decision procedure.

   A letter is a pair (generator, sign) with sign +1 or -1.  Generators are
   arbitrary hashable names; the text syntax uses single lowercase letters
   with uppercase standing for the inverse.
   '''


class UnknownGenerator(RqsolvException):
    pass


class EmptyWord(RqsolvException):
    pass


class PresentationError(RqsolvException):
    pass


PRIME = "'"


def letter_inverse(letter):
    return (letter[0], -letter[1])


def free_reduce(letters):
    stack = []
    for letter in letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def invert(letters):
    return tuple((g, -s) for g, s in reversed(letters))


def format_letter(letter):
    gen, sign = letter
    if isinstance(gen, str) and len(gen) == 1:
        return gen if sign > 0 else gen.upper()
    name = format_generator(gen)
    return name if sign > 0 else name + '^-1'


def format_generator(gen):
    if isinstance(gen, tuple):
        if len(gen) == 2 and isinstance(gen[1], int):
            return '%s_%d' % (format_generator(gen[0]), gen[1])
        if len(gen) == 2 and gen[1] == PRIME:
            return format_generator(gen[0]) + PRIME
        return '(' + ','.join(format_generator(g) for g in gen) + ')'
    return str(gen)


def format_letters(letters):
    parts = [format_letter(letter) for letter in letters]
    if all(len(p) == 1 for p in parts):
        return ''.join(parts)
    return ' '.join(parts)


class Alphabet(object):
    '''Ordered set of generator names

       symbols: sequence - distinct generator names, the order fixes shortlex
       '''

    def __init__(self, symbols):
        symbols = tuple(symbols)
        if not symbols:
            raise PresentationError('%s: empty generating set' % self.__class__.__name__)
        if len(set(symbols)) != len(symbols):
            raise PresentationError('%s: repeated generator in %r' % (self.__class__.__name__, symbols))
        self.symbols = symbols
        self._index = dict((s, i) for i, s in enumerate(symbols))

    @classmethod
    def from_text(cls, text):
        '''"ab" -> Alphabet(('a', 'b')); uppercase letters are rejected.'''
        symbols = [c for c in text if not c.isspace() and c != ',']
        for c in symbols:
            if not (c.isalpha() and c.islower()):
                raise PresentationError("Alphabet: generator names must be lowercase letters, got %r" % c)
        return cls(symbols)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return 'Alphabet(%s)' % ''.join(format_generator(s) for s in self.symbols)

    def index(self, symbol):
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownGenerator('Alphabet: generator %r is not in %r' % (symbol, self.symbols))

    def letters(self):
        """All signed letters in shortlex order: a < A < b < B < ..."""
        return [(s, sign) for s in self.symbols for sign in (1, -1)]

    def letter_key(self, letter):
        return self._index[letter[0]] * 2 + (0 if letter[1] > 0 else 1)

    def check(self, letters):
        for letter in letters:
            if letter[0] not in self._index:
                raise UnknownGenerator('Alphabet: generator %r is not in %r' % (letter[0], self.symbols))
            if letter[1] not in (1, -1):
                raise UnknownGenerator('Alphabet: bad exponent %r on %r' % (letter[1], letter[0]))

    def parse(self, text):
        return reduce(text, self)

    def text_letters(self, text):
        letters = []
        for c in text:
            if c.isspace():
                continue
            if not c.isalpha():
                raise UnknownGenerator('Alphabet: %r is not a generator letter' % c)
            gen = c.lower()
            if gen not in self._index:
                raise UnknownGenerator('Alphabet: generator %r is not in %r' % (gen, self.symbols))
            letters.append((gen, 1 if c.islower() else -1))
        return letters

    def permuted(self, mapping):
        return Alphabet(mapping.get(s, s) for s in self.symbols)


class ReducedWord(object):
    '''Freely reduced word over an alphabet

       Build instances with reduce(); the constructor trusts its input.
       '''
    __slots__ = ('letters', 'alphabet')

    def __init__(self, letters, alphabet):
        self.letters = tuple(letters)
        self.alphabet = alphabet

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        if isinstance(other, ReducedWord):
            return self.letters == other.letters
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        return format_letters(self.letters)

    def __repr__(self):
        return 'ReducedWord(%r)' % str(self)

    def __mul__(self, other):
        return ReducedWord(free_reduce(self.letters + other.letters), self.alphabet)

    def __pow__(self, n):
        base = self.letters if n >= 0 else invert(self.letters)
        return ReducedWord(free_reduce(base * abs(n)), self.alphabet)

    def inverse(self):
        return ReducedWord(invert(self.letters), self.alphabet)

    def generators(self):
        return set(g for g, _ in self.letters)

    def key(self):
        return shortlex_key(self, self.alphabet)


class Presentation(object):
    '''One-relator presentation <alphabet | relator>; the relator may be empty.'''

    def __init__(self, alphabet, relator):
        if isinstance(relator, str):
            relator = reduce(relator, alphabet)
        alphabet.check(relator.letters)
        self.alphabet = alphabet
        self.relator = ReducedWord(free_reduce(relator.letters), alphabet)

    @classmethod
    def from_text(cls, gens, rel):
        alphabet = Alphabet.from_text(gens)
        return cls(alphabet, reduce(rel, alphabet))

    def cyclically_reduced(self):
        core, _ = cyclic_reduce(self.relator)
        return Presentation(self.alphabet, core)

    def __eq__(self, other):
        return (isinstance(other, Presentation) and self.alphabet == other.alphabet
                and self.relator == other.relator)

    def __hash__(self):
        return hash((self.alphabet, self.relator))

    def __repr__(self):
        return '<%s | %s>' % (','.join(format_generator(s) for s in self.alphabet), self.relator)


def parse_presentation(text):
    '''Parse the two-line file format

       gens: ab
       rel: abAB

       Blank lines and lines starting with # are skipped.
       '''
    fields = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if ':' not in line:
            raise PresentationError('parse_presentation: expected "key: value", got %r' % line)
        key, value = line.split(':', 1)
        key = key.strip().lower()
        if key not in ('gens', 'rel'):
            raise PresentationError('parse_presentation: unknown field %r' % key)
        fields[key] = value.strip()
    if 'gens' not in fields:
        raise PresentationError('parse_presentation: missing "gens:" line')
    return Presentation.from_text(fields['gens'], fields.get('rel', ''))


def reduce(letters, alphabet):
    '''Freely reduce a raw letter sequence (or word text) over alphabet'''
    if isinstance(letters, str):
        letters = alphabet.text_letters(letters)
    elif isinstance(letters, ReducedWord):
        letters = letters.letters
    else:
        letters = list(letters)
        alphabet.check(letters)
    return ReducedWord(free_reduce(letters), alphabet)


def _peel(letters):
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return i, j + 1


def cyclic_core(letters):
    i, j = _peel(letters)
    return tuple(letters[i:j])


def cyclic_reduce(w):
    '''Return (core, conjugator) with w = conjugator^-1 core conjugator'''
    i, j = _peel(w.letters)
    core = ReducedWord(w.letters[i:j], w.alphabet)
    conjugator = ReducedWord(invert(w.letters[:i]), w.alphabet)
    return core, conjugator


def _rotations(letters):
    for i in range(len(letters)):
        yield letters[i:] + letters[:i]


def cyclic_equal(u, v):
    if len(u) != len(v):
        return False
    if not u:
        return True
    for rotation in _rotations(v):
        if rotation == u:
            return True
    return False


def is_conjugate(u, v):
    return cyclic_equal(cyclic_core(u.letters), cyclic_core(v.letters))


def primitive_root(w):
    letters = w.letters
    if not letters:
        raise EmptyWord('primitive_root: the empty word has no root')
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            return ReducedWord(letters[:d], w.alphabet), n // d


def is_proper_power(w):
    core = cyclic_core(w.letters)
    if not core:
        return False
    return primitive_root(ReducedWord(core, w.alphabet))[1] > 1


def is_positive(w):
    return all(sign > 0 for _, sign in w.letters)


def exponent_vector(w, alphabet=None):
    alphabet = alphabet or w.alphabet
    vector = dict((s, 0) for s in alphabet)
    for gen, sign in w.letters:
        if gen not in vector:
            raise UnknownGenerator('exponent_vector: generator %r is not in %r' % (gen, alphabet.symbols))
        vector[gen] += sign
    return vector


def exponent_sums(letters):
    sums = {}
    for gen, sign in letters:
        sums[gen] = sums.get(gen, 0) + sign
    return sums


def shortlex_key(w, alphabet=None):
    letters = w.letters if isinstance(w, ReducedWord) else w
    alphabet = alphabet or w.alphabet
    return (len(letters), tuple(alphabet.letter_key(letter) for letter in letters))


def _canonical_letters(core, alphabet):
    best, best_key = None, None
    for candidate in (core, invert(core)):
        for rotation in _rotations(candidate):
            key = tuple(alphabet.letter_key(letter) for letter in rotation)
            if best_key is None or key < best_key:
                best, best_key = rotation, key
    return best


def canonical_representative(w, alphabet=None):
    '''Shortlex-least rotation of the cyclic core of w or of its inverse'''
    alphabet = alphabet or w.alphabet
    core = cyclic_core(w.letters)
    if not core:
        return ReducedWord((), alphabet)
    return ReducedWord(_canonical_letters(core, alphabet), alphabet)


def commutator(u, v):
    return u * v * u.inverse() * v.inverse()


def conjugate(u, v):
    """u^v = v^-1 u v"""
    return v.inverse() * u * v


def baumslag_gersten(n):
    '''Relator [a^t, a] a^-(n-1) of the Baumslag-Gersten group over {a, t}'''
    alphabet = Alphabet('at')
    a, t = alphabet.parse('a'), alphabet.parse('t')
    return commutator(conjugate(a, t), a) * a ** (-(n - 1))


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _exponent_targets(vector):
    if not any(vector):
        return {tuple(vector)}
    g = 0
    for entry in vector:
        g = gcd(g, abs(entry))
    targets = set()
    for d in _divisors(g):
        targets.add(tuple(entry // d for entry in vector))
        targets.add(tuple(-entry // d for entry in vector))
    return targets


def _reachable(current, targets, remaining):
    for target in targets:
        distance = sum(abs(t - c) for t, c in zip(target, current))
        if distance <= remaining and (remaining - distance) % 2 == 0:
            return True
    return False


def _cyclic_words(alphabet, length, targets):
    letters = alphabet.letters()
    position = dict((s, i) for i, s in enumerate(alphabet.symbols))
    word = []
    current = [0] * len(alphabet)

    def extend():
        depth = len(word)
        if depth == length:
            first, last = word[0], word[-1]
            if not (first[0] == last[0] and first[1] == -last[1]):
                yield tuple(word)
            return
        for letter in letters:
            if word and word[-1][0] == letter[0] and word[-1][1] == -letter[1]:
                continue
            i = position[letter[0]]
            current[i] += letter[1]
            if _reachable(current, targets, length - depth - 1):
                word.append(letter)
                for found in extend():
                    yield found
                word.pop()
            current[i] -= letter[1]

    return extend()


def enumerate_candidates(w, alphabet=None, max_len=None):
    '''Candidate relators r for the witness search

       Parameters
       ==========
       w: ReducedWord - the defining relator
       alphabet: Alphabet - generating set, defaults to the one of w
       max_len: int - longest candidate, defaults to len(w)

       Returns one canonical representative per class of cyclically reduced
       words under rotation and inversion, in shortlex order, keeping only
       classes whose exponent vector is compatible with the one of w.
       '''
    alphabet = alphabet or w.alphabet
    if not w:
        return []
    if max_len is None:
        max_len = len(w)
    vector = exponent_vector(w, alphabet)
    targets = _exponent_targets([vector[s] for s in alphabet])
    found = []
    for length in range(1, max_len + 1):
        for letters in _cyclic_words(alphabet, length, targets):
            if _canonical_letters(letters, alphabet) == letters:
                found.append(ReducedWord(letters, alphabet))
    return found
