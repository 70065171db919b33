"""Words in free groups and generator maps between them.

A :class:`Word` is an immutable, freely reduced sequence of letters.  Each
letter is a pair ``(name, sign)`` with ``sign`` equal to ``+1`` or ``-1``.

Conventions used throughout the package:

* conjugation is ``b^c = c^-1 b c``;
* the commutator is ``[x, y] = x^-1 y^-1 x y``;
* maps compose left to right: ``m1.then(m2)`` applies ``m1`` first.

Text syntax for words is whitespace separated tokens ``name`` or
``name^k``; ``[u, v]`` is the commutator of two words, ``( w )^k`` a power,
``1`` the identity and ``#`` starts a comment.

>>> w = Word.parse("a b b^-1 a")
>>> str(w)
'a^2'
>>> str(commutator(Word.parse("x"), Word.parse("y")))
'x^-1 y^-1 x y'
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlphabetMismatch, IdentityInput, ParseError, ResourceLimit, UnknownGenerator

Letter = tuple[str, int]

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
DEFAULT_MAX_BALL = 10**6


def max_ball_size() -> int:
    """Hard cap on enumerated ball sizes; ``GROUPLAB_MAX_BALL`` overrides."""
    value = os.environ.get("GROUPLAB_MAX_BALL")
    if value:
        return int(value)
    return DEFAULT_MAX_BALL


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of distinct generator names; the order fixes shortlex."""

    names: tuple[str, ...]

    def __init__(self, names: Iterable[str] | str = ()):
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        names = tuple(names)
        for name in names:
            if not NAME_RE.match(name):
                raise ValueError(f"invalid generator name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __str__(self) -> str:
        return " ".join(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({' '.join(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(f"{name!r} is not in alphabet {self}") from None

    def letters(self) -> list[Letter]:
        """All letters in shortlex order: ``a, a^-1, b, b^-1, ...``."""
        return [(n, s) for n in self.names for s in (1, -1)]

    def letter_rank(self, letter: Letter) -> int:
        return 2 * self.index(letter[0]) + (0 if letter[1] > 0 else 1)

    def union(self, other: Iterable[str]) -> Alphabet:
        extra = [n for n in other if n not in self]
        return Alphabet(self.names + tuple(extra))

    def generator(self, name: str) -> Word:
        self.index(name)
        return Word(((name, 1),))

    def gens(self) -> list[Word]:
        return [Word(((n, 1),)) for n in self.names]


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, sign in letters:
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


class Word:
    """Freely reduced word; the empty word is the identity."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        checked = []
        for name, sign in letters:
            if sign not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {sign}")
            checked.append((name, sign))
        self.letters = _free_reduce(checked)
        self._hash = None

    @classmethod
    def _reduced(cls, letters: tuple[Letter, ...]) -> Word:
        w = cls.__new__(cls)
        w.letters = letters
        w._hash = None
        return w

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> Word:
        return parse_word(text, alphabet)

    @classmethod
    def gen(cls, name: str, power: int = 1) -> Word:
        return cls._reduced(((name, 1 if power > 0 else -1),) * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word._reduced(self.letters[item])
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self.letters, other.letters
        i = 0
        while i < len(a) and i < len(b):
            x, y = a[-1 - i], b[i]
            if x[0] == y[0] and x[1] == -y[1]:
                i += 1
            else:
                break
        return Word._reduced(a[: len(a) - i] + b[i:])

    def __pow__(self, k: int) -> Word:
        if k < 0:
            return self.inverse() ** (-k)
        result = Word()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> Word:
        return Word._reduced(tuple((n, -s) for n, s in reversed(self.letters)))

    def conjugate(self, c: Word) -> Word:
        """``self^c = c^-1 self c``."""
        return c.inverse() * self * c

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def generators(self) -> set[str]:
        return {n for n, _ in self.letters}

    def exponent_sum(self, name: str) -> int:
        return sum(s for n, s in self.letters if n == name)

    def occurrences(self, name: str) -> int:
        return sum(1 for n, _ in self.letters if n == name)

    def cyclic_decomposition(self) -> tuple[Word, Word]:
        """Return ``(p, core)`` with ``self = p core p^-1`` and core cyclically reduced."""
        letters = self.letters
        i, j = 0, len(letters) - 1
        while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
            i += 1
            j -= 1
        return Word._reduced(letters[:i]), Word._reduced(letters[i : j + 1])

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def reduce(letters: Iterable[Letter] | Word, alphabet: Alphabet | None = None) -> Word:
    """Freely reduce a letter sequence, checking letters against ``alphabet``."""
    if isinstance(letters, Word):
        letters = letters.letters
    letters = list(letters)
    if alphabet is not None:
        for name, _ in letters:
            alphabet.index(name)
    return Word(letters)


def shortlex_key(w: Word, alphabet: Alphabet) -> tuple:
    return (len(w), tuple(alphabet.letter_rank(x) for x in w.letters))


def check_alphabet(w: Word, alphabet: Alphabet) -> None:
    for name, _ in w.letters:
        if name not in alphabet:
            raise UnknownGenerator(f"{name!r} is not in alphabet {alphabet}")


# ---------------------------------------------------------------- syntax

_TOKEN_RE = re.compile(r"\s*(?:(\[)|(\])|(\()|(\))|(,)|\^(-?\d+)|([A-Za-z_][A-Za-z0-9_]*|1))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    text = text.split("#", 1)[0]
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return tokens
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse word at {text[pos:]!r}")
        lb, rb, lp, rp, comma, exp, name = m.groups()
        if lb:
            tokens.append(("[", lb))
        elif rb:
            tokens.append(("]", rb))
        elif lp:
            tokens.append(("(", lp))
        elif rp:
            tokens.append((")", rp))
        elif comma:
            tokens.append((",", comma))
        elif exp is not None:
            tokens.append(("^", exp))
        else:
            tokens.append(("name", name))
        pos = m.end()


class _Parser:
    def __init__(self, tokens, alphabet):
        self.tokens = tokens
        self.pos = 0
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind):
        if self.peek() != kind:
            got = self.tokens[self.pos][1] if self.pos < len(self.tokens) else "end of input"
            raise ParseError(f"expected {kind!r}, got {got!r}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok[1]

    def word(self, stop) -> Word:
        result = Word()
        while self.peek() not in stop:
            result = result * self.factor()
        return result

    def power(self) -> int:
        if self.peek() == "^":
            return int(self.take("^"))
        return 1

    def factor(self) -> Word:
        kind = self.peek()
        if kind == "name":
            name = self.take("name")
            if name == "1":
                base = Word()
            else:
                if self.alphabet is not None:
                    self.alphabet.index(name)
                base = Word.gen(name)
        elif kind == "[":
            self.take("[")
            u = self.word({",", None})
            self.take(",")
            v = self.word({"]", None})
            self.take("]")
            base = commutator(u, v)
        elif kind == "(":
            self.take("(")
            base = self.word({")", None})
            self.take(")")
        else:
            got = self.tokens[self.pos][1] if kind else "end of input"
            raise ParseError(f"unexpected {got!r} in word")
        return base ** self.power()


def parse_word(text: str, alphabet: Alphabet | None = None) -> Word:
    """Parse the word syntax described in the module docstring."""
    parser = _Parser(_tokenize(text), alphabet)
    w = parser.word({None})
    if parser.peek() is not None:
        raise ParseError(f"trailing input in {text!r}")
    return w


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    parts = []
    letters = w.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        name, sign = letters[i]
        k = (j - i) * sign
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


# ---------------------------------------------------------------- maps


class GeneratorMap:
    """Homomorphism given by the images of the domain generators.

    Letters outside the domain pass through unchanged, provided the target
    alphabet (when one is declared) contains them.  This is how coefficient
    letters survive substitution of variables.
    """

    __slots__ = ("domain", "images", "target")

    def __init__(self, domain: Alphabet, images: Sequence[Word], target: Alphabet | None = None):
        images = tuple(images)
        if len(images) != len(domain):
            raise AlphabetMismatch(
                f"{len(images)} images given for {len(domain)} domain generators"
            )
        if target is not None:
            for img in images:
                for name, _ in img.letters:
                    if name not in target:
                        raise AlphabetMismatch(f"image letter {name!r} not in target {target}")
        self.domain = domain
        self.images = images
        self.target = target

    @classmethod
    def from_dict(
        cls,
        images: Mapping[str, Word | str],
        domain: Alphabet | None = None,
        target: Alphabet | None = None,
    ) -> GeneratorMap:
        if domain is None:
            domain = Alphabet(images.keys())
        imgs = []
        for name in domain:
            img = images.get(name, Word.gen(name))
            imgs.append(parse_word(img) if isinstance(img, str) else img)
        return cls(domain, imgs, target)

    @classmethod
    def identity(cls, domain: Alphabet) -> GeneratorMap:
        return cls(domain, domain.gens())

    def __getitem__(self, name: str) -> Word:
        return self.images[self.domain.index(name)]

    def as_dict(self) -> dict[str, Word]:
        return dict(zip(self.domain.names, self.images))

    def __call__(self, w: Word) -> Word:
        return apply_map(self, w)

    def then(self, other: GeneratorMap) -> GeneratorMap:
        """The composite that applies ``self`` first and ``other`` second."""
        return GeneratorMap(self.domain, [apply_map(other, img) for img in self.images], other.target)

    def __pow__(self, k: int) -> GeneratorMap:
        if k < 0:
            raise ValueError("only non-negative powers of a map are defined")
        result = GeneratorMap(self.domain, self.domain.gens(), self.target)
        for _ in range(k):
            result = result.then(self)
        return result

    def is_identity(self) -> bool:
        return all(img == g for img, g in zip(self.images, self.domain.gens()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneratorMap):
            return NotImplemented
        return self.domain == other.domain and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.domain, self.images))

    def __str__(self) -> str:
        return ", ".join(f"{n} -> {img}" for n, img in zip(self.domain.names, self.images))

    def __repr__(self) -> str:
        return f"GeneratorMap({str(self)!r})"


def apply_map(m: GeneratorMap, w: Word) -> Word:
    """Substitute the images of ``m`` into ``w`` and reduce."""
    index = m.domain._index
    out: list[Letter] = []
    inverses: dict[int, tuple[Letter, ...]] = {}
    for name, sign in w.letters:
        i = index.get(name)
        if i is None:
            if m.target is not None and name not in m.target:
                raise AlphabetMismatch(f"letter {name!r} is neither in the domain nor the target")
            piece: tuple[Letter, ...] = ((name, sign),)
        elif sign > 0:
            piece = m.images[i].letters
        else:
            piece = inverses.get(i)
            if piece is None:
                piece = m.images[i].inverse().letters
                inverses[i] = piece
        for letter in piece:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
    return Word._reduced(tuple(out))


def compose(*maps: GeneratorMap) -> GeneratorMap:
    """Left-to-right composite of ``maps``; the leftmost is applied first."""
    if not maps:
        raise ValueError("compose needs at least one map")
    result = maps[0]
    for m in maps[1:]:
        result = result.then(m)
    return result


def parse_map(text: str, domain: Alphabet | None = None, target: Alphabet | None = None) -> GeneratorMap:
    """Parse ``x -> a b, y -> b`` (commas inside brackets are respected)."""
    images: dict[str, Word] = {}
    for part in split_top_level(text, ","):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise ParseError(f"map entry {part!r} lacks '->'")
        lhs, rhs = part.split("->", 1)
        name = lhs.strip()
        if not NAME_RE.match(name):
            raise ParseError(f"bad generator name {name!r} in map")
        if name in images:
            raise ParseError(f"generator {name!r} mapped twice")
        images[name] = parse_word(rhs)
    return GeneratorMap.from_dict(images, domain=domain, target=target)


def split_top_level(text: str, sep: str) -> list[str]:
    """Split on ``sep`` where it is not nested inside brackets or parentheses."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


# ---------------------------------------------------------------- balls and roots


def ball_size(n: int, radius: int) -> int:
    """Number of reduced words of length at most ``radius`` over ``n`` generators."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if n == 0:
        return 1
    return 1 + sum(2 * n * (2 * n - 1) ** (k - 1) for k in range(1, radius + 1))


def sphere(alphabet: Alphabet, radius: int) -> Iterator[list[Word]]:
    """Yield the shortlex-sorted layers of words of length 0, 1, ..., radius."""
    letters = alphabet.letters()
    layer = [()]
    yield [Word()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for letter in letters:
                if w and w[-1][0] == letter[0] and w[-1][1] == -letter[1]:
                    continue
                nxt.append(w + (letter,))
        layer = nxt
        yield [Word._reduced(w) for w in layer]


def ball(alphabet: Alphabet, radius: int, cap: int | None = None) -> list[Word]:
    """All reduced words of length at most ``radius``, shortlex-sorted."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    cap = max_ball_size() if cap is None else cap
    size = ball_size(len(alphabet), radius)
    if size > cap:
        raise ResourceLimit(f"ball of radius {radius} over {len(alphabet)} generators has {size} words (cap {cap})")
    out: list[Word] = []
    for layer in sphere(alphabet, radius):
        out.extend(layer)
    return out


def root_and_centralizer(w: Word) -> tuple[Word, int]:
    """Return ``(u, k)`` with ``w = u^k``, ``k`` maximal.

    In a free group the centralizer of ``w`` is the cyclic group generated
    by ``u``.
    """
    if w.is_identity:
        raise IdentityInput("the identity has no root")
    p, core = w.cyclic_decomposition()
    letters = core.letters
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            root = p * Word._reduced(letters[:d]) * p.inverse()
            return root, n // d
    raise AssertionError("unreachable")


def power_exponent(w: Word, root: Word) -> int | None:
    """Return ``e`` with ``w = root^e`` when ``root`` is not a proper power, else None."""
    if w.is_identity:
        return 0
    u, k = root_and_centralizer(w)
    if u == root:
        return k
    if u == root.inverse():
        return -k
    return None
