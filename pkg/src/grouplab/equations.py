"""Systems of equations over free groups and quadratic standard forms.

An equation is a word over variables and coefficients, read as ``w = 1``.
The four standard quadratic shapes are

* closed orientable: ``[x1,y1] ... [xn,yn]`` with ``n >= 1``;
* punctured orientable: ``[x1,y1] ... [xn,yn] c1^z1 ... cm^zm d`` with
  ``n + m >= 1``;
* closed non-orientable: ``x1^2 ... xn^2`` with ``n >= 1``;
* punctured non-orientable: ``x1^2 ... xn^2 c1^z1 ... cm^zm d`` with
  ``n >= 1``.

Here ``c^z = z^-1 c z`` and the ``c_i`` and ``d`` are nontrivial words in the
coefficients.  With no handles the punctured shape is read as orientable.

>>> form = match_standard_form(Word.parse("[x,y] [a,b]^-1"), "x y")
>>> form.kind, form.genus, form.m, str(form.d)
('punctured-orientable', 1, 0, 'b^-1 a^-1 b a')
>>> euler_characteristic(form)
-1
"""

from __future__ import annotations

import enum
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotStandardForm, SearchExhausted, UnknownGenerator
from .words import Alphabet, GeneratorMap, Word, apply_map, commutator, parse_word

CLOSED_ORIENTABLE = "closed-orientable"
PUNCTURED_ORIENTABLE = "punctured-orientable"
CLOSED_NONORIENTABLE = "closed-nonorientable"
PUNCTURED_NONORIENTABLE = "punctured-nonorientable"
KINDS = (CLOSED_ORIENTABLE, PUNCTURED_ORIENTABLE, CLOSED_NONORIENTABLE, PUNCTURED_NONORIENTABLE)


def _alphabet(a) -> Alphabet:
    if isinstance(a, Alphabet):
        return a
    return Alphabet(a)


@dataclass(frozen=True)
class EquationSystem:
    """Equations ``w = 1`` in variables ``vars`` with coefficients in ``F(coeffs)``."""

    vars: Alphabet
    coeffs: Alphabet
    equations: tuple[Word, ...]

    def __init__(self, vars, coeffs, equations: Iterable[Word | str] = ()):
        vars, coeffs = _alphabet(vars), _alphabet(coeffs)
        clash = set(vars) & set(coeffs)
        if clash:
            raise ValueError(f"variables and coefficients overlap: {sorted(clash)}")
        eqs = tuple(parse_word(e) if isinstance(e, str) else e for e in equations)
        for eq in eqs:
            for name in eq.generators():
                if name not in vars and name not in coeffs:
                    raise UnknownGenerator(f"{name!r} is neither a variable nor a coefficient")
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "equations", eqs)

    @property
    def alphabet(self) -> Alphabet:
        return self.vars.union(self.coeffs)

    def __str__(self) -> str:
        lines = [f"vars: {self.vars}", f"coeffs: {self.coeffs}"]
        lines += [f"eq: {eq}" for eq in self.equations]
        return "\n".join(lines)


@dataclass(frozen=True)
class CoordinateGroupDesc:
    """The coordinate group, held only as the symbolic presentation ``<X, A | S>``.

    Its radical is never computed; elements are shown nontrivial only through
    explicit solutions.
    """

    system: EquationSystem

    @property
    def note(self) -> str:
        gens = " ".join(self.system.vars.names + self.system.coeffs.names)
        rels = ", ".join(str(eq) for eq in self.system.equations)
        return f"< {gens} | {rels} >"


def coordinate_group(system: EquationSystem) -> CoordinateGroupDesc:
    return CoordinateGroupDesc(system)


class QuadraticClass(enum.Enum):
    NOT_QUADRATIC = "NotQuadratic"
    QUADRATIC = "Quadratic"
    STRICTLY_QUADRATIC = "StrictlyQuadratic"


def variable_counts(equations: Iterable[Word], vars: Alphabet) -> Counter:
    counts: Counter = Counter()
    for eq in equations:
        for name, _ in eq.letters:
            if name in vars:
                counts[name] += 1
    return counts


def classify_quadratic(system: EquationSystem) -> QuadraticClass:
    """Count appearances of each variable (inverses included) across the system."""
    counts = variable_counts(system.equations, system.vars)
    if any(c > 2 for c in counts.values()):
        return QuadraticClass.NOT_QUADRATIC
    if all(c == 2 for c in counts.values()):
        return QuadraticClass.STRICTLY_QUADRATIC
    return QuadraticClass.QUADRATIC


def is_strictly_quadratic(eq: Word, vars: Alphabet) -> bool:
    return all(c == 2 for c in variable_counts([eq], vars).values())


# ---------------------------------------------------------------- standard forms


@dataclass(frozen=True)
class QuadraticForm:
    """A quadratic word in one of the four standard shapes.

    ``handles`` holds the variable pairs ``(x_i, y_i)`` of the commutators in
    the orientable case and singletons ``(x_i,)`` of the squares otherwise.
    ``conjugators`` are the ``z_i`` and ``coefficients`` the ``c_i``.
    """

    kind: str
    handles: tuple[tuple[str, ...], ...]
    conjugators: tuple[str, ...] = ()
    coefficients: tuple[Word, ...] = ()
    d: Word | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(self.conjugators) != len(self.coefficients):
            raise ValueError("one coefficient per conjugator is required")
        closed = self.kind in (CLOSED_ORIENTABLE, CLOSED_NONORIENTABLE)
        if closed:
            if self.genus < 1 or self.conjugators or self.d is not None:
                raise ValueError(f"{self.kind} needs n >= 1 and no coefficients")
        else:
            if self.d is None or self.d.is_identity:
                raise ValueError(f"{self.kind} needs a nontrivial d")
            if self.genus + self.m < 1:
                raise ValueError(f"{self.kind} needs n + m >= 1")
            if self.kind == PUNCTURED_NONORIENTABLE and self.genus < 1:
                raise ValueError("punctured non-orientable form needs n >= 1")
        if any(c.is_identity for c in self.coefficients):
            raise ValueError("coefficients c_i must be nontrivial")

    @classmethod
    def of(cls, kind: str, n: int, m: int = 0, coefficients: Sequence[Word] = (), d: Word | None = None) -> QuadraticForm:
        """Build a form with default variable names ``x_i, y_i, z_i``."""
        if kind in (CLOSED_ORIENTABLE, PUNCTURED_ORIENTABLE):
            handles = tuple((f"x{i}", f"y{i}") for i in range(1, n + 1))
        else:
            handles = tuple((f"x{i}",) for i in range(1, n + 1))
        conj = tuple(f"z{i}" for i in range(1, m + 1))
        if not coefficients and m:
            coefficients = tuple(Word.gen(f"c{i}") for i in range(1, m + 1))
        if d is None and kind in (PUNCTURED_ORIENTABLE, PUNCTURED_NONORIENTABLE):
            d = Word.gen("d")
        return cls(kind, handles, conj, tuple(coefficients), d)

    @property
    def genus(self) -> int:
        return len(self.handles)

    @property
    def m(self) -> int:
        return len(self.conjugators)

    @property
    def orientable(self) -> bool:
        return self.kind in (CLOSED_ORIENTABLE, PUNCTURED_ORIENTABLE)

    @property
    def punctures(self) -> int:
        if self.kind in (CLOSED_ORIENTABLE, CLOSED_NONORIENTABLE):
            return 0
        return self.m + 1

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for h in self.handles for v in h) + self.conjugators

    def standard_word(self) -> Word:
        w = Word()
        for h in self.handles:
            if len(h) == 2:
                w = w * commutator(Word.gen(h[0]), Word.gen(h[1]))
            else:
                w = w * Word.gen(h[0], 2)
        for z, c in zip(self.conjugators, self.coefficients):
            w = w * c.conjugate(Word.gen(z))
        if self.d is not None:
            w = w * self.d
        return w

    def __str__(self) -> str:
        return f"{self.kind} n={self.genus} m={self.m}: {self.standard_word()}"


def euler_characteristic(form: QuadraticForm) -> int:
    """``2 - 2n - p`` for orientable forms and ``2 - n - p`` otherwise."""
    if form.orientable:
        return 2 - 2 * form.genus - form.punctures
    return 2 - form.genus - form.punctures


def match_standard_form(eq: Word, vars: Alphabet | Iterable[str] | str) -> QuadraticForm:
    """Recognize ``eq`` as literally one of the four standard shapes.

    Letters outside ``vars`` are treated as coefficients.

    >>> match_standard_form(Word.parse("x1^2"), ["x1"]).kind
    'closed-nonorientable'
    """
    vars = _alphabet(vars)
    letters = eq.letters
    if not is_strictly_quadratic(eq, vars):
        raise NotStandardForm(f"{eq} is not strictly quadratic")
    used: set[str] = set()
    pos = 0
    comms: list[tuple[str, str]] = []
    squares: list[tuple[str]] = []

    def is_var(i, sign=None):
        return i < len(letters) and letters[i][0] in vars and (sign is None or letters[i][1] == sign)

    while pos < len(letters):
        if (
            pos + 3 < len(letters)
            and all(is_var(pos + k) for k in range(4))
            and letters[pos][1] == -1
            and letters[pos + 1][1] == -1
            and letters[pos + 2] == (letters[pos][0], 1)
            and letters[pos + 3] == (letters[pos + 1][0], 1)
            and letters[pos][0] != letters[pos + 1][0]
            and not squares
        ):
            comms.append((letters[pos][0], letters[pos + 1][0]))
            pos += 4
        elif pos + 1 < len(letters) and is_var(pos, 1) and letters[pos + 1] == letters[pos] and not comms:
            squares.append((letters[pos][0],))
            pos += 2
        else:
            break
    for h in comms + squares:
        used.update(h)
    conj: list[str] = []
    coeffs: list[Word] = []
    while pos < len(letters) and is_var(pos, -1):
        z = letters[pos][0]
        end = pos + 1
        while end < len(letters) and letters[end][0] not in vars:
            end += 1
        if end == pos + 1 or end >= len(letters) or letters[end] != (z, 1):
            raise NotStandardForm(f"{eq}: expected a block z^-1 c z at position {pos}")
        conj.append(z)
        coeffs.append(Word(letters[pos + 1 : end]))
        pos = end + 1
    rest = letters[pos:]
    if any(name in vars for name, _ in rest):
        raise NotStandardForm(f"{eq}: variables after the coefficient part")
    d = Word(rest) if rest else None
    n = len(comms) + len(squares)
    if d is None:
        if conj:
            raise NotStandardForm(f"{eq}: conjugated coefficients without a final d")
        if n == 0:
            raise NotStandardForm(f"{eq}: no handles")
        if comms:
            return QuadraticForm(CLOSED_ORIENTABLE, tuple(comms))
        return QuadraticForm(CLOSED_NONORIENTABLE, tuple(squares))
    if n + len(conj) == 0:
        raise NotStandardForm(f"{eq}: a coefficient alone is not a standard equation")
    kind = PUNCTURED_NONORIENTABLE if squares else PUNCTURED_ORIENTABLE
    return QuadraticForm(kind, tuple(comms or squares), tuple(conj), tuple(coeffs), d)


# ---------------------------------------------------------------- normalization


def _elementary_moves(vars: Alphabet, coeffs: Alphabet) -> list[GeneratorMap]:
    """Nielsen moves on the variables, plus multiplication by coefficient letters."""
    moves = []
    names = vars.names
    gens = {n: Word.gen(n) for n in names}

    def move(v, image):
        return GeneratorMap.from_dict({v: image}, domain=vars)

    for v in names:
        x = gens[v]
        moves.append(move(v, x.inverse()))
        for u in names:
            if u == v:
                continue
            y = gens[u]
            moves += [
                move(v, y * x),
                move(v, x * y),
                move(v, y.inverse() * x),
                move(v, x * y.inverse()),
                move(v, x.conjugate(y)),
                move(v, x.conjugate(y.inverse())),
            ]
            if names.index(u) > names.index(v):
                moves.append(GeneratorMap.from_dict({v: y, u: x}, domain=vars))
        for c in coeffs.gens():
            moves += [move(v, c * x), move(v, x * c), move(v, c.inverse() * x), move(v, x * c.inverse())]
    return moves


def _in_declared_order(form: QuadraticForm, vars: Alphabet) -> bool:
    ranks = [vars.index(v) for v in form.variables]
    return ranks == sorted(ranks)


def normalize_quadratic(
    eq: Word,
    vars: Alphabet | Iterable[str] | str,
    coeffs: Alphabet | Iterable[str] | str | None = None,
    max_depth: int = 6,
    max_states: int = 200_000,
    slack: int = 2,
) -> tuple[QuadraticForm, GeneratorMap]:
    """Search for an automorphism taking ``eq`` to a standard quadratic word.

    The search is breadth first over elementary moves, keeping only strictly
    quadratic words of length at most ``len(eq) + slack``.  The returned
    certificate ``m`` satisfies ``apply_map(m, eq) == form.standard_word()``.

    >>> form, m = normalize_quadratic(Word.parse("y^-1 x^-1 y x"), "x y")
    >>> form.kind, str(apply_map(m, Word.parse("y^-1 x^-1 y x")))
    ('closed-orientable', 'x^-1 y^-1 x y')
    """
    vars = _alphabet(vars)
    if coeffs is None:
        coeffs = Alphabet(sorted(eq.generators() - set(vars)))
    coeffs = _alphabet(coeffs)
    if not is_strictly_quadratic(eq, vars):
        raise NotStandardForm(f"{eq} is not strictly quadratic")
    moves = _elementary_moves(vars, coeffs)
    limit = len(eq) + slack
    start = GeneratorMap.identity(vars)
    seen = {eq}
    queue = deque([(eq, start, 0)])
    while queue:
        w, cert, depth = queue.popleft()
        form = None
        try:
            form = match_standard_form(w, vars)
        except NotStandardForm:
            pass
        else:
            if not _in_declared_order(form, vars):
                form = None
        if form is not None:
            if apply_map(cert, eq) != form.standard_word():
                raise AssertionError("normalization certificate failed to check")
            return form, cert
        if depth == max_depth:
            continue
        for mv in moves:
            nxt = apply_map(mv, w)
            if nxt in seen or len(nxt) > limit or not is_strictly_quadratic(nxt, vars):
                continue
            seen.add(nxt)
            if len(seen) > max_states:
                raise SearchExhausted(f"normalization of {eq} exceeded {max_states} states")
            queue.append((nxt, cert.then(mv), depth + 1))
    raise SearchExhausted(f"no standard form for {eq} within {max_depth} moves")
