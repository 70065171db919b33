"""Dehn twists, basic automorphism sequences and generic families.

Maps compose left to right throughout: ``m1.then(m2)`` applies ``m1``
first.  A family member ``phi.then(tau)`` therefore first moves the
variables by the automorphism ``phi`` and then substitutes the solution
``tau``.

>>> from grouplab.words import parse_map
>>> beta = parse_map("x -> x, y -> x y")
>>> delta = parse_map("x -> y x, y -> y")
>>> seq = basic_sequence(BasicSequenceSpec([beta], [delta], [(1, 1)]))
>>> str(seq[0])
'x -> x y x, y -> x y'
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .equations import EquationSystem
from .errors import IdentityInput, LengthMismatch, NotInEdgeGroup, SolutionCheckFailed
from .folding import SubgroupGraph
from .groups import Group
from .solver import verify_solution
from .splittings import AmalgamSplitting, HNNSplitting
from .verdict import Verdict
from .words import GeneratorMap, Word, apply_map, root_and_centralizer


@dataclass(frozen=True)
class DehnTwist:
    """A Dehn twist ``phi_c`` with its inverse ``phi_{c^-1}``.

    ``provenance`` is ``(splitting, c, tag)`` where ``tag`` names the side
    that moves: ``"stable"`` for HNN extensions and ``"right"`` for amalgams.
    """

    provenance: tuple
    map: GeneratorMap
    inverse: GeneratorMap

    @property
    def element(self) -> Word:
        return self.provenance[1]


def dehn_twist(split, c: Word) -> DehnTwist:
    """The twist along ``c`` in the edge group of an elementary splitting.

    For ``A *_C B`` the ``A`` generators are fixed and each ``B`` generator
    ``b`` goes to ``c^-1 b c``.  For an HNN extension the vertex generators
    are fixed and the stable letter ``t`` goes to ``c t``; here ``c`` must lie
    in the left edge group, the one conjugated by ``t``.
    """
    if isinstance(split, HNNSplitting):
        if split.vertex.abelian_coordinates(split.edge_left, split.vertex.reduce(c)) is None:
            raise NotInEdgeGroup(f"{c} is not in the edge group <{', '.join(map(str, split.edge_left))}>")
        t = Word.gen(split.stable)

        def build(x: Word) -> GeneratorMap:
            return GeneratorMap.from_dict({split.stable: x * t}, domain=split.alphabet)

        return DehnTwist((split, c, "stable"), build(c), build(c.inverse()))
    if isinstance(split, AmalgamSplitting):
        sides = [(split.left, split.left_edge), (split.right, split.right_edge)]
        if not any(
            all(n in g.alphabet for n in c.generators()) and g.abelian_coordinates(edge, c) is not None
            for g, edge in sides
        ):
            raise NotInEdgeGroup(f"{c} is not in the edge group")

        def build(x: Word) -> GeneratorMap:
            images = {b: Word.gen(b).conjugate(x) for b in split.right.alphabet}
            return GeneratorMap.from_dict(images, domain=split.alphabet)

        return DehnTwist((split, c, "right"), build(c), build(c.inverse()))
    raise TypeError(f"not an elementary splitting: {split!r}")


def verify_automorphism(m: GeneratorMap, context: Group, radius: int, inverse: GeneratorMap | None = None) -> Verdict:
    """Bounded check that ``m`` is an automorphism of ``context``.

    Every relator must map to the identity.  Then an inverse is sought: the
    given ``inverse`` if any, else a preimage of each generator among words
    of length at most ``radius``.  All groups handled here are Hopfian, so a
    right inverse that is an endomorphism suffices.  In a free group a map
    whose images miss a generator (by folding) is Refuted.
    """
    gens = context.alphabet.gens()
    if all(context.equal(apply_map(m, g), g) for g in gens):
        return Verdict.verified(0, "identity map")
    for r in context.relators:
        if not context.is_identity(apply_map(m, r)):
            return Verdict.refuted(r, f"relator {r} is not preserved")
    if inverse is not None:
        if _is_endomorphism(inverse, context) and all(
            context.equal(apply_map(m, apply_map(inverse, g)), g) and context.equal(apply_map(inverse, apply_map(m, g)), g)
            for g in gens
        ):
            return Verdict.verified(radius, "given inverse checks", witness=inverse)
    if context.is_free:
        missing = SubgroupGraph([apply_map(m, g) for g in gens]).missing_generators(context.alphabet)
        if missing:
            return Verdict.refuted(missing[0], f"{missing[0]} is not in the image")
    pre = {}
    for w in context.ball(radius):
        img = apply_map(m, w)
        for g in gens:
            if g not in pre and context.equal(img, g):
                pre[g] = w
        if len(pre) == len(gens):
            break
    if len(pre) < len(gens):
        missing = [g for g in gens if g not in pre]
        return Verdict.unknown(radius, f"no preimage of {missing[0]} of length <= {radius}")
    candidate = GeneratorMap(context.alphabet, [pre[g] for g in gens])
    if not _is_endomorphism(candidate, context):
        return Verdict.unknown(radius, "preimages found but they do not define an endomorphism")
    return Verdict.verified(radius, "inverse found", witness=candidate)


def _is_endomorphism(m: GeneratorMap, context: Group) -> bool:
    return all(context.is_identity(apply_map(m, r)) for r in context.relators)


# ---------------------------------------------------------------- basic sequences


@dataclass(frozen=True)
class BasicSequenceSpec:
    """Automorphisms ``beta_1..beta_t`` and ``delta_1..delta_q`` and a list of
    steps ``(p_1, ..., p_t, m_1, ..., m_q)``; ``lambdas`` is optional."""

    beta: tuple[GeneratorMap, ...]
    delta: tuple[GeneratorMap, ...]
    steps: tuple[tuple[int, ...], ...]
    lambdas: tuple[int, ...] = ()

    def __init__(self, beta: Sequence[GeneratorMap], delta: Sequence[GeneratorMap], steps: Iterable[Sequence[int]], lambdas: Sequence[int] = ()):
        beta, delta = tuple(beta), tuple(delta)
        steps = tuple(tuple(int(x) for x in s) for s in steps)
        width = len(beta) + len(delta)
        for s in steps:
            if len(s) != width:
                raise LengthMismatch(f"step {s} has {len(s)} entries, expected {width}")
            if any(x <= 0 for x in s):
                raise ValueError(f"step exponents must be positive: {s}")
        if any(x <= 0 for x in lambdas):
            raise ValueError("lambda values must be positive")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "lambdas", tuple(lambdas))

    @property
    def t(self) -> int:
        return len(self.beta)

    @property
    def q(self) -> int:
        return len(self.delta)


def _domain(spec: BasicSequenceSpec):
    maps = spec.beta + spec.delta
    if not maps:
        raise ValueError("a basic sequence needs at least one automorphism")
    return maps[0].domain


def basic_step(prev: GeneratorMap, spec: BasicSequenceSpec, step: Sequence[int]) -> GeneratorMap:
    """``phi_n`` from ``phi_{n-1}``: apply the deltas, then the betas."""
    p, m = step[: spec.t], step[spec.t :]
    out = prev
    for d, e in zip(spec.delta, m):
        out = out.then(d**e)
    for b, e in zip(spec.beta, p):
        out = out.then(b**e)
    return out


def basic_sequence(spec: BasicSequenceSpec) -> list[GeneratorMap]:
    """``[phi_1, ..., phi_N]``; with no steps, ``[identity]``.

    ``gamma_n = phi_{n-1} delta_1^m_1 ... delta_q^m_q`` and
    ``phi_n = gamma_n beta_1^p_1 ... beta_t^p_t`` with ``phi_0 = 1``.
    """
    phi = GeneratorMap.identity(_domain(spec))
    if not spec.steps:
        return [phi]
    out = []
    for step in spec.steps:
        phi = basic_step(phi, spec, step)
        out.append(phi)
    return out


def growth_vector(spec: BasicSequenceSpec, n: int | None = None, lam: int | None = None) -> tuple[int, ...]:
    """Exponents in the order the automorphisms are applied.

    ``(m_{.,1}, p_{.,1}, ..., m_{.,n}, p_{.,n}, lambda)`` has ``n(t+q)+1``
    entries when ``lam`` is given and ``n(t+q)`` otherwise.
    """
    steps = spec.steps if n is None else spec.steps[:n]
    out: list[int] = []
    for s in steps:
        out += list(s[spec.t :]) + list(s[: spec.t])
    if lam is not None:
        out.append(lam)
    return tuple(out)


def growth_check(L: Sequence[int], A: Sequence[int]) -> bool:
    """``L_1 >= A_1`` and ``L_{i+1} - L_i >= A_{i+1} - A_i`` for all ``i``.

    >>> growth_check((5, 9, 14), (2, 4, 6))
    True
    """
    if len(L) != len(A):
        raise LengthMismatch(f"lengths differ: {len(L)} and {len(A)}")
    if not L:
        return True
    if L[0] < A[0]:
        return False
    return all(L[i + 1] - L[i] >= A[i + 1] - A[i] for i in range(len(L) - 1))


def exponent_of(w: Word, u: Word) -> int | None:
    """``e`` with ``w = u^e`` in the free group, or None."""
    if u.is_identity:
        raise IdentityInput("u must be nontrivial")
    if w.is_identity:
        return 0
    r, k = root_and_centralizer(u)
    s, j = root_and_centralizer(w)
    if s == r:
        f = j
    elif s == r.inverse():
        f = -j
    else:
        return None
    return f // k if f % k == 0 else None


def b_large_check(images: Sequence[Word], u: Word, B: int) -> bool:
    """Are there ``b_1, ..., b_s > B`` with ``images[i] = u^(b_1 ... b_i)``?

    >>> from grouplab.words import Word
    >>> b_large_check([Word.parse("a^3"), Word.parse("a^12")], Word.parse("a"), 2)
    True
    """
    prev = 1
    for img in images:
        e = exponent_of(img, u)
        if e is None:
            return False
        if prev == 0:
            if e != 0:
                return False
            continue
        if e % prev:
            return False
        if e // prev <= B:
            return False
        prev = e
    return True


# ---------------------------------------------------------------- generic families


@dataclass(frozen=True)
class GenericFamilySpec:
    """Data for a generic family of solutions of ``system``.

    Members are ``phi_n . delta^lambda . sigma . theta . tau`` (applied left
    to right): ``phi_n`` from the basic sequence, the deltas raised to a
    common ``lambda`` when ``with_lambda`` is set, ``sigma`` one of the
    ``sigmas`` (identity if none), ``theta`` the product of the edge twists
    raised to their scheduled powers, and the base solution ``tau``.
    """

    system: EquationSystem
    beta: tuple[GeneratorMap, ...]
    delta: tuple[GeneratorMap, ...]
    tau: GeneratorMap
    with_lambda: bool = False
    theta: tuple[tuple[GeneratorMap, tuple[int, ...]], ...] = ()
    sigmas: tuple[GeneratorMap, ...] = ()

    def __post_init__(self):
        if not verify_solution(self.system, self.tau):
            raise SolutionCheckFailed("the base solution does not solve the system", witness=self.tau)

    @property
    def domain(self):
        return self.system.vars


def generic_family(spec: GenericFamilySpec, n_max: int, max_exp: int, min_exp: int = 1) -> list[tuple[dict, GeneratorMap]]:
    """Enumerate verified family members for ``n <= n_max`` and exponents in ``[min_exp, max_exp]``.

    Returns ``(parameters, map)`` pairs in lexicographic parameter order.
    Each map is checked against ``spec.system``; a failure raises
    :class:`SolutionCheckFailed` carrying the offending map.
    """
    vars = spec.domain
    identity = GeneratorMap.identity(vars)
    basic = BasicSequenceSpec(spec.beta, spec.delta, [])
    width = basic.t + basic.q
    exps = range(min_exp, max_exp + 1)
    lambdas = list(exps) if spec.with_lambda else [None]
    sigmas = list(spec.sigmas) or [identity]
    out: list[tuple[dict, GeneratorMap]] = []

    def tail(n: int):
        for lam in lambdas:
            head = identity
            if lam is not None:
                for d in spec.delta:
                    head = head.then(d**lam)
            for si, sigma in enumerate(sigmas):
                theta = identity
                powers = []
                for twist, schedule in spec.theta:
                    e = schedule[min(n, len(schedule)) - 1] if schedule else 0
                    powers.append(e)
                    theta = theta.then(twist**e)
                yield lam, si, tuple(powers), head.then(sigma).then(theta)

    def emit(phi: GeneratorMap, steps: tuple):
        n = len(steps)
        for lam, si, powers, rest in tail(n):
            mu = phi.then(rest).then(spec.tau)
            params = {"n": n, "steps": steps, "lambda": lam, "sigma": si, "theta": powers}
            if not verify_solution(spec.system, mu):
                raise SolutionCheckFailed(f"family member {params} is not a solution", witness=mu)
            out.append((params, mu))

    if n_max <= 0 or max_exp < min_exp:
        params = {"n": 0, "steps": (), "lambda": None, "sigma": None, "theta": ()}
        return [(params, spec.tau)]
    # shorter sequences first, lexicographic within each length
    for n in range(1, n_max + 1):
        _collect(identity, n, exps, width, basic, emit)
    return out


def _collect(phi0, n, exps, width, basic, emit):
    """Emit all members with exactly ``n`` steps, reusing shared prefixes."""

    def rec(phi, steps):
        if len(steps) == n:
            emit(phi, steps)
            return
        for step in itertools.product(exps, repeat=width):
            rec(basic_step(phi, basic, step), steps + (step,))

    rec(phi0, ())
