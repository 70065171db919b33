"""Triangular quasi-quadratic systems (NTQ towers) over a free group.

A tower lists levels from the top down.  Level ``i`` has variables ``X_i``
and equations over ``X_i``, the variables of the levels below it, and the
coefficients.  The level forms are

* ``I``: a single quadratic equation in standard form;
* ``II``: ``[x, y] = 1`` and ``[x, u] = 1`` for all ``x, y`` in ``X_i`` and
  ``u`` in a set ``U`` of words from below;
* ``III``: ``[x, y] = 1`` for all ``x, y`` in ``X_i``;
* ``IV``: no equations.

The group at level ``i + 1`` has a word problem here exactly when every
level below ``i`` has form II, III or IV: such a group is an iterated
centralizer extension of a free group (form IV and the first variable of
a form III level become free generators, every other variable a stable
letter).  Checks at levels sitting over a form I level rely on witnesses
and on user-supplied maps to ``F(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .equations import EquationSystem, euler_characteristic, match_standard_form
from .errors import ChainMismatch, MissingWitness, NotStandardForm, SolutionCheckFailed
from .groups import FreeGroup, Group
from .solver import noncommutative_solution, verify_solution
from .tower import CentralizerTower
from .verdict import Verdict, combine
from .words import Alphabet, GeneratorMap, Word, apply_map, commutator, parse_word

FORMS = ("I", "II", "III", "IV")


@dataclass(frozen=True)
class NTQLevel:
    vars: Alphabet
    form: str
    equations: tuple[Word, ...] = ()
    U: tuple[Word, ...] = ()

    def __init__(self, vars, form: str, equations: Sequence[Word | str] = (), U: Sequence[Word | str] = ()):
        if form not in FORMS:
            raise ValueError(f"unknown level form {form!r}")
        object.__setattr__(self, "vars", vars if isinstance(vars, Alphabet) else Alphabet(vars))
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "equations", tuple(parse_word(e) if isinstance(e, str) else e for e in equations))
        object.__setattr__(self, "U", tuple(parse_word(u) if isinstance(u, str) else u for u in U))


@dataclass(frozen=True)
class NTQTower:
    levels: tuple[NTQLevel, ...]
    coeffs: Alphabet

    def __init__(self, levels: Sequence[NTQLevel], coeffs):
        object.__setattr__(self, "levels", tuple(levels))
        object.__setattr__(self, "coeffs", coeffs if isinstance(coeffs, Alphabet) else Alphabet(coeffs))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def below(self, i: int) -> Alphabet:
        """Letters available to level ``i``'s coefficients: ``X_{i+1}, ..., X_n, A``."""
        names: list[str] = []
        for lv in self.levels[i + 1 :]:
            names += lv.vars.names
        return Alphabet(names + list(self.coeffs.names))

    def all_vars(self) -> Alphabet:
        names: list[str] = []
        for lv in self.levels:
            names += lv.vars.names
        return Alphabet(names)

    def flattened(self) -> EquationSystem:
        eqs = [eq for lv in self.levels for eq in lv.equations]
        return EquationSystem(self.all_vars(), self.coeffs, eqs)


def _commutator_set(pairs) -> set[Word]:
    return {commutator(u, v) for u, v in pairs}


def _check_commutation_level(level: NTQLevel, with_u: bool) -> str | None:
    xs = level.vars.gens()
    required = {(xs[i], xs[j]) for i in range(len(xs)) for j in range(i + 1, len(xs))}
    if with_u:
        required |= {(x, u) for x in xs for u in level.U}
    req = _commutator_set(required)
    seen = set()
    for eq in level.equations:
        if eq in req:
            seen.add(eq)
        elif eq.inverse() in req:
            seen.add(eq.inverse())
        else:
            return f"equation {eq} is not of the required commutator shape"
    if seen != req:
        missing = sorted(str(w) for w in req - seen)
        return f"missing commutation equations: {', '.join(missing)}"
    return None


def validate_structure(tower: NTQTower) -> Verdict:
    """Check the partition of variables, scoping and the form of each level.

    A failure is Refuted with witness ``(level index, reason)``.
    """
    seen: dict[str, int] = {}
    for i, lv in enumerate(tower.levels):
        for v in lv.vars:
            if v in tower.coeffs:
                return Verdict.refuted((i, f"variable {v} is also a coefficient"))
            if v in seen:
                return Verdict.refuted((i, f"variable {v} also appears at level {seen[v]}"))
            seen[v] = i
    for i, lv in enumerate(tower.levels):
        allowed = set(lv.vars) | set(tower.below(i))
        for eq in lv.equations + lv.U:
            bad = sorted(eq.generators() - allowed)
            if bad:
                return Verdict.refuted((i, f"{eq} uses {', '.join(bad)} outside its scope"))
        for u in lv.U:
            if u.generators() & set(lv.vars):
                return Verdict.refuted((i, f"U element {u} uses a variable of its own level"))
        problem = None
        if lv.form == "I":
            if len(lv.equations) != 1:
                problem = "form I needs exactly one equation"
            else:
                try:
                    match_standard_form(lv.equations[0], lv.vars)
                except NotStandardForm as exc:
                    problem = str(exc)
        elif lv.form == "II":
            if not lv.U:
                problem = "form II needs a nonempty U"
            else:
                problem = _check_commutation_level(lv, True)
        elif lv.form == "III":
            if lv.U:
                problem = "form III takes no U"
            else:
                problem = _check_commutation_level(lv, False)
        elif lv.form == "IV":
            if lv.equations or lv.U:
                problem = "form IV has no equations"
        if problem:
            return Verdict.refuted((i, problem))
    return Verdict.verified(None, f"depth {tower.depth}")


def context_group(tower: NTQTower, i: int) -> Group | None:
    """The group ``G_{i+1}`` under level ``i``, if it has a word problem here.

    Returns None when some level below ``i`` has form I.
    """
    below = tower.levels[i + 1 :]
    if any(lv.form == "I" for lv in below):
        return None
    base = list(tower.coeffs.names)
    for lv in below:
        if lv.form == "IV":
            base += lv.vars.names
        elif lv.form == "III" and len(lv.vars):
            base.append(lv.vars.names[0])
    if all(lv.form == "IV" or (lv.form == "III" and len(lv.vars) <= 1) for lv in below):
        return FreeGroup(Alphabet(base))
    group = CentralizerTower(Alphabet(base))
    for lv in reversed(below):
        xs = lv.vars.gens()
        if lv.form == "II":
            for j, x in enumerate(xs):
                group = group.with_level(list(lv.U) + xs[:j], lv.vars.names[j])
        elif lv.form == "III":
            for j in range(1, len(xs)):
                group = group.with_level(xs[:j], lv.vars.names[j])
    return group


def check_nondegenerate(
    tower: NTQTower,
    witnesses: Mapping[int, GeneratorMap],
    radius: int,
    homs: Sequence[GeneratorMap] = (),
) -> Verdict:
    """Check that each level's witness solves it one level down.

    The check is exact when the group below has a word problem.  Otherwise
    the witness equations are pushed through each map in ``homs`` (maps
    from the lower variables to ``F(A)`` that solve the lower levels); the
    result is then Verified with ``extra["tier"] == "under-family"``, or
    Unknown without such maps.  Form II levels also need ``U`` to generate a
    centralizer.  ``extra["levels"]`` holds the per-level verdicts.
    """
    per_level: list[Verdict] = []
    free = FreeGroup(tower.coeffs)
    for i, lv in enumerate(tower.levels):
        if not lv.equations:
            per_level.append(Verdict.verified(radius, "no equations", tier="exact"))
            continue
        if i not in witnesses:
            raise MissingWitness(f"level {i} has equations but no witness")
        wit = witnesses[i]
        group = context_group(tower, i)
        below = EquationSystem(tower.below(i).names[: len(tower.below(i)) - len(tower.coeffs)], tower.coeffs,
                               [eq for lv2 in tower.levels[i + 1 :] for eq in lv2.equations])
        images = [apply_map(wit, eq) for eq in lv.equations]
        parts = []
        if group is not None:
            bad = [eq for eq, img in zip(lv.equations, images) if not group.is_identity(img)]
            if bad:
                parts.append(Verdict.refuted((i, bad[0]), f"witness does not solve {bad[0]}"))
            else:
                parts.append(Verdict.verified(radius, "witness solves the level", tier="exact"))
            if lv.form == "II":
                parts.append(_centralizer_check(group, lv.U, i, radius))
            verdict = combine(parts)
            tier = "exact"
        elif homs:
            verdict = Verdict.verified(radius, f"witness survives {len(homs)} maps", tier="under-family")
            for h in homs:
                if not verify_solution(below, h, free):
                    raise SolutionCheckFailed(f"map {h} does not solve the levels below {i}", witness=h)
                for eq, img in zip(lv.equations, images):
                    if not apply_map(h, img).is_identity:
                        verdict = Verdict.refuted((i, eq), f"{eq} under the witness is nontrivial after {h}")
                        break
                if verdict.is_refuted:
                    break
            if lv.form == "II" and not verdict.is_refuted:
                verdict = combine([verdict, Verdict.unknown(radius, "centralizer check needs a word problem below")])
            tier = "under-family"
        else:
            verdict = Verdict.unknown(radius, "no word problem below and no maps to push forward")
            tier = "unknown"
        per_level.append(Verdict(verdict.status, verdict.radius, verdict.witness, verdict.detail, {"tier": tier}))
    total = combine(per_level)
    tiers = [v.extra.get("tier") for v in per_level]
    tier = "exact" if all(t == "exact" for t in tiers) else ("unknown" if "unknown" in tiers else "under-family")
    return Verdict(total.status, total.radius, total.witness, total.detail, {"levels": per_level, "tier": tier})


def _centralizer_check(group: Group, U: Sequence[Word], i: int, radius: int) -> Verdict:
    us = [u for u in U if not group.is_identity(u)]
    if not us:
        return Verdict.refuted((i, "U"), "U generates the trivial group")
    for a in us:
        for b in us:
            if not group.commutes(a, b):
                return Verdict.refuted((i, (a, b)), "U is not abelian")
    w = group.maximal_abelian_witness(us)
    if w is not None:
        return Verdict.refuted(w, f"{w} centralizes U but is not in <U>")
    return Verdict.verified(radius, "U generates a centralizer")


EXEMPT_DETAIL = {"commutator-d": "[x,y]d=1 shape", "genus-two": "[x1,y1][x2,y2]=1 shape"}


def _exempt(form) -> str | None:
    if form.kind == "punctured-orientable" and form.genus == 1 and form.m == 0:
        return "commutator-d"
    if form.kind == "closed-orientable" and form.genus == 2:
        return "genus-two"
    return None


def check_regular(tower: NTQTower, radius: int) -> Verdict:
    """Each form I level is an exempt shape, or has ``chi <= -2`` and a
    non-commutative solution of length at most ``radius`` one level down."""
    parts = []
    for i, lv in enumerate(tower.levels):
        if lv.form != "I":
            continue
        eq = lv.equations[0]
        form = match_standard_form(eq, lv.vars)
        shape = _exempt(form)
        if shape:
            parts.append(Verdict.verified(radius, f"level {i}: {EXEMPT_DETAIL[shape]}"))
            continue
        chi = euler_characteristic(form)
        if chi > -2:
            parts.append(Verdict.refuted((i, chi), f"level {i} has Euler characteristic {chi} > -2"))
            continue
        group = context_group(tower, i)
        if group is None:
            parts.append(Verdict.unknown(radius, f"level {i}: no word problem below"))
            continue
        v = noncommutative_solution(eq, lv.vars, group.alphabet, radius, group)
        parts.append(v if v.is_verified else Verdict.unknown(radius, f"level {i}: no non-commutative solution found"))
    if not parts:
        return Verdict.verified(radius, "no quadratic levels")
    total = combine(parts)
    detail = "; ".join(p.detail for p in parts if p.status == total.status and p.detail)
    return Verdict(total.status, total.radius, total.witness, detail, total.extra)


def compose_to_base(tower: NTQTower, assignments: Mapping[int, GeneratorMap]) -> GeneratorMap:
    """Compose per-level solutions into one map from all variables to ``F(A)``.

    ``assignments[i]`` sends ``X_i`` into words over the lower variables and
    coefficients.  The composite is checked against every tower equation.
    """
    if not tower.levels:
        return GeneratorMap.identity(tower.coeffs)
    images: dict[str, Word] = {}
    for i in range(tower.depth - 1, -1, -1):
        lv = tower.levels[i]
        allowed = set(tower.below(i))
        asg = assignments.get(i)
        if asg is None:
            raise ChainMismatch(f"no assignment for level {i}")
        for v in lv.vars:
            if v not in asg.domain:
                raise ChainMismatch(f"assignment for level {i} misses {v}")
            img = asg[v]
            bad = img.generators() - allowed
            if bad:
                raise ChainMismatch(f"image of {v} uses {', '.join(sorted(bad))}, not below level {i}")
            sub = GeneratorMap.from_dict(images, domain=Alphabet(images.keys())) if images else None
            images[v] = apply_map(sub, img) if sub else img
    names = tower.all_vars()
    result = GeneratorMap(names, [images[n] for n in names], tower.coeffs)
    if not verify_solution(tower.flattened(), result):
        raise SolutionCheckFailed("composed map does not solve the tower", witness=result)
    return result
