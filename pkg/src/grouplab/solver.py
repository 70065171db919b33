"""Brute-force search for solutions of equation systems in free groups.

Solutions are maps from the variables into ``F(A)`` (or into another group
with a word problem).  ``find_solutions`` returns every solution whose images
lie in the ball of a given radius, in shortlex order of the image tuples.

>>> from grouplab.equations import EquationSystem
>>> sys = EquationSystem("x", "a b", ["[x,a]"])
>>> [str(s["x"]) for s in find_solutions(sys, 2)]
['1', 'a', 'a^-1', 'a^2', 'a^-2']
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .equations import EquationSystem, is_strictly_quadratic
from .errors import AlphabetMismatch, ResourceLimit
from .groups import FreeGroup, Group
from .verdict import Verdict
from .words import Alphabet, GeneratorMap, Word, apply_map, ball, max_ball_size

Assignment = GeneratorMap


def _target(system: EquationSystem, group: Group | None) -> Group:
    return group if group is not None else FreeGroup(system.coeffs)


def _satisfies(system: EquationSystem, group: Group, images: Sequence[Word]) -> bool:
    m = GeneratorMap(system.vars, images)
    return all(group.is_identity(apply_map(m, eq)) for eq in system.equations)


def _search_chunk(args) -> list[tuple[Word, ...]]:
    system, group, first, rest = args
    found = []
    for head in first:
        for tail in itertools.product(*rest):
            images = (head,) + tail
            if _satisfies(system, group, images):
                found.append(images)
    return found


def find_solutions(
    system: EquationSystem,
    radius: int,
    group: Group | None = None,
    threads: int = 1,
) -> list[Assignment]:
    """All solutions with every image of length at most ``radius``.

    ``group`` defaults to the free group on the coefficients.  With
    ``threads > 1`` the search is split over worker processes; the result
    order does not depend on the split.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    group = _target(system, group)
    k = len(system.vars)
    target = group.alphabet
    if k == 0:
        ok = all(group.is_identity(eq) for eq in system.equations)
        return [GeneratorMap(system.vars, (), target)] if ok else []
    layer = ball(target, radius)
    total = len(layer) ** k
    if total > max_ball_size():
        raise ResourceLimit(f"{total} candidate assignments exceed the cap {max_ball_size()}")
    rest = [layer] * (k - 1)
    if threads > 1 and len(layer) > 1:
        size = -(-len(layer) // threads)
        chunks = [(system, group, layer[i : i + size], rest) for i in range(0, len(layer), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_search_chunk, chunks))
    else:
        parts = [_search_chunk((system, group, layer, rest))]
    return [GeneratorMap(system.vars, images, target) for part in parts for images in part]


def verify_solution(system: EquationSystem, assignment: Assignment, group: Group | None = None) -> bool:
    """True iff every equation of ``system`` becomes trivial under ``assignment``."""
    group = _target(system, group)
    missing = [v for v in system.vars if v not in assignment.domain]
    if missing:
        raise AlphabetMismatch(f"assignment does not cover variables {missing}")
    for img in assignment.images:
        for name in img.generators():
            if name not in group.alphabet:
                raise AlphabetMismatch(f"image letter {name!r} is outside {group.alphabet}")
    return all(group.is_identity(apply_map(assignment, eq)) for eq in system.equations)


def discriminates(words: Sequence[Word], family: Sequence[GeneratorMap], group: Group | None = None) -> Verdict:
    """Is there a map in ``family`` under which every word of ``words`` survives?

    A hit is Verified with ``witness=(index, map)``.  A miss is Unknown with
    the family size as its radius, since a finite family cannot show that no
    discriminating map exists.
    """
    words = list(words)
    if not words:
        return Verdict.verified(0, "no words to preserve")
    for i, m in enumerate(family):
        grp = group
        ok = True
        for w in words:
            img = apply_map(m, w)
            if (grp.is_identity(img) if grp is not None else img.is_identity):
                ok = False
                break
        if ok:
            return Verdict.verified(len(family), f"member {i} preserves all words", witness=(i, m))
    return Verdict.unknown(len(family), "every member kills some word")


def noncommutative_solution(
    eq: Word,
    vars: Alphabet | str,
    coeffs: Alphabet | str,
    radius: int,
    group: Group | None = None,
) -> Verdict:
    """Search the radius ball for a solution with two non-commuting images."""
    system = EquationSystem(vars, coeffs, [eq])
    if not is_strictly_quadratic(eq, system.vars):
        raise ValueError(f"{eq} is not strictly quadratic")
    group = _target(system, group)
    for sol in find_solutions(system, radius, group):
        imgs = sol.images
        for i in range(len(imgs)):
            for j in range(i + 1, len(imgs)):
                if not group.commutes(imgs[i], imgs[j]):
                    return Verdict.verified(radius, f"{system.vars.names[i]}, {system.vars.names[j]} do not commute", witness=sol)
    return Verdict.unknown(radius, "every solution found has commuting images")


def format_assignment(assignment: Assignment) -> str:
    return " ".join(f"{n}={img}" for n, img in zip(assignment.domain.names, assignment.images))
