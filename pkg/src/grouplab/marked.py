"""Marked groups seen through their kernels in ``F_n``.

A marking sends the basis ``x1, ..., xn`` of ``F_n`` to ``n`` elements of a
group with a word problem.  Two markings are close when their kernels agree
on a large ball: the distance is ``exp(-R)`` with ``R`` the largest radius
of agreement.  Only a finite cutoff can be inspected, so a distance is
either exact or an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import LengthMismatch, ResourceLimit
from .groups import Group
from .words import Alphabet, GeneratorMap, Word, apply_map, ball_size, max_ball_size, parse_word, sphere


def basis(n: int) -> Alphabet:
    return Alphabet([f"x{i + 1}" for i in range(n)])


@dataclass(frozen=True)
class Marking:
    n: int
    target: Group
    images: tuple[Word, ...]

    def __init__(self, n: int, target: Group, images: Sequence[Word | str]):
        if n < 1:
            raise ValueError("a marking needs n >= 1")
        imgs = tuple(parse_word(w) if isinstance(w, str) else w for w in images)
        if len(imgs) != n:
            raise LengthMismatch(f"{len(imgs)} images for n = {n}")
        imgs = tuple(target.reduce(w) for w in imgs)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", imgs)

    @property
    def map(self) -> GeneratorMap:
        return GeneratorMap(basis(self.n), self.images)

    def kills(self, w: Word) -> bool:
        return self.target.is_identity(apply_map(self.map, w))


@dataclass(frozen=True)
class KernelBall:
    radius: int
    members: tuple[Word, ...]


def _check_cap(n: int, radius: int) -> None:
    size = ball_size(n, radius)
    if size > max_ball_size():
        raise ResourceLimit(f"ball of radius {radius} in F_{n} has {size} words (cap {max_ball_size()})")


def _kernel_layers(m: Marking, radius: int):
    """Yield the shortlex-sorted kernel elements of each sphere."""
    _check_cap(m.n, radius)
    for layer in sphere(basis(m.n), radius):
        yield [w for w in layer if m.kills(w)]


def kernel_ball(m: Marking, radius: int) -> KernelBall:
    """Words of length at most ``radius`` that the marking kills.

    >>> from grouplab.groups import FreeGroup
    >>> kernel_ball(Marking(2, FreeGroup("a"), ["a", "a"]), 2).members
    (Word('1'), Word('x1 x2^-1'), Word('x1^-1 x2'), Word('x2 x1^-1'), Word('x2^-1 x1'))
    """
    members: list[Word] = []
    for layer in _kernel_layers(m, radius):
        members.extend(layer)
    return KernelBall(radius, tuple(members))


@dataclass(frozen=True)
class Distance:
    """``Exact`` when the kernels first differ at ``disagreement <= cutoff``.

    ``agreement`` is the largest radius of agreement seen; the distance is
    ``exp(-agreement)`` when exact, and at most ``exp(-cutoff)`` otherwise.
    """

    kind: str
    agreement: int
    disagreement: int | None
    cutoff: int

    @property
    def value(self) -> float:
        return math.exp(-self.agreement)

    @property
    def exact(self) -> bool:
        return self.kind == "Exact"

    def __str__(self) -> str:
        if self.exact:
            return f"Exact(exp(-{self.agreement})) = {self.value:.6g}; first disagreement at radius {self.disagreement}"
        return f"AtMost(exp(-{self.cutoff})) = {self.value:.6g}; kernels agree up to radius {self.cutoff}"


def distance_at_cutoff(m1: Marking, m2: Marking, cutoff: int) -> Distance:
    if m1.n != m2.n:
        raise LengthMismatch(f"markings of F_{m1.n} and F_{m2.n} cannot be compared")
    _check_cap(m1.n, cutoff)
    for r, layer in enumerate(sphere(basis(m1.n), cutoff)):
        for w in layer:
            if m1.kills(w) != m2.kills(w):
                return Distance("Exact", r - 1, r, cutoff)
    return Distance("AtMost", cutoff, None, cutoff)


@dataclass(frozen=True)
class ConvergenceRow:
    radius: int
    stable_from: int | None
    relations: tuple[Word, ...]

    def __str__(self) -> str:
        if self.stable_from is None:
            return f"R={self.radius} unstable"
        rels = ", ".join(str(w) for w in self.relations) or "-"
        return f"R={self.radius} stable from index {self.stable_from}; relations: {rels}"


def convergence_table(seq: Sequence[Marking], cutoff: int) -> list[ConvergenceRow]:
    """For each radius, the index after which kernel balls no longer change.

    A radius is unstable when the last two markings already disagree, since
    a finite sequence gives no evidence of convergence there.  Stable rows
    list the nontrivial kernel elements as candidate limit relations.
    """
    if not seq:
        return []
    n = seq[0].n
    if any(m.n != n for m in seq):
        raise LengthMismatch("all markings need the same n")
    _check_cap(n, cutoff)
    kernels = [kernel_ball(m, cutoff).members for m in seq]
    rows = []
    for r in range(cutoff + 1):
        cut = [tuple(w for w in k if len(w) <= r) for k in kernels]
        j = len(cut) - 1
        while j > 0 and cut[j - 1] == cut[-1]:
            j -= 1
        if len(cut) > 1 and j == len(cut) - 1:
            rows.append(ConvergenceRow(r, None, ()))
        else:
            rows.append(ConvergenceRow(r, j, tuple(w for w in cut[-1] if not w.is_identity)))
    return rows
