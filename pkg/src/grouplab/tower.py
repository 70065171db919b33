"""Iterated extensions of centralizers of a free group.

A :class:`CentralizerTower` starts from ``F(base)`` and adds stable letters
``t_1, ..., t_n``.  Level ``k`` is ``<G_{k-1}, t_k | [u, t_k] = 1, u in U_k>``
where ``U_k`` generates the centralizer of an element of ``G_{k-1}``.

Each group ``G_k`` is an HNN extension of ``G_{k-1}``, so its word problem is
solved by pinch removal once membership in ``<U_k>`` is decidable.  Every
maximal abelian subgroup met so far is a conjugate ``c^-1 <p, s_1, ..., s_r> c``
where ``p`` is a cyclically reduced base word that is not a proper power and
each ``s_j`` is a conjugate of a stable letter.  Membership in such a block
reads the ``s_j`` exponents off the exponent sums (every relator is a
commutator, so exponent sums are well defined), strips them, and checks that
what remains is a base word and a power of ``p``.

Elements whose centralizer is not of this kind (those not conjugate into
the base group) are outside the implemented range and raise
:class:`~grouplab.errors.MembershipUndecided`.

>>> T = CentralizerTower("a b").extend(Word.parse("a"), "t")
>>> str(britton_reduce(T, Word.parse("t^-1 a^2 t b")))
'a^2 b'
>>> word_problem(T, Word.parse("[b,t]"))
False
>>> [str(u) for u in T.extend(Word.parse("a"), "s").levels[-1][0]]
['a', 't']
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import IdentityInput, MembershipUndecided, NotAbelian, UnknownGenerator
from .groups import Group
from .lattice import solve_integer
from .splittings import HNNSplitting, britton
from .words import Alphabet, GeneratorMap, Word, commutator, parse_word, power_exponent, root_and_centralizer


@dataclass(frozen=True)
class Block:
    """The abelian subgroup ``conj^-1 <p, s_1, ..., s_r> conj``.

    ``extras`` holds pairs ``(s_j, stable letter of s_j)``.
    """

    conj: Word
    p: Word
    extras: tuple[tuple[Word, str], ...]

    def basis(self) -> list[Word]:
        return [self.p.conjugate(self.conj)] + [s.conjugate(self.conj) for s, _ in self.extras]

    @property
    def rank(self) -> int:
        return 1 + len(self.extras)


def canonical_root(r: Word, alphabet: Alphabet) -> tuple[Word, Word, int]:
    """Return ``(p, x, sign)`` with ``r = x^-1 p^sign x`` and ``p`` canonical.

    ``r`` must be cyclically reduced; ``p`` is the shortlex-least cyclic
    permutation of ``r`` or ``r^-1``.
    """
    best = None
    for sign, word in ((1, r), (-1, r.inverse())):
        letters = word.letters
        for i in range(len(letters)):
            rot = Word(letters[i:] + letters[:i])
            key = (len(rot), tuple(alphabet.letter_rank(x) for x in rot.letters))
            if best is None or key < best[0]:
                # word = head rot head^-1 with head = letters[:i]
                best = (key, rot, Word(letters[:i]).inverse(), sign)
    _, p, x, sign = best
    return p, x, sign


def _stable_count(w: Word, stables: set[str]) -> int:
    return sum(1 for name, _ in w.letters if name in stables)


class CentralizerTower(Group):
    """A free group with finitely many centralizer extensions on top.

    ``levels`` is a sequence of ``(U, stable_name)`` pairs.  Each ``U`` must
    lie in one maximal abelian subgroup of the level below; it must generate
    all of it except possibly at the top level.
    """

    def __init__(self, base: Alphabet | str | Iterable[str], levels: Sequence[tuple[Sequence[Word | str], str]] = ()):
        base = base if isinstance(base, Alphabet) else Alphabet(base)
        tower = _Level(base)
        for gens, stable in levels:
            tower = tower.add_level([parse_word(g) if isinstance(g, str) else g for g in gens], stable)
        self._top = tower

    @classmethod
    def _wrap(cls, top: "_Level") -> CentralizerTower:
        obj = cls.__new__(cls)
        obj._top = top
        return obj

    # structure ----------------------------------------------------------
    @property
    def base(self) -> Alphabet:
        return self._top.base

    @property
    def alphabet(self) -> Alphabet:
        return self._top.alphabet

    @property
    def levels(self) -> list[tuple[tuple[Word, ...], str]]:
        out = []
        node = self._top
        while node.parent is not None:
            out.append((node.U, node.stable))
            node = node.parent
        return out[::-1]

    @property
    def depth(self) -> int:
        return self._top.depth

    @property
    def stable_letters(self) -> list[str]:
        return [t for _, t in self.levels]

    @property
    def relators(self) -> tuple[Word, ...]:
        rels = []
        for U, t in self.levels:
            rels += [commutator(u, Word.gen(t)) for u in U]
        return tuple(rels)

    @property
    def is_free(self) -> bool:
        return self.depth == 0

    def __repr__(self) -> str:
        lv = "; ".join(f"{t}: {', '.join(map(str, U))}" for U, t in self.levels)
        return f"CentralizerTower({str(self.base)!r}, [{lv}])"

    def truncated(self, depth: int) -> CentralizerTower:
        node = self._top
        while node.depth > depth:
            node = node.parent
        return CentralizerTower._wrap(node)

    def extend(self, u: Word, stable: str) -> CentralizerTower:
        """Extend the centralizer of ``u`` by a new stable letter."""
        return CentralizerTower._wrap(self._top.extend(u, stable))

    def with_level(self, gens: Sequence[Word], stable: str) -> CentralizerTower:
        return CentralizerTower._wrap(self._top.add_level(list(gens), stable))

    def retraction(self) -> GeneratorMap:
        """The map onto the level below sending the top stable letter to 1."""
        if self.depth == 0:
            raise ValueError("the base level has no retraction")
        images = [Word() if n == self._top.stable else Word.gen(n) for n in self.alphabet]
        return GeneratorMap(self.alphabet, images, self._top.parent.alphabet)

    def top_splitting(self) -> HNNSplitting:
        """The top level as an HNN extension of the tower below it."""
        if self.depth == 0:
            raise ValueError("the base level is not split")
        return HNNSplitting(self.truncated(self.depth - 1), self._top.stable, self._top.U)

    # group interface -----------------------------------------------------
    def reduce(self, w: Word) -> Word:
        return self._top.reduce(w)

    def normal_form(self, w: Word) -> Word:
        return self._top.reduce(w)

    def is_identity(self, w: Word) -> bool:
        return self._top.reduce(w).is_identity

    def centralizer_block(self, u: Word) -> Block:
        return self._top.centralizer_block(u)

    def block_coordinates(self, block: Block, w: Word) -> list[int] | None:
        return self._top.block_coordinates(block, w)

    def abelian_coordinates(self, gens: Sequence[Word], w: Word) -> list[int] | None:
        return self._top.abelian_coordinates(gens, w)

    def maximal_abelian_witness(self, gens: Sequence[Word]) -> Word | None:
        return self._top.maximal_abelian_witness(gens)


class _Level:
    """One node of the tower; ``parent`` is the level below (None at the base)."""

    def __init__(self, base: Alphabet, parent: _Level | None = None, stable: str | None = None,
                 U: tuple[Word, ...] = (), block: Block | None = None, matrix=None, full=True, registry=None):
        self.base = base
        self.parent = parent
        self.stable = stable
        self.U = U
        self.block = block
        self.matrix = matrix
        self.full = full
        self.registry = registry if registry is not None else {}
        if parent is None:
            self.alphabet = base
            self.depth = 0
            self.sealed = False
            self.stables = set()
        else:
            self.alphabet = parent.alphabet.union([stable])
            self.depth = parent.depth + 1
            self.sealed = not full
            self.stables = parent.stables | {stable}

    # building -------------------------------------------------------------
    def add_level(self, gens: list[Word], stable: str) -> _Level:
        if self.sealed:
            raise MembershipUndecided("a level over a non-maximal abelian edge group cannot be extended")
        if stable in self.alphabet:
            raise ValueError(f"stable letter {stable!r} is already in use")
        gens = [self.reduce(g) for g in gens]
        nontrivial = [g for g in gens if not g.is_identity]
        if not nontrivial:
            raise IdentityInput("a centralizer level needs a nontrivial generator")
        block = self.centralizer_block(nontrivial[0])
        columns = []
        for g in gens:
            c = self.block_coordinates(block, g)
            if c is None:
                raise NotAbelian(f"{g} does not commute with {nontrivial[0]}")
            columns.append(c)
        full = all(solve_integer(columns, [int(i == j) for i in range(block.rank)]) is not None for j in range(block.rank))
        registry = dict(self.registry)
        if full:
            s = Word.gen(stable).conjugate(block.conj.inverse())
            registry[block.p] = registry.get(block.p, ()) + ((s, stable),)
        return _Level(self.base, self, stable, tuple(gens), block, columns, full, registry)

    def extend(self, u: Word, stable: str) -> _Level:
        u = self.reduce(u)
        if u.is_identity:
            raise IdentityInput("cannot extend the centralizer of the identity")
        return self.add_level(self.centralizer_block(u).basis(), stable)

    # word problem ---------------------------------------------------------
    def reduce(self, w: Word) -> Word:
        if self.parent is None:
            for name, _ in w.letters:
                if name not in self.base:
                    raise UnknownGenerator(f"{name!r} is not in alphabet {self.alphabet}")
            return w
        return britton(w, self.stable, self.parent.reduce, self._in_edge, self._in_edge, self.parent.alphabet)

    def _in_edge(self, g: Word) -> Word | None:
        coords = self.parent.block_coordinates(self.block, g)
        if coords is None:
            return None
        if not self.full and solve_integer(self.matrix, coords) is None:
            return None
        return g

    # abelian subgroups ----------------------------------------------------
    def _conjugate_into_base(self, u: Word) -> tuple[Word, Word]:
        """Return ``(conj, core)`` with ``u = conj^-1 core conj`` and ``core`` a
        cyclically reduced base word."""
        conj = Word()
        while True:
            if _stable_count(u, self.stables) == 0:
                pre, core = u.cyclic_decomposition()
                return pre.inverse() * conj, core
            measure = (_stable_count(u, self.stables), len(u))
            letters = u.letters
            best = None
            for i in range(1, len(letters)):
                head = Word(letters[:i])
                rot = self.reduce(Word(letters[i:] + letters[:i]))
                m = (_stable_count(rot, self.stables), len(rot))
                if m < measure and (best is None or m < best[0]):
                    best = (m, rot, head)
            if best is None:
                raise MembershipUndecided(f"{u} is not conjugate into the base group; its centralizer is not handled")
            _, u, head = best
            # old u = head rot head^-1
            conj = head.inverse() * conj

    def centralizer_block(self, u: Word) -> Block:
        if self.sealed:
            raise MembershipUndecided("centralizers above a non-maximal abelian edge group are not handled")
        u = self.reduce(u)
        if u.is_identity:
            raise IdentityInput("the identity has no proper centralizer")
        conj, core = self._conjugate_into_base(u)
        r, _ = root_and_centralizer(core)
        p, x, _ = canonical_root(r, self.base)
        return Block(x * conj, p, self.registry.get(p, ()))

    def block_coordinates(self, block: Block, w: Word) -> list[int] | None:
        v = self.reduce(block.conj * w * block.conj.inverse())
        exps = [v.exponent_sum(t) for _, t in block.extras]
        for (s, _), e in zip(block.extras, exps):
            v = v * s ** (-e)
        v = self.reduce(v)
        if _stable_count(v, self.stables):
            return None
        f = power_exponent(v, block.p)
        if f is None:
            return None
        return [f] + exps

    def abelian_coordinates(self, gens: Sequence[Word], w: Word) -> list[int] | None:
        gens = [self.reduce(g) for g in gens]
        w = self.reduce(w)
        nontrivial = [g for g in gens if not g.is_identity]
        if w.is_identity:
            return [0] * len(gens)
        if not nontrivial:
            return None
        block = self.centralizer_block(nontrivial[0])
        columns = []
        for g in gens:
            c = self.block_coordinates(block, g)
            if c is None:
                raise NotAbelian(f"{g} does not commute with {nontrivial[0]}")
            columns.append(c)
        target = self.block_coordinates(block, w)
        if target is None:
            return None
        return solve_integer(columns, target)

    def maximal_abelian_witness(self, gens: Sequence[Word]) -> Word | None:
        nontrivial = [self.reduce(g) for g in gens]
        nontrivial = [g for g in nontrivial if not g.is_identity]
        if not nontrivial:
            return None
        block = self.centralizer_block(nontrivial[0])
        for b in block.basis():
            if self.abelian_coordinates(list(gens), b) is None:
                return b
        return None


def britton_reduce(tower: CentralizerTower, w: Word) -> Word:
    """Pinch-free form of ``w``; it is empty exactly when ``w`` is trivial."""
    return tower.reduce(w)


def word_problem(tower: CentralizerTower, w: Word) -> bool:
    """True iff ``w`` is the identity of the tower group."""
    return tower.is_identity(w)


def extend_centralizer(tower: CentralizerTower, u: Word, stable: str) -> CentralizerTower:
    """Append a level extending the centralizer of ``u`` by ``stable``."""
    return tower.extend(u, stable)
