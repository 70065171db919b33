"""Groups with a solvable word problem, behind one small interface.

Every group here is presented on an :class:`~grouplab.words.Alphabet` and
works with :class:`~grouplab.words.Word` values.  The methods shared by
:class:`FreeGroup`, :class:`FreeAbelianGroup` and
:class:`~grouplab.tower.CentralizerTower` are

``normal_form(w)``
    a hashable canonical form; equal forms mean equal elements;
``is_identity(w)``, ``equal(u, v)``, ``commutes(u, v)``;
``abelian_coordinates(gens, w)``
    integers ``c`` with ``w = prod gens[j]^c[j]`` when ``gens`` pairwise
    commute, or None when ``w`` is not in the subgroup they generate;
``relators``
    defining relators over the alphabet.
"""

from __future__ import annotations

from typing import Sequence

from .errors import UnknownGenerator
from .lattice import solve_integer
from .words import Alphabet, Word, ball, check_alphabet, commutator, power_exponent, root_and_centralizer


class Group:
    alphabet: Alphabet
    relators: tuple[Word, ...] = ()

    def normal_form(self, w: Word):
        raise NotImplementedError

    def reduce(self, w: Word) -> Word:
        """A word for the same element; the empty word exactly for the identity."""
        raise NotImplementedError

    def is_identity(self, w: Word) -> bool:
        raise NotImplementedError

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_identity(u.inverse() * v)

    def commutes(self, u: Word, v: Word) -> bool:
        return self.is_identity(commutator(u, v))

    def abelian_coordinates(self, gens: Sequence[Word], w: Word) -> list[int] | None:
        raise NotImplementedError

    def contains(self, gens: Sequence[Word], w: Word) -> bool:
        return self.abelian_coordinates(gens, w) is not None

    def ball(self, radius: int) -> list[Word]:
        return ball(self.alphabet, radius)

    @property
    def is_free(self) -> bool:
        return False


class FreeGroup(Group):
    """The free group on ``alphabet``.

    >>> F = FreeGroup("a b")
    >>> F.abelian_coordinates([Word.parse("a^2"), Word.parse("a^3")], Word.parse("a"))
    [-1, 1]
    """

    def __init__(self, alphabet: Alphabet | str):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        self.relators = ()

    def __repr__(self) -> str:
        return f"FreeGroup({str(self.alphabet)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeGroup) and other.alphabet == self.alphabet

    def __hash__(self) -> int:
        return hash(("free", self.alphabet))

    @property
    def is_free(self) -> bool:
        return True

    def normal_form(self, w: Word) -> Word:
        check_alphabet(w, self.alphabet)
        return w

    reduce = normal_form

    def is_identity(self, w: Word) -> bool:
        check_alphabet(w, self.alphabet)
        return w.is_identity

    def common_root(self, gens: Sequence[Word]) -> Word | None:
        """Root ``u`` with every nontrivial ``g`` a power of ``u``; None if they do not commute."""
        root = None
        for g in gens:
            if g.is_identity:
                continue
            u, _ = root_and_centralizer(g)
            if root is None:
                root = u
            elif u != root and u != root.inverse():
                return None
        return root

    def abelian_coordinates(self, gens: Sequence[Word], w: Word) -> list[int] | None:
        check_alphabet(w, self.alphabet)
        if w.is_identity:
            return [0] * len(gens)
        if all(g.is_identity for g in gens):
            return None
        root = self.common_root(gens)
        if root is None:
            raise ValueError("abelian_coordinates needs pairwise commuting generators")
        f = power_exponent(w, root)
        if f is None:
            return None
        exps = [power_exponent(g, root) for g in gens]
        return solve_integer([(e,) for e in exps], (f,))

    def maximal_abelian_witness(self, gens: Sequence[Word]) -> Word | None:
        """An element commuting with ``gens`` but outside ``<gens>``, if any.

        Centralizers of nontrivial elements in a free group are cyclic, so
        the only candidate is the common root.
        """
        root = self.common_root(gens)
        if root is None:
            return None
        if self.abelian_coordinates(gens, root) is None:
            return root
        return None


class FreeAbelianGroup(Group):
    """Free abelian group on ``alphabet``; elements are exponent vectors."""

    def __init__(self, alphabet: Alphabet | str | int):
        if isinstance(alphabet, int):
            alphabet = Alphabet([f"e{i + 1}" for i in range(alphabet)])
        elif isinstance(alphabet, str):
            alphabet = Alphabet(alphabet)
        self.alphabet = alphabet
        names = alphabet.names
        self.relators = tuple(
            commutator(Word.gen(names[i]), Word.gen(names[j]))
            for i in range(len(names))
            for j in range(i + 1, len(names))
        )

    def __repr__(self) -> str:
        return f"FreeAbelianGroup({str(self.alphabet)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeAbelianGroup) and other.alphabet == self.alphabet

    def __hash__(self) -> int:
        return hash(("abelian", self.alphabet))

    def vector(self, w: Word) -> tuple[int, ...]:
        vec = [0] * len(self.alphabet)
        for name, sign in w.letters:
            if name not in self.alphabet:
                raise UnknownGenerator(f"{name!r} is not in alphabet {self.alphabet}")
            vec[self.alphabet.index(name)] += sign
        return tuple(vec)

    def normal_form(self, w: Word) -> tuple[int, ...]:
        return self.vector(w)

    def reduce(self, w: Word) -> Word:
        out = Word()
        for name, e in zip(self.alphabet.names, self.vector(w)):
            out = out * Word.gen(name, e)
        return out

    def is_identity(self, w: Word) -> bool:
        return not any(self.vector(w))

    def commutes(self, u: Word, v: Word) -> bool:
        self.vector(u), self.vector(v)
        return True

    def abelian_coordinates(self, gens: Sequence[Word], w: Word) -> list[int] | None:
        return solve_integer([self.vector(g) for g in gens], self.vector(w))

    def maximal_abelian_witness(self, gens: Sequence[Word]) -> Word | None:
        # the whole group is abelian, so a generator outside <gens> is a witness
        for g in self.alphabet.gens():
            if self.abelian_coordinates(gens, g) is None:
                return g
        return None
