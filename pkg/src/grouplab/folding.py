"""Stallings foldings for finitely generated subgroups of free groups.

The folded core graph of ``H = <h_1, ..., h_k>`` decides membership in
``H``: a reduced word lies in ``H`` exactly when it reads a closed path at
the base vertex.

>>> from grouplab.words import Word
>>> H = SubgroupGraph([Word.parse("a^2"), Word.parse("b")])
>>> H.contains(Word.parse("b a^2 b^-1")), H.contains(Word.parse("a"))
(True, False)
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .words import Alphabet, Word


class SubgroupGraph:
    """Folded Stallings graph of the subgroup generated by ``gens``."""

    def __init__(self, gens: Iterable[Word]):
        self.gens = tuple(gens)
        # out[v][(name, sign)] = w; every edge is stored in both directions
        self._out: list[dict[tuple[str, int], int]] = [{}]
        self._parent: list[int] = [0]
        for g in self.gens:
            self._add_loop(g)
        self._fold_all()

    # union-find ---------------------------------------------------------
    def _find(self, v: int) -> int:
        while self._parent[v] != v:
            self._parent[v] = self._parent[self._parent[v]]
            v = self._parent[v]
        return v

    def _new_vertex(self) -> int:
        self._out.append({})
        self._parent.append(len(self._parent))
        return len(self._out) - 1

    def _add_loop(self, w: Word) -> None:
        if w.is_identity:
            return
        v = 0
        letters = w.letters
        for i, (name, sign) in enumerate(letters):
            end = 0 if i == len(letters) - 1 else self._new_vertex()
            self._pending_edge(v, name, sign, end)
            v = end

    def _pending_edge(self, u: int, name: str, sign: int, v: int) -> None:
        self._out[u].setdefault((name, sign), [])
        self._out[v].setdefault((name, -sign), [])
        self._out[u][(name, sign)].append(v)
        self._out[v][(name, -sign)].append(u)

    def _fold_all(self) -> None:
        # Edges are multi-valued until folded; merge targets sharing a label.
        changed = True
        while changed:
            changed = False
            for u in range(len(self._out)):
                if self._find(u) != u:
                    continue
                for label, targets in list(self._out[u].items()):
                    roots = {self._find(t) for t in targets}
                    if len(roots) > 1:
                        roots = sorted(roots)
                        keep = roots[0]
                        for r in roots[1:]:
                            self._merge(keep, r)
                        changed = True
                        break
                    self._out[u][label] = [next(iter(roots))]
                if changed:
                    break
        # Canonicalize to single-valued adjacency on representatives.
        reps = sorted({self._find(v) for v in range(len(self._out))})
        index = {r: i for i, r in enumerate(reps)}
        adj: list[dict[tuple[str, int], int]] = [dict() for _ in reps]
        for u in range(len(self._out)):
            ru = self._find(u)
            for label, targets in self._out[u].items():
                for t in targets:
                    adj[index[ru]][label] = index[self._find(t)]
        self.adjacency = adj
        del self._out, self._parent

    def _merge(self, keep: int, other: int) -> None:
        self._parent[other] = keep
        for label, targets in self._out[other].items():
            self._out[keep].setdefault(label, []).extend(targets)
        self._out[other] = {}

    # queries ------------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def num_edges(self) -> int:
        return sum(1 for adj in self.adjacency for (_, s) in adj if s > 0)

    def rank(self) -> int:
        """Rank of the subgroup: ``E - V + 1`` for the connected core graph."""
        return self.num_edges - self.num_vertices + 1

    def read(self, w: Word) -> int | None:
        """Endpoint of the path reading ``w`` from the base vertex, or None."""
        v = 0
        for letter in w.letters:
            nxt = self.adjacency[v].get(letter)
            if nxt is None:
                return None
            v = nxt
        return v

    def contains(self, w: Word) -> bool:
        return self.read(w) == 0

    def is_whole_group(self, alphabet: Alphabet) -> bool:
        """True iff the subgroup is all of ``F(alphabet)``."""
        return all(self.contains(g) for g in alphabet.gens())

    def missing_generators(self, alphabet: Alphabet) -> list[Word]:
        return [g for g in alphabet.gens() if not self.contains(g)]


def is_surjective(images: Sequence[Word], target: Alphabet) -> bool:
    """Do ``images`` generate the free group on ``target``?"""
    return SubgroupGraph(images).is_whole_group(target)


def subgroup_contains(gens: Sequence[Word], w: Word) -> bool:
    return SubgroupGraph(gens).contains(w)
