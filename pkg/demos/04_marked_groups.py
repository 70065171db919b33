"""Distances between marked groups and a convergent sequence.

The markings (a, a^k) of a cyclic group kill x1^k x2^-1, a word that gets
longer with k.  On any fixed ball only the commutator-type relations
survive, which are the relations of Z^2 marked by (e1, e2).

Run with ``python demos/04_marked_groups.py``.
"""

from grouplab.groups import FreeAbelianGroup, FreeGroup
from grouplab.marked import Marking, convergence_table, distance_at_cutoff, kernel_ball

F2, F1 = FreeGroup("a b"), FreeGroup("a")
free = Marking(2, F2, ["a", "b"])
diagonal = Marking(2, F1, ["a", "a"])
trivial = Marking(2, F1, ["1", "1"])

print("d(free, free)        ", distance_at_cutoff(free, free, 5))
print("d(free, diagonal)    ", distance_at_cutoff(free, diagonal, 5))
print("d(trivial, diagonal) ", distance_at_cutoff(trivial, diagonal, 5))

seq = [Marking(2, F1, ["a", f"a^{k}"]) for k in range(1, 7)]
print("\nKernel balls of (a, a^k), k = 1..6, up to radius 4:")
for row in convergence_table(seq, 4):
    print("  ", row)

limit = Marking(2, FreeAbelianGroup(2), ["e1", "e2"])
rels = [w for w in kernel_ball(limit, 4).members if not w.is_identity]
print(f"\nZ^2 kills {len(rels)} nontrivial words of length <= 4, e.g. {rels[0]}")
