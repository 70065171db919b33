"""Words, bounded solving, an HNN extension and its Bass-Serre tree.

Run with ``python demos/01_words_and_splittings.py``.
"""

from grouplab.autos import dehn_twist, verify_automorphism
from grouplab.equations import EquationSystem
from grouplab.groups import FreeGroup
from grouplab.solver import find_solutions, format_assignment
from grouplab.splittings import HNNSplitting, check_generalized_double, check_splitting_flags, enumerate_bass_serre
from grouplab.words import GeneratorMap, Word, ball_size

print("Reduced words in F(a, b) of length <= 2:", ball_size(2, 2))

# Elements commuting with a are the powers of a.
system = EquationSystem("x", "a b", ["[x,a]"])
print("\nSolutions of [x, a] = 1 inside the radius-2 ball:")
for s in find_solutions(system, 2):
    print("  ", format_assignment(s))

# E = <a, b, t | [a, t]> extends the centralizer of a.
F = FreeGroup("a b")
E = HNNSplitting(F, "t", ["a"])
w = Word.parse("b t^-1 a^3 t b^-1")
print(f"\nBritton reduction in E: {w}  ->  {E.reduce(w)}")
print("Flags:", {k: str(v) for k, v in check_splitting_flags(E, 2).items()})

tw = dehn_twist(E, Word.parse("a"))
print(f"\nDehn twist along a: {tw.map}")
print("  ", verify_automorphism(tw.map, E, 2, inverse=tw.inverse))

phi = GeneratorMap.from_dict({"t": ""}, E.alphabet, F.alphabet)
print("\nRetraction t -> 1 as a generalized double:", check_generalized_double(E, phi, F, 3))
bad = HNNSplitting(F, "t", ["a^2"])
print("Same over <a^2> instead:", check_generalized_double(bad, phi, F, 3))

print("\nBass-Serre tree, one stable syllable, exponents +-1, vertex words of length <= 1:")
print(enumerate_bass_serre(E, 1, 1, 1).format())
