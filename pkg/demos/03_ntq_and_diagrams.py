"""NTQ towers, a Hom-diagram branch and the sentence for a pair of quotients.

Run with ``python demos/03_ntq_and_diagrams.py``.
"""

from grouplab.homdiagram import (
    Auto,
    Edge,
    FundamentalSequence,
    HomDiagram,
    QuotientRecord,
    Vertex,
    build_omega_sentence,
    evaluate_fundamental_sequence,
    validate_diagram,
)
from grouplab.equations import EquationSystem
from grouplab.ntq import NTQLevel, NTQTower, check_nondegenerate, check_regular, compose_to_base, validate_structure
from grouplab.words import Alphabet, Word, parse_map

# A depth-two tower: x, y sit over u, v, which sit over F(a, b).
tower = NTQTower(
    [NTQLevel("x y", "I", ["[x,y] [u,v]^-1"]), NTQLevel("u v", "I", ["[u,v] [a,b]^-1"])],
    "a b",
)
witnesses = {0: parse_map("x -> u, y -> v"), 1: parse_map("u -> a, v -> b")}
print("structure:    ", validate_structure(tower))
print("regular:      ", check_regular(tower, 2))
# Nothing below the top level has a word problem, so maps to F(a, b) stand in.
homs = [parse_map("u -> a, v -> b"), parse_map("u -> a, v -> a b")]
print("nondegenerate:", check_nondegenerate(tower, witnesses, 2, homs))
print("composite:    ", compose_to_base(tower, witnesses))

commutative = NTQTower([NTQLevel("x y", "I", ["[x,y]"])], "a b")
print("\n[x, y] = 1 has Euler characteristic 0:", check_regular(commutative, 2))

# A single-edge diagram for [x, y] = [a, b], with beta and delta at the root.
beta, delta = parse_map("x -> x, y -> x y"), parse_map("x -> y x, y -> y")
root = Vertex(
    "root", "presented", Alphabet("x y"), (Word.parse("[x,y] [a,b]^-1"),),
    (Auto(beta, parse_map("x -> x, y -> x^-1 y")), Auto(delta, parse_map("x -> y^-1 x, y -> y"))),
)
leaf = Vertex("leaf", "free", Alphabet(""))
d = HomDiagram(
    Alphabet("a b"), (root, leaf), (Edge("root", "leaf", parse_map("x -> a, y -> b")),),
    EquationSystem("x y", "a b", ["[x,y] [a,b]^-1"]),
)
print("\nDiagram checks:", {k: str(v) for k, v in validate_diagram(d, 2).items()})
for choice in [(), (1,), (2, 1), (1, 1, -2)]:
    fs = FundamentalSequence(("root", "leaf"), (choice,), parse_map("", domain=Alphabet("")))
    print(f"  automorphism word {choice}: {evaluate_fundamental_sequence(d, fs)}")

h1 = QuotientRecord(NTQTower([NTQLevel("x1", "IV")], "a"), (Word.parse("x1"),))
h2 = QuotientRecord(NTQTower([NTQLevel("y1", "IV")], "a"), (Word.parse("y1^2"),))
print("\nSentence for the pair of quotient records:")
print("  ", build_omega_sentence(h1, h2))
