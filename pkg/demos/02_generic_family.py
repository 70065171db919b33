"""A generic family of solutions of [x, y] = [a, b].

Two automorphisms of F(x, y) fix [x, y]: beta sends y to x y and delta
sends x to y x.  Composing powers of them and then substituting the base
solution x -> a, y -> b gives infinitely many solutions.

Run with ``python demos/02_generic_family.py``.
"""

from grouplab.autos import BasicSequenceSpec, GenericFamilySpec, basic_sequence, generic_family, growth_vector
from grouplab.equations import EquationSystem
from grouplab.solver import discriminates
from grouplab.words import Word, apply_map, parse_map

beta = parse_map("x -> x, y -> x y")
delta = parse_map("x -> y x, y -> y")
comm = Word.parse("[x,y]")

spec = BasicSequenceSpec([beta], [delta], [(1, 1), (2, 1), (1, 3)])
print("Basic sequence with growth vector", growth_vector(spec))
for n, phi in enumerate(basic_sequence(spec), start=1):
    fixed = apply_map(phi, comm) == comm
    print(f"  phi_{n}: |x| = {len(phi['x'])}, |y| = {len(phi['y'])}, fixes [x,y]: {fixed}")

system = EquationSystem("x y", "a b", ["[x,y] [a,b]^-1"])
family = GenericFamilySpec(system, (beta,), (delta,), parse_map("x -> a, y -> b"))
members = generic_family(family, 2, 2)
print(f"\n{len(members)} members with at most 2 steps and exponents in 1..2, all verified:")
for params, mu in members[:5]:
    print(f"  steps {params['steps']}: {mu}")
print("  ...")

v = discriminates([Word.parse("x a^-1"), Word.parse("y b^-1")], [mu for _, mu in members])
print("\nA member moving both x and y away from the base solution:", v.witness[1])
