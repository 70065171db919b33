from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from grouplab import formats
from grouplab.autos import BasicSequenceSpec, basic_sequence
from grouplab.errors import ArityMismatch, ChoiceOutOfRange, MissingDecoration, SolutionCheckFailed
from grouplab.homdiagram import (
    Edge,
    FundamentalSequence,
    QuotientRecord,
    attach_gamma_leaves,
    build_omega_sentence,
    check_strictness,
    choice_map,
    evaluate_fundamental_sequence,
    strip_gamma_leaves,
    validate_diagram,
)
from grouplab.ntq import NTQLevel, NTQTower
from grouplab.words import GeneratorMap, Word, apply_map, parse_map


def diagram(fixture, name):
    return formats.read_diagram(fixture(name))


def test_example_evaluates_to_the_basic_sequence(fixture):
    d = diagram(fixture, "example.diag")
    fs = formats.read_choices(fixture("example.choices"), d)
    m = evaluate_fundamental_sequence(d, fs)
    beta, delta = parse_map("x -> x, y -> x y"), parse_map("x -> y x, y -> y")
    (phi,) = basic_sequence(BasicSequenceSpec([beta], [delta], [(1, 1)]))
    expected = phi.then(d.edge("root", "leaf").map)
    assert m["x"] == expected["x"] and m["y"] == expected["y"]
    assert str(m) == "x -> a b a, y -> a b"


def test_example_validates(fixture):
    checks = validate_diagram(diagram(fixture, "example.diag"), 2)
    assert checks["structure"].is_verified
    assert checks["surjective"].is_verified
    assert not checks["proper"].is_refuted


def test_identity_choices_give_the_edge_composite(fixture):
    d = diagram(fixture, "two_edge.diag")
    leaf = parse_map("w -> a b")
    fs = FundamentalSequence(("r", "m", "l"), ((), ()), leaf)
    m = evaluate_fundamental_sequence(d, fs)
    expected = d.edge("r", "m").map.then(d.edge("m", "l").map).then(leaf)
    for x in ("x", "y"):
        assert m[x] == expected[x]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3))
def test_evaluation_is_substitution(choice):
    # nested substitution, innermost map first
    d = formats.read_diagram(str(FIXTURES / "two_edge.diag"))
    leaf = parse_map("w -> a b")
    m = evaluate_fundamental_sequence(d, FundamentalSequence(("r", "m", "l"), ((), tuple(choice)), leaf))
    sigma = choice_map(d.vertex("m"), choice, d.coeffs)
    for x in ("x", "y"):
        w = Word.gen(x)
        w = apply_map(d.edge("r", "m").map, w)
        w = apply_map(sigma, w)
        w = apply_map(d.edge("m", "l").map, w)
        w = apply_map(leaf, w)
        assert m[x] == w


def test_choices_fixture(fixture):
    d = diagram(fixture, "two_edge.diag")
    fs = formats.read_choices(fixture("two_edge.choices"), d)
    assert fs.choices == ((), (1, -2, 1))
    evaluate_fundamental_sequence(d, fs)


def test_choice_errors(fixture):
    d = diagram(fixture, "two_edge.diag")
    with pytest.raises(ChoiceOutOfRange):
        choice_map(d.vertex("m"), (3,), d.coeffs)
    with pytest.raises(ChoiceOutOfRange):
        choice_map(d.vertex("m"), (0,), d.coeffs)
    with pytest.raises(ArityMismatch):
        evaluate_fundamental_sequence(d, FundamentalSequence(("r", "m", "l"), ((),), parse_map("w -> a")))
    with pytest.raises(ArityMismatch):
        evaluate_fundamental_sequence(d, FundamentalSequence(("r", "m"), ((),), parse_map("u -> a, v -> b")))


def test_non_solution_is_caught(fixture):
    d = diagram(fixture, "example.diag")
    collapse = replace(d, edges=(Edge("root", "leaf", parse_map("x -> a, y -> a")),))
    terminal = GeneratorMap.identity(d.vertex("leaf").gens)
    with pytest.raises(SolutionCheckFailed):
        evaluate_fundamental_sequence(collapse, FundamentalSequence(("root", "leaf"), ((),), terminal))


def test_surjectivity(fixture):
    assert validate_diagram(diagram(fixture, "onto.diag"), 2)["surjective"].is_verified
    v = validate_diagram(diagram(fixture, "not_onto.diag"), 2)["surjective"]
    assert v.is_refuted


def test_properness(fixture):
    onto = validate_diagram(diagram(fixture, "onto.diag"), 2)["proper"]
    assert onto.is_verified
    w = onto.witness[0]
    assert not w.is_identity
    assert validate_diagram(diagram(fixture, "injective.diag"), 3)["proper"].is_unknown


def test_strictness_flags_abelian_image(fixture):
    d = diagram(fixture, "abelian_image.diag")
    cond = check_strictness(d, ["v", "l"], 2)
    assert cond["1"].is_unknown
    assert cond["1"].extra["flagged"]


def test_strictness_edge_kill(fixture):
    d = diagram(fixture, "edge_kill.diag")
    cond = check_strictness(d, ["v", "l"], 2)
    assert cond["2"].is_refuted
    assert cond["2"].witness == Word.parse("x")


def test_strictness_passes_on_identity(fixture):
    d = diagram(fixture, "rigid_identity.diag")
    cond = check_strictness(d, ["v", "l"], 2)
    assert all(v.is_verified for v in cond.values())


def test_strictness_needs_decorations(fixture):
    with pytest.raises(MissingDecoration):
        check_strictness(diagram(fixture, "onto.diag"), ["r", "l"], 2)


def test_gamma_leaves_round_trip(fixture):
    d = diagram(fixture, "two_edge.diag")
    g = attach_gamma_leaves(d)
    assert g.leaves() == ["l~gamma"]
    assert g.vertex("l~gamma").kind == "gamma"
    assert validate_diagram(g, 1)["structure"].is_verified
    assert strip_gamma_leaves(g) == d


def record(var, image, coeffs="a", t=0):
    return QuotientRecord(NTQTower([NTQLevel(var, "IV")], coeffs), (Word.parse(image),), t)


def test_omega_golden(fixture):
    h1, h2 = formats.read_record(fixture("rec1.rec")), formats.read_record(fixture("rec2.rec"))
    with open(fixture("omega.golden"), "rb") as f:
        golden = f.read()
    for _ in range(10):
        assert (build_omega_sentence(h1, h2) + "\n").encode("ascii") == golden


def test_omega_mirror():
    s = build_omega_sentence(record("y1", "y1^2"), record("x1", "x1"))
    assert s == "forall h1 . exists g1 . (true -> g1^2 = h1)"


def test_omega_empty_images():
    h = QuotientRecord(NTQTower([], "a"), ())
    assert build_omega_sentence(h, h) == "(true -> true)"


def test_omega_with_equations_and_conjugators():
    tower = NTQTower([NTQLevel("x y", "I", ["[x,y] [a,b]^-1"])], "a b")
    h1 = QuotientRecord(tower, (Word.parse("x"),), 1)
    h2 = QuotientRecord(NTQTower([NTQLevel("z", "IV")], "a b"), (Word.parse("z"),))
    s = build_omega_sentence(h1, h2)
    assert s == "forall h1 . exists g1 gb1 . (true -> (g1^-1 gb1^-1 g1 gb1 b^-1 a^-1 b a = 1 & g1 = h1))"


def test_omega_arity():
    with pytest.raises(ArityMismatch):
        build_omega_sentence(record("x1", "x1"), QuotientRecord(NTQTower([], "a"), ()))
