import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplab import formats
from grouplab.autos import (
    BasicSequenceSpec,
    b_large_check,
    basic_sequence,
    dehn_twist,
    exponent_of,
    generic_family,
    growth_check,
    growth_vector,
    verify_automorphism,
)
from grouplab.errors import IdentityInput, LengthMismatch, NotInEdgeGroup
from grouplab.groups import FreeGroup
from grouplab.solver import discriminates, verify_solution
from grouplab.splittings import AmalgamSplitting, HNNSplitting
from grouplab.words import Word, apply_map, parse_map

from strategies import words

BETA = parse_map("x -> x, y -> x y")
DELTA = parse_map("x -> y x, y -> y")
COMM = Word.parse("[x,y]")


def hnn():
    return HNNSplitting(FreeGroup("a b"), "t", ["a"])


def amalgam():
    return AmalgamSplitting(FreeGroup("a"), FreeGroup("b c"), ["a"], ["[b,c]"])


def test_hnn_twist_moves_the_stable_letter():
    tw = dehn_twist(hnn(), Word.parse("a^2"))
    assert apply_map(tw.map, Word.parse("t")) == Word.parse("a^2 t")
    assert apply_map(tw.map, Word.parse("b")) == Word.parse("b")
    assert apply_map(tw.inverse, Word.parse("t")) == Word.parse("a^-2 t")
    assert verify_automorphism(tw.map, hnn(), 2, inverse=tw.inverse).is_verified


def test_amalgam_twist_conjugates_the_right_factor():
    tw = dehn_twist(amalgam(), Word.parse("a"))
    assert apply_map(tw.map, Word.parse("b")) == Word.parse("a^-1 b a")
    assert apply_map(tw.map, Word.parse("a")) == Word.parse("a")
    assert tw.provenance[2] == "right"
    assert verify_automorphism(tw.map, amalgam(), 2, inverse=tw.inverse).is_verified


def test_twist_needs_an_edge_element():
    with pytest.raises(NotInEdgeGroup):
        dehn_twist(hnn(), Word.parse("b"))
    with pytest.raises(NotInEdgeGroup):
        dehn_twist(amalgam(), Word.parse("b"))


@settings(max_examples=50, deadline=None)
@given(st.integers(-3, 3), words("a b t", 6))
def test_twist_and_inverse_cancel(k, w):
    split = hnn()
    tw = dehn_twist(split, Word.gen("a", k))
    assert split.equal(apply_map(tw.inverse, apply_map(tw.map, w)), w)


def test_verify_automorphism_refutes_non_surjective():
    F = FreeGroup("x y")
    v = verify_automorphism(parse_map("x -> x^2, y -> y"), F, 2)
    assert v.is_refuted
    assert v.witness == Word.parse("x")


def test_verify_automorphism_finds_an_inverse():
    F = FreeGroup("x y")
    v = verify_automorphism(BETA, F, 2)
    assert v.is_verified
    assert str(v.witness) == "x -> x, y -> x^-1 y"


def test_verify_automorphism_relator_not_preserved():
    v = verify_automorphism(parse_map("a -> b, b -> a, t -> t"), hnn(), 2)
    assert v.is_refuted


def _oracle_step(images: dict, p: int, m: int) -> dict:
    """Substitute ``delta`` ``m`` times and then ``beta`` ``p`` times into the images."""
    for _ in range(m):
        images = {k: apply_map(DELTA, w) for k, w in images.items()}
    for _ in range(p):
        images = {k: apply_map(BETA, w) for k, w in images.items()}
    return images


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=3))
def test_basic_sequence_matches_substitution(steps):
    seq = basic_sequence(BasicSequenceSpec([BETA], [DELTA], steps))
    images = {"x": Word.parse("x"), "y": Word.parse("y")}
    for phi, (p, m) in zip(seq, steps):
        images = _oracle_step(images, p, m)
        assert phi["x"] == images["x"] and phi["y"] == images["y"]


def test_basic_sequence_without_steps_is_identity():
    (phi,) = basic_sequence(BasicSequenceSpec([BETA], [DELTA], []))
    assert phi.is_identity()


def test_basic_sequence_rejects_bad_steps():
    with pytest.raises(LengthMismatch):
        BasicSequenceSpec([BETA], [DELTA], [(1,)])
    with pytest.raises(ValueError):
        BasicSequenceSpec([BETA], [DELTA], [(0, 1)])


def test_basic_sequence_preserves_the_commutator():
    for steps in itertools.product(itertools.product((1, 2, 3), repeat=2), repeat=2):
        for phi in basic_sequence(BasicSequenceSpec([BETA], [DELTA], steps)):
            assert apply_map(phi, COMM) == COMM


def test_growth_vector_order_and_length():
    spec = BasicSequenceSpec([BETA], [DELTA], [(1, 2), (3, 4)])
    assert growth_vector(spec) == (2, 1, 4, 3)
    assert growth_vector(spec, 1, lam=5) == (2, 1, 5)


def test_growth_check():
    assert growth_check((5, 9, 14), (2, 4, 6))
    assert not growth_check((1, 9), (2, 4))
    assert not growth_check((5, 6), (2, 4))
    assert growth_check((), ())
    with pytest.raises(LengthMismatch):
        growth_check((1,), ())


def test_exponent_of():
    assert exponent_of(Word.parse("a^6"), Word.parse("a^2")) == 3
    assert exponent_of(Word.parse("a^-4"), Word.parse("a^2")) == -2
    assert exponent_of(Word.parse("a^3"), Word.parse("a^2")) is None
    assert exponent_of(Word.parse("b"), Word.parse("a")) is None
    with pytest.raises(IdentityInput):
        exponent_of(Word.parse("a"), Word())


def test_b_large_check():
    a = Word.parse("a")
    assert b_large_check([Word.parse("a^3"), Word.parse("a^12")], a, 2)
    assert not b_large_check([Word.parse("a^3"), Word.parse("a^6")], a, 2)
    assert not b_large_check([Word.parse("a^2")], a, 2)


def test_generic_family_counts(fixture):
    spec = formats.read_genfam(fixture("example.genfam"))
    members = generic_family(spec, 2, 2)
    assert len(members) == 4 + 16
    assert [p["n"] for p, _ in members] == [1] * 4 + [2] * 16
    for _, mu in members:
        assert verify_solution(spec.system, mu)


def test_generic_family_empty_range(fixture):
    spec = formats.read_genfam(fixture("example.genfam"))
    ((params, mu),) = generic_family(spec, 0, 3)
    assert params["n"] == 0
    assert mu == spec.tau


def test_generic_family_discriminates(fixture):
    spec = formats.read_genfam(fixture("example.genfam"))
    family = [mu for _, mu in generic_family(spec, 2, 3)]
    v = discriminates([Word.parse("x a^-1"), Word.parse("y b^-1")], family)
    assert v.is_verified
    i, mu = v.witness
    assert family[i] is mu
