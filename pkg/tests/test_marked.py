import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplab import formats
from grouplab.errors import LengthMismatch
from grouplab.groups import FreeAbelianGroup, FreeGroup
from grouplab.marked import Marking, convergence_table, distance_at_cutoff, kernel_ball
from grouplab.words import Alphabet, Word, shortlex_key

from strategies import words

FIXTURE_MARKINGS = ["trivial.mark", "aa.mark", "ab.mark", "tower.mark"]


def one(fixture, name):
    (m,) = formats.read_markings(fixture(name))
    return m


def test_identical_markings_are_at_most_the_cutoff(fixture):
    m = one(fixture, "ab.mark")
    for cutoff in range(7):
        d = distance_at_cutoff(m, m, cutoff)
        assert not d.exact
        assert d.value == pytest.approx(math.exp(-cutoff))


def test_trivial_against_cyclic(fixture):
    d = distance_at_cutoff(one(fixture, "trivial.mark"), one(fixture, "aa.mark"), 4)
    assert d.exact
    assert d.agreement == 0 and d.disagreement == 1
    assert d.value == 1.0


def test_free_against_diagonal(fixture):
    d = distance_at_cutoff(one(fixture, "ab.mark"), one(fixture, "aa.mark"), 4)
    assert d.exact
    assert d.value == pytest.approx(math.exp(-1))


def test_free_against_tower(fixture):
    d = distance_at_cutoff(one(fixture, "ab.mark"), one(fixture, "tower.mark"), 5)
    assert d.exact
    assert d.disagreement == 4


def test_ultrametric_on_fixture_triples(fixture):
    ms = [one(fixture, n) for n in FIXTURE_MARKINGS]
    cutoff = 5
    for x, y, z in itertools.permutations(ms, 3):
        dxy, dyz, dxz = (distance_at_cutoff(p, q, cutoff) for p, q in ((x, y), (y, z), (x, z)))
        if dxy.exact and dyz.exact and dxz.exact:
            assert dxz.value <= max(dxy.value, dyz.value) + 1e-12


def _kernel_oracle(target, images, radius):
    """Brute force over all letter strings, reduced and deduplicated."""
    letters = [(x, e) for x in ("x1", "x2") for e in (1, -1)]
    found = {Word(p) for k in range(radius + 1) for p in itertools.product(letters, repeat=k)}
    out = []
    for w in sorted(found, key=lambda w: shortlex_key(w, Alphabet("x1 x2"))):
        img = Word()
        for name, sign in w.letters:
            g = images[int(name[1:]) - 1]
            img = img * (g if sign > 0 else g.inverse())
        if target.is_identity(img):
            out.append(w)
    return out


@pytest.mark.parametrize("images", [("a", "a"), ("a", "a^2"), ("a b", "b a"), ("1", "a")])
def test_kernel_ball_matches_oracle(images):
    target = FreeGroup("a b")
    m = Marking(2, target, images)
    assert list(kernel_ball(m, 3).members) == _kernel_oracle(target, m.images, 3)


def test_kernel_ball_abelian_target():
    m = Marking(2, FreeAbelianGroup(2), ["e1", "e2"])
    members = kernel_ball(m, 4).members
    assert Word.parse("[x1,x2]") in members
    assert all(len(w) in (0, 4) for w in members)


@settings(max_examples=30, deadline=None)
@given(words("a b", 3), words("a b", 3), words("a b", 3), words("a b", 3))
def test_ultrametric_random(u1, v1, u2, v2):
    F = FreeGroup("a b")
    x, y, z = Marking(2, F, [u1, v1]), Marking(2, F, [u2, v2]), Marking(2, F, ["a", "b"])
    d = [distance_at_cutoff(p, q, 3) for p, q in ((x, y), (y, z), (x, z))]
    assert d[2].value <= max(d[0].value, d[1].value) + 1e-12


@settings(max_examples=30, deadline=None)
@given(words("a b", 3), words("a b", 3), st.integers(0, 3))
def test_distance_consistent_in_cutoff(u, v, r):
    F = FreeGroup("a b")
    x, y = Marking(2, F, [u, v]), Marking(2, F, ["a", "b"])
    lo, hi = distance_at_cutoff(x, y, r), distance_at_cutoff(x, y, r + 1)
    if lo.exact:
        assert hi == type(hi)("Exact", lo.agreement, lo.disagreement, r + 1)
    else:
        assert hi.agreement >= r


def test_convergence_powers(fixture):
    seq = formats.read_markings(fixture("powers.mark"))
    rows = convergence_table(seq, 4)
    limit = Marking(2, FreeAbelianGroup(2), ["e1", "e2"])
    for row in rows:
        assert row.stable_from is not None
        assert row.stable_from <= max(row.radius - 1, 0)
        expected = tuple(w for w in kernel_ball(limit, row.radius).members if not w.is_identity)
        assert row.relations == expected


def test_convergence_free_sequence(fixture):
    rows = convergence_table(formats.read_markings(fixture("conj.mark")), 4)
    assert all(row.stable_from == 0 and row.relations == () for row in rows)


def test_convergence_unstable():
    F = FreeGroup("a")
    rows = convergence_table([Marking(2, F, ["a", "a"]), Marking(2, F, ["1", "a"])], 2)
    assert rows[0].stable_from == 0
    assert rows[1].stable_from is None
    assert str(rows[1]) == "R=1 unstable"


def test_marking_errors():
    with pytest.raises(LengthMismatch):
        Marking(2, FreeGroup("a"), ["a"])
    with pytest.raises(LengthMismatch):
        distance_at_cutoff(Marking(1, FreeGroup("a"), ["a"]), Marking(2, FreeGroup("a"), ["a", "a"]), 2)
