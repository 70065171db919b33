import itertools

import pytest
from hypothesis import given, strategies as st

from grouplab.folding import SubgroupGraph, is_surjective, subgroup_contains
from grouplab.groups import FreeAbelianGroup, FreeGroup
from grouplab.lattice import in_span, solve_integer
from grouplab.words import Alphabet, Word, ball, parse_word

from strategies import words

P = parse_word


def products(gens, length):
    # every product of at most ``length`` generators or inverses
    pool = list(gens) + [g.inverse() for g in gens]
    out = {Word()}
    for k in range(1, length + 1):
        for seq in itertools.product(pool, repeat=k):
            w = Word()
            for g in seq:
                w = w * g
            out.add(w)
    return out


@given(st.lists(words(max_size=4), min_size=1, max_size=2))
def test_folding_contains_every_short_product(gens):
    graph = SubgroupGraph(gens)
    for w in products(gens, 3):
        assert graph.contains(w)


def test_folding_examples():
    H = SubgroupGraph([P("a^2"), P("b")])
    assert H.contains(P("a^2 b a^-2"))
    assert not H.contains(P("a"))
    assert H.rank() == 2
    assert SubgroupGraph([P("a"), P("a b")]).is_whole_group(Alphabet("a b"))
    assert not is_surjective([P("a"), P("b^2")], Alphabet("a b"))
    assert subgroup_contains([P("a b a^-1")], P("a b^3 a^-1"))
    # a b and b a together generate a rank-2 subgroup that misses a
    assert not subgroup_contains([P("a b"), P("b a")], P("a"))


def test_folding_missing_generators():
    H = SubgroupGraph([P("a"), P("b^2")])
    assert H.missing_generators(Alphabet("a b")) == [P("b")]


def box_solve(columns, target, bound=4):
    for c in itertools.product(range(-bound, bound + 1), repeat=len(columns)):
        if all(sum(c[j] * columns[j][i] for j in range(len(columns))) == target[i] for i in range(len(target))):
            return list(c)
    return None


vec = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@given(st.lists(vec, min_size=1, max_size=3), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_lattice_solves_spanned_targets(columns, coeffs):
    target = [sum(c * col[i] for c, col in zip(coeffs, columns)) for i in range(2)]
    sol = solve_integer(columns, target)
    assert sol is not None
    assert [sum(s * col[i] for s, col in zip(sol, columns)) for i in range(2)] == target


@given(st.lists(vec, min_size=1, max_size=2), vec)
def test_lattice_agrees_with_box_search(columns, target):
    sol = solve_integer(columns, target)
    oracle = box_solve(columns, target)
    if oracle is not None:
        assert sol is not None
    if sol is not None:
        assert [sum(s * col[i] for s, col in zip(sol, columns)) for i in range(2)] == list(target)


def test_lattice_examples():
    assert solve_integer([(2, 0), (0, 3)], (4, -3)) == [2, -1]
    assert not in_span([(2, 0)], (1, 0))
    assert in_span([], (0, 0))
    assert solve_integer([(6,), (4,)], (2,)) is not None
    assert solve_integer([(6,), (4,)], (3,)) is None


def test_free_group_coordinates():
    F = FreeGroup("a b")
    assert F.abelian_coordinates([P("a^2"), P("a^3")], P("a")) == [-1, 1]
    assert F.abelian_coordinates([P("a^2")], P("a")) is None
    assert F.abelian_coordinates([P("a^2")], P("b")) is None
    assert F.abelian_coordinates([P("b a b^-1")], P("b a^-3 b^-1")) == [-3]
    with pytest.raises(ValueError):
        F.abelian_coordinates([P("a"), P("b")], P("a"))


def test_free_group_maximal_abelian():
    F = FreeGroup("a b")
    assert F.maximal_abelian_witness([P("a")]) is None
    assert F.maximal_abelian_witness([P("a^2")]) == P("a")
    assert F.maximal_abelian_witness([P("a^2"), P("a^3")]) is None


@given(words(), words())
def test_free_group_commutes_iff_common_root(u, v):
    F = FreeGroup("a b")
    if u.is_identity or v.is_identity:
        assert F.commutes(u, v)
        return
    assert F.commutes(u, v) == (F.common_root([u, v]) is not None)


def test_free_abelian_group():
    A = FreeAbelianGroup(2)
    assert str(A.alphabet) == "e1 e2"
    assert A.is_identity(P("e1 e2 e1^-1 e2^-1"))
    assert A.reduce(P("e2 e1 e2")) == P("e1 e2^2")
    assert A.abelian_coordinates([P("e1^2"), P("e2")], P("e1^4 e2^-1")) == [2, -1]
    assert A.abelian_coordinates([P("e1^2")], P("e1")) is None
    assert A.maximal_abelian_witness([P("e1^2"), P("e2")]) == P("e1")
    assert len(A.relators) == 1


def test_ball_of_group():
    assert len(FreeGroup("a b").ball(2)) == 17
    assert ball(Alphabet("a"), 2) == [Word(), P("a"), P("a^-1"), P("a^2"), P("a^-2")]
