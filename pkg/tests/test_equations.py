import pytest
from hypothesis import given, strategies as st

from grouplab.equations import (
    CLOSED_NONORIENTABLE,
    CLOSED_ORIENTABLE,
    PUNCTURED_NONORIENTABLE,
    PUNCTURED_ORIENTABLE,
    EquationSystem,
    QuadraticClass,
    QuadraticForm,
    classify_quadratic,
    coordinate_group,
    euler_characteristic,
    match_standard_form,
    normalize_quadratic,
)
from grouplab.errors import NotStandardForm, UnknownGenerator
from grouplab.words import Word, apply_map, parse_map, parse_word

P = parse_word
EXAMPLE = "[x,y] [a,b]^-1"


def test_system_checks():
    with pytest.raises(ValueError):
        EquationSystem("x a", "a b", [])
    with pytest.raises(UnknownGenerator):
        EquationSystem("x", "a", ["x c"])
    s = EquationSystem("x y", "a b", [EXAMPLE])
    assert coordinate_group(s).note == "< x y a b | x^-1 y^-1 x y b^-1 a^-1 b a >"


def test_classify_examples():
    assert classify_quadratic(EquationSystem("x y", "a b", [EXAMPLE])) is QuadraticClass.STRICTLY_QUADRATIC
    assert classify_quadratic(EquationSystem("x", "a", ["x a"])) is QuadraticClass.QUADRATIC
    assert classify_quadratic(EquationSystem("x", "a", ["x^2 x"])) is QuadraticClass.NOT_QUADRATIC


@given(st.integers(0, 20))
def test_classify_invariant_under_rotation_and_renaming(k):
    eq = P("x y^-1 a x^-1 z b y z")
    w = eq.letters
    k %= len(w)
    rotated = Word(w[k:] + w[:k])
    ren = parse_map("x -> u, y -> v, z -> s")
    base = classify_quadratic(EquationSystem("x y z", "a b", [eq]))
    assert classify_quadratic(EquationSystem("x y z", "a b", [rotated])) is base
    assert classify_quadratic(EquationSystem("u v s", "a b", [apply_map(ren, eq)])) is base


def test_match_standard_form():
    f = match_standard_form(P("[x1,y1] [x2,y2]"), "x1 y1 x2 y2")
    assert (f.kind, f.genus, f.punctures) == (CLOSED_ORIENTABLE, 2, 0)
    f = match_standard_form(P("[x,y] z^-1 c z d"), "x y z")
    assert (f.kind, f.genus, f.m) == (PUNCTURED_ORIENTABLE, 1, 1)
    assert f.coefficients == (P("c"),) and f.d == P("d")
    f = match_standard_form(P("x1^2"), "x1")
    assert (f.kind, f.genus) == (CLOSED_NONORIENTABLE, 1)
    f = match_standard_form(P("x^2 z^-1 c z d"), "x z")
    assert (f.kind, f.genus, f.m) == (PUNCTURED_NONORIENTABLE, 1, 1)
    f = match_standard_form(P(EXAMPLE), "x y")
    assert (f.kind, f.genus, f.m, f.d) == (PUNCTURED_ORIENTABLE, 1, 0, P("[a,b]^-1"))
    with pytest.raises(NotStandardForm):
        match_standard_form(P("x y x y"), "x y")
    with pytest.raises(NotStandardForm):
        match_standard_form(P("x a"), "x")


@pytest.mark.parametrize(
    "kind,n,m,chi",
    [
        (CLOSED_ORIENTABLE, 2, 0, -2),
        (PUNCTURED_ORIENTABLE, 0, 1, 0),
        (CLOSED_NONORIENTABLE, 1, 0, 1),
        (CLOSED_ORIENTABLE, 1, 0, 0),
        (PUNCTURED_ORIENTABLE, 1, 0, -1),
        (PUNCTURED_NONORIENTABLE, 2, 1, -2),
    ],
)
def test_euler_characteristic_table(kind, n, m, chi):
    assert euler_characteristic(QuadraticForm.of(kind, n, m)) == chi


@pytest.mark.parametrize("kind", [CLOSED_ORIENTABLE, PUNCTURED_ORIENTABLE, CLOSED_NONORIENTABLE, PUNCTURED_NONORIENTABLE])
def test_euler_characteristic_steps(kind):
    step = 2 if kind in (CLOSED_ORIENTABLE, PUNCTURED_ORIENTABLE) else 1
    for n in range(1, 4):
        for m in range(0, 3):
            if kind.startswith("closed") and m:
                continue
            f, g = QuadraticForm.of(kind, n, m), QuadraticForm.of(kind, n + 1, m)
            assert euler_characteristic(f) - euler_characteristic(g) == step
            if not kind.startswith("closed"):
                assert euler_characteristic(f) - euler_characteristic(QuadraticForm.of(kind, n, m + 1)) == 1


def test_form_side_conditions():
    with pytest.raises(ValueError):
        QuadraticForm.of(CLOSED_ORIENTABLE, 0)
    with pytest.raises(ValueError):
        QuadraticForm.of(PUNCTURED_ORIENTABLE, 0, 0)
    with pytest.raises(ValueError):
        QuadraticForm.of(PUNCTURED_NONORIENTABLE, 0, 1)


@given(st.sampled_from([CLOSED_ORIENTABLE, PUNCTURED_ORIENTABLE, CLOSED_NONORIENTABLE, PUNCTURED_NONORIENTABLE]),
       st.integers(1, 3), st.integers(0, 2))
def test_standard_word_matches_back(kind, n, m):
    if kind.startswith("closed"):
        m = 0
    f = QuadraticForm.of(kind, n, m)
    assert match_standard_form(f.standard_word(), f.variables) == f


@pytest.mark.parametrize(
    "eq,vars,kind,genus",
    [
        ("[x,y]", "x y", CLOSED_ORIENTABLE, 1),
        ("y^-1 x^-1 y x", "x y", CLOSED_ORIENTABLE, 1),
        ("x y y x", "x y", CLOSED_NONORIENTABLE, 2),
        ("x y x y", "x y", CLOSED_NONORIENTABLE, 1),
        ("x^2 y^2", "x y", CLOSED_NONORIENTABLE, 2),
    ],
)
def test_normalize_certificate(eq, vars, kind, genus):
    w = P(eq)
    form, cert = normalize_quadratic(w, vars)
    assert (form.kind, form.genus) == (kind, genus)
    assert apply_map(cert, w) == form.standard_word()


def test_normalize_standard_is_identity():
    form, cert = normalize_quadratic(P("[x,y]"), "x y")
    assert cert.is_identity()


def test_normalize_with_coefficients():
    w = P("z^-1 a z x^-1 y^-1 x y b")
    form, cert = normalize_quadratic(w, "x y z", "a b")
    assert apply_map(cert, w) == form.standard_word()


def test_normalize_rejects_non_quadratic():
    with pytest.raises(NotStandardForm):
        normalize_quadratic(P("x^3"), "x")
