import random

import pytest
from hypothesis import given, settings, strategies as st

from segrezeta.errors import (
    InhomogeneousError,
    PolynomialParseError,
    StructuralError,
    ZeroPolynomialError,
)
from segrezeta.exactalg import (
    GF,
    QQ,
    Field,
    PolyRing,
    multidegree_of,
    poly_arith,
    random_form,
    substitute,
)

R = PolyRing([["x", "y", "z"]], QQ)


def test_difference_of_squares():
    x, y = R["x"], R["y"]
    assert (x + y) * (x - y) == x**2 - y**2
    assert poly_arith(x + y, x - y, "mul") == R("x^2 - y^2")


def test_absorbing_zero():
    f = R("x^2 + 3*y*z - 1/2")
    assert (f * 0).is_zero()
    assert poly_arith(f, R.zero(), "mul").is_zero()


def test_mod_p_product():
    S = PolyRing([["x"]], GF(7))
    assert S("3*x") * S("5*x") == S("x^2")


def test_field_rejects_composite():
    with pytest.raises(StructuralError):
        Field(15)


def test_mismatched_rings():
    S = PolyRing([["x", "y", "z"]], GF(7))
    with pytest.raises(StructuralError):
        R["x"] + S["x"]
    T = PolyRing([["a"]], QQ)
    with pytest.raises(StructuralError):
        poly_arith(R["x"], T["a"], "add")


def test_multidegree_examples(p2p2):
    assert multidegree_of(p2p2("x0*y0")) == (1, 1)
    assert multidegree_of(PolyRing.projective([2])("x0^2 + x0*x1")) == (2,)
    with pytest.raises(InhomogeneousError) as info:
        multidegree_of(p2p2("x0 + y0"))
    assert "x0" in str(info.value) and "y0" in str(info.value)
    with pytest.raises(ZeroPolynomialError):
        multidegree_of(p2p2.zero())


def test_random_form_examples(p2p2):
    ring = PolyRing.projective([2])
    assert random_form(ring, (1,), 5) == random_form(ring, (1,), 5)
    c = random_form(ring, (0,), random.Random(1))
    assert c.is_constant() and not c.is_zero()
    f = random_form(p2p2, (1, 1), random.Random(2))
    assert len(f) == 9 and multidegree_of(f) == (1, 1)


def test_substitute_examples():
    S = PolyRing([["x0", "x1", "z"]], QQ)
    f = S("x0^2*x1")
    assert substitute(f, {"x1": S.one()}) == S("x0^2")
    assert substitute(f, {"x0": S["x0"]}) == f
    lam = 7
    g = substitute(S("x0^2 + x0*x1"), {"x0": S["z"] * lam})
    assert g == S("49*z^2 + 7*z*x1")
    with pytest.raises(StructuralError):
        substitute(f, {"q": S.one()})


def test_parse_errors_report_column():
    with pytest.raises(PolynomialParseError) as info:
        R.parse("x^2 + * y")
    assert info.value.column == 7
    with pytest.raises(PolynomialParseError):
        R.parse("x + q")
    with pytest.raises(PolynomialParseError):
        R.parse("(x + y")


def test_format_roundtrip():
    for text in ["x^2 - 3*x*y + 1/2", "-x", "0", "y*z^3 - 2"]:
        f = R.parse(text)
        assert R.parse(str(f)) == f
    S = PolyRing([["x"]], GF(7))
    assert str(S("6*x")) == "-x"


# -- properties ------------------------------------------------------------------

coeffs = st.integers(-5, 5)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeffs, max_size=6).map(lambda d: R.monomial((0, 0, 0), 0) + sum(
    (R.monomial(e, c) for e, c in d.items()), R.zero()))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R.zero()
    assert a * R.one() == a


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.sampled_from([7, 101, 1000003]))
def test_reduction_mod_p_is_a_homomorphism(a, b, p):
    F = GF(p)
    assert (a * b).change_field(F) == a.change_field(F) * b.change_field(F)
    assert (a + b).change_field(F) == a.change_field(F) + b.change_field(F)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
def test_multidegree_additive(a1, a2, b1, b2, seed):
    ring = PolyRing.projective([2, 1], GF(101))
    rng = random.Random(seed)
    f = random_form(ring, (a1, a2), rng)
    g = random_form(ring, (b1, b2), rng)
    assert multidegree_of(f * g) == (a1 + b1, a2 + b2)
