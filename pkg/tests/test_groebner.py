import random

import pytest
from hypothesis import given, settings, strategies as st

from segrezeta.errors import DimensionError, StructuralError
from segrezeta.exactalg import GF, QQ, PolyRing, random_form
from segrezeta.groebner import (
    Ideal,
    TermOrder,
    eliminate,
    groebner_basis,
    intersect,
    is_zero_dimensional,
    leading_exponent,
    normal_form,
    quotient_length,
    saturate,
    saturate_element,
    standard_monomials,
)

R = PolyRing([["x", "y"]], QQ)


def ideal(ring, *gens):
    return Ideal([ring.parse(g) for g in gens], ring)


def as_set(basis):
    return {str(f) for f in basis}


def test_groebner_examples():
    assert as_set(groebner_basis(ideal(R, "x^2", "x*y"))) == {"x^2", "x*y"}
    assert as_set(groebner_basis(ideal(R, "x - y", "x + y"))) == {"x", "y"}
    assert as_set(groebner_basis(ideal(R, "1"))) == {"1"}
    assert groebner_basis(Ideal([], R)) == []


def test_normal_form_examples():
    assert normal_form(R("x^2"), [R("x^2 - y^2")]) == R("y^2")
    I = ideal(R, "x^2", "x*y")
    assert normal_form(R("x^3 + 2*x*y^5"), groebner_basis(I)).is_zero()
    assert normal_form(R("y"), [R("x")]) == R("y")


def test_saturate_examples():
    assert saturate(ideal(R, "x^2", "x*y"), ideal(R, "x", "y")) == ideal(R, "x")
    I = ideal(R, "x^2 + y", "x*y")
    assert saturate(I, ideal(R, "1")) == I
    S = PolyRing([["x", "y"], ["u0", "u1"]], QQ)
    G = ideal(S, "x*u1 - y*u0")
    assert saturate(G, ideal(S, "x^2", "x*y")) == G
    with pytest.raises(StructuralError):
        saturate(I, Ideal([], R))


def test_eliminate_examples():
    S = PolyRing([["w", "x", "y"]], QQ)
    assert eliminate(ideal(S, "w*x - 1", "x - y"), ["w"]) == ideal(S, "x - y")
    I = ideal(S, "x^2 - w", "y")
    assert eliminate(I, []) == I
    T = PolyRing([["u", "x", "y"]], QQ)
    assert eliminate(ideal(T, "x - u", "y - u"), ["u"]) == ideal(T, "x - y")


def test_zero_dimensional_and_length():
    assert is_zero_dimensional(ideal(R, "x^2", "y"))
    assert not is_zero_dimensional(ideal(R, "x"))
    assert is_zero_dimensional(ideal(R, "1"))
    assert quotient_length(ideal(R, "x^2", "y")) == 2
    assert set(standard_monomials(ideal(R, "x^2", "y"))) == {(0, 0), (1, 0)}
    assert quotient_length(ideal(R, "1")) == 0
    F = PolyRing([["x", "y"]], GF(101))
    assert quotient_length(ideal(F, "x^2 - 1", "y - x")) == 2
    with pytest.raises(DimensionError):
        quotient_length(ideal(R, "x"))


def test_intersection():
    I = intersect(ideal(R, "x"), ideal(R, "y"))
    assert I == ideal(R, "x*y")
    J = intersect(ideal(R, "x"), ideal(R, "x^2", "y"))
    assert J == ideal(R, "x^2", "x*y")


def test_elimination_order_leads_with_first_block():
    S = PolyRing([["t", "x", "y"]], QQ)
    order = TermOrder.elimination([0])
    assert leading_exponent(S("t + x^5"), order) == (1, 0, 0)
    assert leading_exponent(S("t + x^5")) == (0, 5, 0)


def test_reduced_basis_over_prime_field():
    F = PolyRing([["x", "y", "z"]], GF(32003))
    I = ideal(F, "x^2 - y*z", "x*y - z^2", "y^2 - x*z")
    G = groebner_basis(I)
    for f in I.generators:
        assert normal_form(f, G).is_zero()
    # reduced: monic, and no term of one element is divisible by another's lead
    for i, g in enumerate(G):
        assert g.monic() == g
        assert normal_form(g, G[:i] + G[i + 1:]) == g


# -- properties ------------------------------------------------------------------

S3 = PolyRing([["x", "y", "z"]], GF(32003))


def random_ideal(seed, count=3, maxdeg=3):
    rng = random.Random(seed)
    gens = []
    for _ in range(count):
        d = rng.randint(1, maxdeg)
        f = random_form(S3, (d,), rng)
        # sparsify so that bases are not generic
        keep = {e: c for e, c in f.terms.items() if rng.random() < 0.4}
        if keep:
            gens.append(S3.monomial((0, 0, 0), 0) + sum(
                (S3.monomial(e, c) for e, c in keep.items()), S3.zero()))
    return Ideal(gens, S3), rng


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_basis_unique_under_shuffling(seed):
    I, rng = random_ideal(seed)
    gens = list(I.generators)
    rng.shuffle(gens)
    scaled = [g * rng.randint(1, 100) for g in gens]
    assert as_set(groebner_basis(I)) == as_set(groebner_basis(Ideal(scaled, S3)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_membership_of_combinations(seed):
    I, rng = random_ideal(seed)
    if I.is_zero():
        return
    combo = S3.zero()
    for g in I.generators:
        combo = combo + g * random_form(S3, (rng.randint(0, 2),), rng)
    assert combo in I
    G = groebner_basis(I)
    r = normal_form(S3("x^4 + y*z^2"), G)
    assert normal_form(r, G) == r


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_saturation_idempotent_and_brute_force(seed):
    I, rng = random_ideal(seed, count=2, maxdeg=2)
    I = Ideal([g * S3("x") for g in I.generators] + [S3("x^3*y")], S3)
    f = S3("x")
    sat = saturate_element(I, f)
    assert saturate_element(Ideal(sat.generators, S3), f) == sat
    assert sat.contains_ideal(I)
    # every generator of I : x^oo is pushed into I by a bounded power of x
    for g in sat.generators:
        assert any((g * f**k) in I for k in range(8))
