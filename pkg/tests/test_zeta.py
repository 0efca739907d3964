import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import cls
from segrezeta.chowring import AmbientSpec, IntPoly, expand_rational
from segrezeta.errors import RankConstraintError, StructuralError
from segrezeta.exactalg import PolyRing
from segrezeta.segre import segre_class
from segrezeta.zeta import (
    ZetaProblem,
    check_properties,
    check_rank,
    cone_ideal,
    relative_views,
    restrict_hyperplane,
    top_dimensional_class,
    verify_cone,
    zeta_from_ideal,
)


def problem(dims, *gens, degrees=None):
    ring = PolyRing.projective(dims)
    return ZetaProblem.from_generators([ring.parse(g) for g in gens], degrees)


def poly(text, names=("t",)):
    return IntPoly.parse(text, names)


ST = ("s", "t")
X2XY_P3 = ([3], "x0^2", "x0*x1")
NONCI = ([2, 2], "x0*y0", "x0*y1")
CI = ([2, 2], "x0", "y0")


def test_zeta_examples():
    z = zeta_from_ideal(problem(*X2XY_P3))
    assert (z.P, z.Q) == (poly("t + 4*t^2"), poly("(1 + 2*t)^2"))
    z = zeta_from_ideal(problem([2], "x0", "x1", degrees=[1, 1]))
    assert (z.P, z.Q) == (poly("t^2"), poly("(1 + t)^2"))
    z = zeta_from_ideal(problem(*NONCI))
    assert z.P == poly("s + s^2 + 2*s*t + t^2", ST)
    assert z.Q == poly("(1 + s + t)^2", ST)


def test_zeta_errors():
    with pytest.raises(RankConstraintError) as info:
        zeta_from_ideal(problem([3], "x0*x2", "x0*x3", "x1*x2", "x1*x3"))
    assert (info.value.g, info.value.e) == (4, 4)
    assert "g = 4" in str(info.value) and "e = 4" in str(info.value)
    with pytest.raises(StructuralError):
        problem([2], "x0^2", "x0*x1", degrees=[2, 1])
    with pytest.raises(StructuralError):
        problem([2], "x0^2", "x0*x1", degrees=[2])


def test_rank_gates():
    p = problem([3], "x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2")
    check_rank(p)
    with pytest.raises(RankConstraintError):
        check_rank(p, strict=True)
    check_rank(problem(*NONCI), strict=True)
    with pytest.raises(RankConstraintError):
        check_rank(problem([2, 1], "x0*y0", "x1*y1"), strict=True)


def test_cone_ideal_examples():
    p = problem([1], "x0^2", "x0*x1")
    c = cone_ideal(p, AmbientSpec([2]))
    assert [str(f) for f in c.generators] == ["x0^2", "x0*x1"]
    assert c.base_ambient == AmbientSpec([2]) and c.ring.nvars == 3
    # the cone is a line with an embedded point, not the reduced line
    assert segre_class(c.ideal, c.ring) != segre_class([c.ring("x0")])
    assert cone_ideal(p, AmbientSpec([1])).generators == p.generators
    q = cone_ideal(problem(*NONCI), AmbientSpec([3, 2]))
    assert [str(f) for f in q.generators] == ["x0*y0", "x0*y1"]
    assert [len(b) for b in q.ring.blocks.blocks] == [4, 3]
    with pytest.raises(StructuralError):
        cone_ideal(problem(*X2XY_P3), AmbientSpec([2]))


def test_verify_cone_examples():
    r = verify_cone(problem(*X2XY_P3), AmbientSpec([4]))
    assert r.verdict == "match"
    assert r.predicted == cls([4], "H - 4*H^3 + 16*H^4")
    for d, N in [(1, 4), (2, 3), (3, 5)]:
        r = verify_cone(problem([2], f"x0^{d}"), AmbientSpec([N]))
        H = AmbientSpec([N]).hyperplane(0)
        series = sum((H ** k * ((-1) ** (k + 1) * d ** k) for k in range(1, N + 1)),
                     AmbientSpec([N]).zero())
        assert r.verdict == "match" and r.predicted == series
    r = verify_cone(problem(*CI), AmbientSpec([3, 3]))
    A = AmbientSpec([3, 3])
    assert r.verdict == "match"
    assert r.predicted == expand_rational(poly("s*t", ST), poly("(1 + s)*(1 + t)", ST), A)


def test_verify_cone_uses_strict_gate():
    p = problem([3], "x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2")
    zeta_from_ideal(p)
    with pytest.raises(RankConstraintError):
        verify_cone(p, AmbientSpec([4]))


def test_verify_cone_detects_mismatch():
    p = problem(*X2XY_P3)
    z = zeta_from_ideal(p)
    z.P = z.P + poly("t^3")
    r = verify_cone(p, AmbientSpec([4]), zeta=z)
    assert r.verdict == "mismatch"


def test_check_properties_examples():
    for dims, *gens in (X2XY_P3, CI, NONCI):
        p = problem(dims, *gens)
        report = check_properties(zeta_from_ideal(p), p)
        assert report.passed, report.lines()
    p = problem(*X2XY_P3)
    report = dict((name, detail) for name, _, detail in check_properties(zeta_from_ideal(p), p).checks)
    assert "4t^2" in report["highest_term"]


def test_check_properties_flags_corruption():
    p = problem(*X2XY_P3)
    z = zeta_from_ideal(p)
    z.P = poly("2*t + 4*t^2")
    status = {name: s for name, s, _ in check_properties(z, p).checks}
    assert status["lowest_term"] == "fail"
    z.P = poly("t - 4*t^2")
    status = {name: s for name, s, _ in check_properties(z, p).checks}
    assert status["highest_term"] == "fail" and status["nonnegative"] == "fail"


def test_restrict_examples():
    p = problem(*X2XY_P3)
    z = zeta_from_ideal(p)
    for k in range(3):
        q = restrict_hyperplane(p, 0, random.Random(k))
        assert q.base_ambient == AmbientSpec([2])
        assert zeta_from_ideal(q) == z
    h = problem([3], "x0^3 + x1^3 + x2^3 + x3^3")
    q = restrict_hyperplane(h, 0, 1)
    assert "x3" not in str(q.generators[0])
    z = zeta_from_ideal(q)
    assert (z.P, z.Q) == (poly("3*t"), poly("1 + 3*t"))
    with pytest.raises(StructuralError):
        restrict_hyperplane(problem([0, 2], "y0"), 0)
    with pytest.raises(RankConstraintError):
        restrict_hyperplane(problem([2], "x0", "x1"), 0)


def test_relative_views():
    z = zeta_from_ideal(problem(*CI))
    v1, v2 = relative_views(z)
    assert v1.P == poly("s*t", ST) and v1.Q == poly("(1 + s)*(1 + t)", ST)
    z = zeta_from_ideal(problem(*NONCI))
    v1, v2 = relative_views(z)
    # symmetric in s and t up to the swap
    assert v1.P == v2.P and v1.Q == v2.Q
    for M in (2, 3, 4):
        assert v1.expand(M) == expand_rational(z.P, z.Q, AmbientSpec([2, M], ST))
        assert v2.expand(M) == expand_rational(z.P, z.Q, AmbientSpec([M, 2], ST))
    with pytest.raises(StructuralError):
        relative_views(zeta_from_ideal(problem(*X2XY_P3)))


def test_base_consistency_and_tower_coherence():
    for dims, *gens in (X2XY_P3, NONCI, ([4], "x0*x1", "x0*x2")):
        p = problem(dims, *gens)
        z = zeta_from_ideal(p)
        home = z.evaluate(p.base_ambient)
        assert home.coeffs == segre_class(p.ideal, p.ring).coeffs
        bigger = [d + 2 for d in dims]
        assert z.evaluate(AmbientSpec(bigger)).truncate(z.base_ambient).coeffs == home.coeffs


@settings(max_examples=8, deadline=None)
@given(st.permutations(["x0^2", "x0*x1", "x1*x2"]))
def test_generator_order_invariance(gens):
    z = zeta_from_ideal(problem([4], *gens))
    assert z == zeta_from_ideal(problem([4], "x0^2", "x0*x1", "x1*x2"))


def test_seed_and_prime_stability():
    p = problem(*NONCI)
    zs = {zeta_from_ideal(p, seed=s, prime=q).to_json().__repr__()
          for s in (0, 3, 11) for q in (2147483647, 1000003)}
    assert len(zs) == 1


def test_lowest_term_uses_samuel_multiplicity():
    # Z = V((x0, x1)^2) in P^4: [Z] = 3[plane] by length, but the lowest
    # Segre term carries the Samuel multiplicity e((x, y)^2) = 4
    p = problem([4], "x0^2", "x0*x1", "x1^2")
    assert top_dimensional_class(p, 2) == cls([4], "3*H^2")
    assert top_dimensional_class(p, 2, weight="samuel") == cls([4], "4*H^2")
    assert segre_class(p.ideal, p.ring).codim_part(2) == cls([4], "4*H^2")
    report = check_properties(zeta_from_ideal(p), p)
    assert report.passed
    assert "[Z] = 3t^2 differs" in report.checks[0][2]
    for dims, *gens in (X2XY_P3, NONCI, ([3], "x0", "x1^2")):
        q = problem(dims, *gens)
        c = segre_class(q.ideal, q.ring)
        low = c.lowest_codim()
        assert top_dimensional_class(q, low) == top_dimensional_class(q, low, weight="samuel") \
            == c.codim_part(low)
