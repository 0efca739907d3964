"""Segre zeta functions of subschemes of P^n and P^n x P^m.

A :class:`ZetaProblem` pairs generators F_j with the declared bundle
G = sum_j O(d_j), d_j the multidegree of F_j. The zeta function is
P/Q with P the reduced representative of c(G) . i_*s(Z, Y) and
Q = prod_j (1 + sum_f d_{j,f} t_f).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .chowring import (
    AmbientSpec,
    BundleSpec,
    ChowClass,
    IntPoly,
    ZetaFunction,
    expand_rational,
    reduced_representative,
    total_chern,
    zeta_vars,
)
from .errors import RankConstraintError, SegreZetaError, StructuralError
from .exactalg import DEFAULT_PRIME, GF, PolyRing, multidegree_of
from .groebner import Ideal, is_zero_dimensional, quotient_length, saturate
from .segre import _confirmed, _NotGeneric, _primes, compute_segre


@dataclass
class ZetaProblem:
    ideal: list                 # (MultiPoly, multidegree) pairs, declaration order
    bundle: BundleSpec
    base_ambient: AmbientSpec

    @classmethod
    def from_generators(cls, generators, degrees=None):
        generators = list(generators)
        if not generators:
            raise StructuralError("a zeta problem needs at least one generator")
        ring = generators[0].ring
        actual = []
        for f in generators:
            if f.ring != ring:
                raise StructuralError("generators live in different rings")
            actual.append(multidegree_of(f))
        if degrees is None:
            degrees = actual
        degrees = [tuple(d) if isinstance(d, (list, tuple)) else (d,) for d in degrees]
        if len(degrees) != len(generators):
            raise StructuralError("one declared degree per generator is required")
        for f, d, a in zip(generators, degrees, actual):
            if tuple(d) != tuple(a):
                raise StructuralError(f"declared degree {d} of {f} differs from {a}")
        ambient = AmbientSpec([len(b) - 1 for b in ring.blocks.blocks])
        return cls(list(zip(generators, degrees)), BundleSpec(degrees), ambient)

    @property
    def ring(self):
        return self.ideal[0][0].ring

    @property
    def generators(self):
        return [f for f, _ in self.ideal]

    @property
    def g(self):
        return self.bundle.rank

    def rank_bound(self):
        """e: the rank of E for the fiber interpretation(s) of the ambient."""
        return min(self.base_ambient.factor_dims) + 1

    def describe(self):
        return {
            "ambient": list(self.base_ambient.factor_dims),
            "variables": [list(b) for b in self.ring.blocks.blocks],
            "generators": [str(f) for f in self.generators],
            "degrees": [list(d) for d in self.bundle.degrees],
        }


def check_rank(p, strict=False):
    """Raise RankConstraintError unless g < e (or the printed strict bound)."""
    g = p.g
    dims = p.base_ambient.factor_dims
    if len(dims) == 1:
        n = dims[0]
        e = n + 1
        if strict:
            if not g < n:
                raise RankConstraintError(
                    f"rank constraint violated: r+1 = {g} is not < n = {n}", g, e)
            return
    else:
        e = min(dims) + 1
        if strict and not g - 1 < min(dims):
            raise RankConstraintError(
                f"rank constraint violated: r = {g - 1} is not < n,m = {dims}", g, e)
    if not g < e:
        raise RankConstraintError(
            f"rank constraint violated: g = {g} is not < e = {e}", g, e)


def zeta_from_ideal(p, *, seed=0, prime=DEFAULT_PRIME, confirm_prime=None, retries=5):
    """Zeta function P/Q of the problem; P is computed from the Segre class."""
    check_rank(p)
    amb = p.base_ambient
    names = zeta_vars(amb.nfactors)
    amb_t = amb.with_vars(names)
    res = compute_segre(p.ideal, p.ring, seed=seed, prime=prime,
                        confirm_prime=confirm_prime, retries=retries)
    seg = ChowClass(res.segre.coeffs, amb_t)
    numerator = total_chern(p.bundle, amb_t) * seg
    P = reduced_representative(numerator)
    Q = p.bundle.chern_polynomial(names)
    if P.total_degree() > p.g:
        raise SegreZetaError(
            f"numerator {P} has degree {P.total_degree()} > g = {p.g}; "
            "the Segre class is inconsistent")
    z = ZetaFunction(P, Q, p.bundle, amb_t, segre=ChowClass(res.segre.coeffs, amb))
    return z


# -- cones ----------------------------------------------------------------

_STEM = re.compile(r"^(.*?)(\d+)$")


def _enlarged_block(block, size):
    m = _STEM.match(block[-1])
    names = list(block)
    if m and all(_STEM.match(v) and _STEM.match(v).group(1) == m.group(1) for v in block):
        stem = m.group(1)
        k = int(m.group(2)) + 1
        while len(names) < size:
            names.append(f"{stem}{k}")
            k += 1
    else:
        k = 0
        while len(names) < size:
            names.append(f"{block[0]}_{k}")
            k += 1
    return names


def cone_ideal(p, target):
    """The same generators read in the larger ambient ``target``."""
    if isinstance(target, (list, tuple)):
        target = AmbientSpec(target)
    base = p.base_ambient
    if not target.dominates(base):
        raise StructuralError(f"target {target!r} does not dominate {base!r}")
    if target.factor_dims == base.factor_dims:
        return p
    ring = p.ring
    blocks = [_enlarged_block(b, n + 1)
              for b, n in zip(ring.blocks.blocks, target.factor_dims)]
    taken = set()
    for b in blocks:
        for v in b:
            if v in taken:
                raise StructuralError(f"cannot enlarge blocks without clashing names ({v})")
            taken.add(v)
    big = PolyRing(blocks, ring.field)
    ideal = [(f.map_to(big), d) for f, d in p.ideal]
    return ZetaProblem(ideal, p.bundle, AmbientSpec(target.factor_dims))


@dataclass
class VerificationReport:
    instance: dict
    target: tuple
    predicted: ChowClass
    computed: ChowClass
    seeds: list
    prime: int
    log: list = field(default_factory=list)

    @property
    def verdict(self):
        return "match" if self.predicted == self.computed else "mismatch"

    def to_json(self):
        return {
            "instance": self.instance,
            "target": list(self.target),
            "predicted": self.predicted.to_json(),
            "computed": self.computed.to_json(),
            "verdict": self.verdict,
            "seeds": list(self.seeds),
            "prime": self.prime,
        }


def verify_cone(p, target, *, seed=0, prime=DEFAULT_PRIME, confirm_prime=None, retries=5,
                zeta=None):
    """Compare the zeta function evaluated on ``target`` with the cone's Segre class."""
    if isinstance(target, (list, tuple)):
        target = AmbientSpec(target)
    check_rank(p, strict=True)
    z = zeta or zeta_from_ideal(p, seed=seed, prime=prime, confirm_prime=confirm_prime,
                                retries=retries)
    cone = cone_ideal(p, target)
    predicted = ChowClass(z.evaluate(target).coeffs, AmbientSpec(target.factor_dims))
    res = compute_segre(cone.ideal, cone.ring, seed=seed, prime=prime,
                        confirm_prime=confirm_prime, retries=retries)
    return VerificationReport(p.describe(), target.factor_dims, predicted, res.segre,
                              [seed], prime, res.log)


# -- structural properties ------------------------------------------------

@dataclass
class PropertyReport:
    checks: list                # (name, status, detail); status pass/fail/n/a

    @property
    def passed(self):
        return all(status != "fail" for _, status, _ in self.checks)

    def to_json(self):
        return {name: {"status": status, "detail": detail}
                for name, status, detail in self.checks}

    def lines(self):
        return [f"{status.upper():4s} {name}: {detail}" for name, status, detail in self.checks]


def top_dimensional_class(p, codim, *, weight="length", seed=0, prime=DEFAULT_PRIME,
                          confirm_prime=None, retries=5):
    """Top-dimensional part of a cycle on Z in codimension ``codim``, by slicing Z.

    The coefficient of H^a (a multi-index with |a| = codim) comes from Z met
    with a generic linear P^a (a_f on factor f), read in a generic affine
    chart; lower-dimensional and embedded pieces miss such slices.

    ``weight="length"`` gives the fundamental class [Z] (components weighted
    by length). ``weight="samuel"`` weights each component by the Samuel
    multiplicity of Y along it: on the slice, ``codim`` generic combinations
    of the generators form a reduction of the ideal, and the multiplicity is
    the part of their colength supported on Z. This is the cycle that
    appears as the lowest term of s(Z, Y); the two agree when Z is
    generically a local complete intersection.
    """
    if weight not in ("length", "samuel"):
        raise StructuralError(f"unknown weight {weight!r}")
    amb = p.base_ambient
    ring = p.ring
    prime, confirm_prime = _primes(ring, prime, confirm_prime)
    dims = amb.factor_dims
    gens = p.generators
    coeffs = {}
    log = []

    def count(alpha, prime_, rng):
        field_ = GF(prime_)
        blocks = [[f"z{f}_{j}" for j in range(a)] for f, a in enumerate(alpha) if a]
        if not blocks:
            blocks = [["z_"]]
        S = PolyRing(blocks, field_)
        images = {}
        for f, a in enumerate(alpha):
            params = [S.gen(f"z{f}_{j}") for j in range(a)] + [S.one()]
            for name in ring.blocks.blocks[f]:
                images[name] = sum((q.scale(rng.randrange(1, prime_)) for q in params),
                                   S.zero())
        Rp = ring.with_field(field_)
        eqs = [g.map_to(Rp).substitute(images) for g in gens]
        extra = [S.gen("z_")] if blocks == [["z_"]] else []
        I = Ideal(eqs + extra, S)
        if not is_zero_dimensional(I):
            raise _NotGeneric(f"Z sliced to {alpha} is not zero-dimensional")
        if weight == "length":
            return quotient_length(I)
        combos = []
        for _ in range(codim):
            c = S.zero()
            for e in eqs:
                c = c + e.scale(rng.randrange(1, prime_))
            combos.append(c)
        J = Ideal(combos + extra, S)
        if not is_zero_dimensional(J):
            raise _NotGeneric(f"reduction on slice {alpha} is not zero-dimensional")
        away = saturate(J, [e for e in eqs if not e.is_zero()] or [S.one()])
        return quotient_length(J) - quotient_length(away)

    def alphas(k, total):
        if k == 0:
            if total == 0:
                yield ()
            return
        for a in range(min(dims[len(dims) - k], total) + 1):
            for rest in alphas(k - 1, total - a):
                yield (a,) + rest

    for alpha in alphas(len(dims), codim):
        c = _confirmed(lambda pr, rng, alpha=alpha: count(alpha, pr, rng), seed,
                       ("top", weight) + alpha, prime, confirm_prime, retries, log)
        if c:
            coeffs[alpha] = c
    return ChowClass(coeffs, amb)


def check_properties(z, p, *, seed=0, prime=DEFAULT_PRIME, confirm_prime=None,
                     retries=5):
    """Structural checks on the numerator and denominator of ``z``."""
    checks = []
    P, Q = z.P, z.Q
    names = P.names
    g = p.g

    # (1) lowest part of P against the top-dimensional part of Z, with the
    # Samuel multiplicities that govern the lowest Segre term; the
    # length-weighted fundamental class is reported alongside
    seg = z.segre
    if seg is None or P.is_zero():
        checks.append(("lowest_term", "n/a", "empty subscheme"))
    else:
        codim = seg.lowest_codim()
        low = P.low_degree()
        kw = dict(seed=seed, prime=prime, confirm_prime=confirm_prime, retries=retries)
        samuel = reduced_representative(
            top_dimensional_class(p, codim, weight="samuel", **kw)).rename(names)
        fundamental = reduced_representative(
            top_dimensional_class(p, codim, **kw)).rename(names)
        ok = low == codim and P.degree_part(low) == samuel
        note = "" if samuel == fundamental else \
            f"; [Z] = {fundamental} differs (Z is not generically lci)"
        checks.append(("lowest_term", "pass" if ok else "fail",
                       f"lowest part {P.degree_part(low)} in degree {low}; "
                       f"top part of Z {samuel} in codim {codim}{note}"))

    # (2) highest part of P equals that of Q, i.e. c_g(G)
    top_chern = p.bundle.top_chern_polynomial(names)
    high = P.degree_part(g)
    ok = high == top_chern and Q.degree_part(Q.total_degree()) == top_chern \
        and P.total_degree() == top_chern.total_degree()
    checks.append(("highest_term", "pass" if ok else "fail",
                   f"degree-{g} part {high}; c_g(G) = {top_chern}"))

    # (3) degree bound
    ok = P.total_degree() <= g
    checks.append(("degree_bound", "pass" if ok else "fail",
                   f"deg P = {P.total_degree()} <= g = {g}"))

    # (4) nonnegativity in the globally generated case
    if p.bundle.globally_generated():
        neg = {e: c for e, c in P.coeffs.items() if c < 0}
        checks.append(("nonnegative", "fail" if neg else "pass",
                       "all coefficients >= 0" if not neg else f"negative terms {neg}"))
    else:
        checks.append(("nonnegative", "n/a", "some declared degree is negative"))

    # (5) denominator
    expected = p.bundle.chern_polynomial(names)
    checks.append(("denominator", "pass" if Q == expected else "fail",
                   f"Q = {Q}"))
    return PropertyReport(checks)


# -- hyperplane restriction --------------------------------------------------

def restrict_hyperplane(p, factor=0, rng=None):
    """Restrict to a generic hyperplane of one factor.

    The last variable of the factor is replaced by a random linear form in
    the others; declared degrees are kept.
    """
    if rng is None:
        rng = random.Random(0)
    elif isinstance(rng, int):
        rng = random.Random(rng)
    dims = list(p.base_ambient.factor_dims)
    if not 0 <= factor < len(dims):
        raise StructuralError(f"no factor {factor}")
    if dims[factor] < 1:
        raise StructuralError("cannot restrict a factor of dimension 0")
    new_dims = dims[:]
    new_dims[factor] -= 1
    e_new = min(new_dims) + 1
    if not p.g < e_new:
        raise RankConstraintError(
            f"rank constraint violated: g = {p.g} is not < e' = {e_new}", p.g, e_new)
    ring = p.ring
    block = ring.blocks.blocks[factor]
    last = block[-1]
    blocks = [list(b) for b in ring.blocks.blocks]
    blocks[factor] = list(block[:-1])
    small = PolyRing(blocks, ring.field)
    bound = ring.field.p or DEFAULT_PRIME
    form = small.zero()
    for v in block[:-1]:
        form = form + small.gen(v).scale(rng.randrange(1, bound))
    ideal = []
    for f, d in p.ideal:
        g = f.substitute({last: form}) if last in f.variables() else f.map_to(small)
        if g.is_zero():
            raise SegreZetaError(f"{f} vanishes on the chosen hyperplane")
        ideal.append((g, d))
    return ZetaProblem(ideal, p.bundle, AmbientSpec(new_dims))


# -- relative views on products ------------------------------------------------

@dataclass
class RelativeView:
    """P/Q with the variable of ``coefficient_factor`` read in Z[var]/(var^{n+1})."""

    P: IntPoly
    Q: IntPoly
    coefficient_factor: int
    coefficient_dim: int

    def expand(self, fiber_dim):
        dims = [0, 0]
        dims[self.coefficient_factor] = self.coefficient_dim
        dims[1 - self.coefficient_factor] = fiber_dim
        return expand_rational(self.P, self.Q, AmbientSpec(dims, self.P.names))


def _truncate_var(poly, index, bound):
    return IntPoly({e: c for e, c in poly.coeffs.items() if e[index] <= bound}, poly.names)


def relative_views(z):
    """The two readings of a product zeta function as a relative one.

    The first treats s as a coefficient from A(P^n) (fiber variable t), the
    second treats t as a coefficient from A(P^m).
    """
    amb = z.base_ambient
    if amb.nfactors != 2:
        raise StructuralError("relative views need a two-factor base")
    n, m = amb.factor_dims
    v1 = RelativeView(_truncate_var(z.P, 0, n), _truncate_var(z.Q, 0, n), 0, n)
    v2 = RelativeView(_truncate_var(z.P, 1, m), _truncate_var(z.Q, 1, m), 1, m)
    return v1, v2
