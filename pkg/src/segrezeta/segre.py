"""Pushforwards of Segre classes of subschemes of products of projective spaces.

The subscheme Z of Y = P^{n_1} x ... x P^{n_k} is given by multihomogeneous
generators. After equigeneration the forms F_0..F_r all share one multidegree
d and define a rational map Y --> P^r whose graph closure Gamma is the
blow-up of Y along Z. With exceptional class eps = sum_f d_f H_f - u,

    i_* s(Z, Y) = pr_* ( sum_{j>=1} (-1)^{j-1} eps^j . [Gamma] ),

where pr_* keeps the coefficient of u^r. The class of Gamma is read off from
point counts on generic linear slices over a large prime field, each count
confirmed under a second prime.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .chowring import AmbientSpec, ChowClass, coefficient_extract, expand_rational, inverse
from .errors import (
    FullAmbientError,
    GenericityExhaustedError,
    StructuralError,
    ZeroMapError,
)
from .exactalg import (
    DEFAULT_PRIME,
    GF,
    MultiPoly,
    PolyRing,
    monomials_of_degree,
    multidegree_of,
)
from .groebner import Ideal, is_zero_dimensional, quotient_length, saturate

CONFIRM_PRIME = 1000003


def ambient_of(ring, nfactors=None):
    blocks = ring.blocks.blocks
    if nfactors is not None:
        blocks = blocks[:nfactors]
    return AmbientSpec([len(b) - 1 for b in blocks])


def _normalize_generators(I, nfactors=None):
    """Pairs (poly, multidegree) with the zero polynomials removed."""
    if isinstance(I, Ideal):
        I = I.generators
    pairs = []
    for item in I:
        if isinstance(item, MultiPoly):
            f, d = item, None
        else:
            f, d = item
        if f.is_zero():
            continue
        actual = multidegree_of(f)
        if nfactors is not None:
            actual = actual[:nfactors]
        if d is not None and tuple(d) != tuple(actual):
            raise StructuralError(f"declared degree {tuple(d)} of {f} differs from {actual}")
        pairs.append((f, tuple(actual)))
    return pairs


def equigenerate(I, degree=None):
    """Forms of one common multidegree generating the same subscheme.

    Each generator is multiplied by every monomial bringing it up to the
    componentwise maximum degree (or ``degree`` when given); exact
    duplicates up to scalars are dropped. Returns ``(forms, d)``.
    """
    pairs = _normalize_generators(I)
    if not pairs:
        if isinstance(I, Ideal) or not I:
            raise StructuralError("equigenerate needs at least one nonzero generator")
        raise ZeroMapError("all generators are zero")
    ring = pairs[0][0].ring
    k = len(pairs[0][1])
    d = tuple(max(p[1][i] for p in pairs) for i in range(k))
    if degree is not None:
        degree = tuple(degree)
        if any(a < b for a, b in zip(degree, d)):
            raise StructuralError(f"target degree {degree} is below {d}")
        d = degree
    forms = []
    seen = set()
    for f, e in pairs:
        gap = tuple(a - b for a, b in zip(d, e))
        for mono in monomials_of_degree(ring, gap):
            g = f * ring.monomial(mono)
            key = g.monic()
            if key not in seen:
                seen.add(key)
                forms.append(g)
    return forms, d


@dataclass
class GraphData:
    graph_ideal: Ideal
    common_degree: tuple
    generator_count: int
    forms: list = field(default_factory=list)
    aux_names: tuple = ()

    @property
    def ring(self):
        return self.graph_ideal.ring


def _aux_names(ring, count, stem="u"):
    names = [f"{stem}{i}" for i in range(count)]
    if any(n in ring.blocks.index for n in names):
        names = [f"_{stem}{i}" for i in range(count)]
    return names


def graph_closure(forms, ring=None):
    """Ideal of the closure of the graph of (F_0 : ... : F_r).

    It is the ideal of 2x2 minors of the matrix with rows (u_i) and (F_i),
    saturated by (F_0, ..., F_r).
    """
    forms = [f for f in forms]
    if not forms:
        raise StructuralError("graph_closure needs at least one form")
    if ring is None:
        ring = forms[0].ring
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise ZeroMapError("all forms vanish identically")
    degs = {multidegree_of(f) for f in nonzero}
    if len(degs) != 1:
        raise StructuralError(f"forms have different multidegrees {sorted(degs)}")
    names = _aux_names(ring, len(forms))
    big = ring.extend(names)
    u = [big.gen(n) for n in names]
    F = [f.map_to(big) for f in forms]
    minors = []
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            m = u[i] * F[j] - u[j] * F[i]
            if not m.is_zero():
                minors.append(m)
    I = Ideal(minors, big)
    J = Ideal([f for f in F if not f.is_zero()], big)
    G = saturate(I, J)
    return GraphData(G, degs.pop(), len(forms), forms, tuple(names))


@dataclass
class MultidegreeVector:
    """Coefficients of [Gamma] in Y x P^r.

    ``entries`` maps (a_1, ..., a_k, c) to the coefficient of
    H_1^{a_1} ... H_k^{a_k} u^c; all keys satisfy sum = r.
    """

    entries: dict
    factor_dims: tuple
    r: int
    seeds: list = field(default_factory=list)

    def class_in(self, ambient):
        return ChowClass(self.entries, ambient)

    def projective_degrees(self):
        """g_i = coefficient of H^i u^{r-i}, single factor only."""
        if len(self.factor_dims) != 1:
            raise StructuralError("projective degrees are defined for one factor")
        n = self.factor_dims[0]
        return [self.entries.get((i, self.r - i), 0) for i in range(min(n, self.r) + 1)]


def _alphas(dims, r):
    """Exponent vectors a with a_f <= n_f and sum(a) <= r."""
    out = [()]
    for n in dims:
        out = [a + (i,) for a in out for i in range(n + 1)]
    return [a for a in out if sum(a) <= r]


def _rng(seed, *tag):
    return random.Random(":".join(str(x) for x in (seed,) + tag))


class _NotGeneric(Exception):
    pass


def _slice_count(forms, ring, dims, alpha, prime, rng):
    """Points of Gamma cut by generic linear spaces, counted on Y.

    On each factor a generic P^{a_f} is parametrised linearly, with one
    parameter set to 1 (a generic affine chart). The u-slices become
    random combinations of the forms; the base locus is removed with the
    extra equation 1 - v * (generic combination).
    """
    field_ = GF(prime)
    blocks = []
    for f, a in enumerate(alpha):
        if a:
            blocks.append([f"z{f}_{j}" for j in range(a)])
    blocks.append(["v"])
    S = PolyRing(blocks, field_)
    Rp = ring.with_field(field_)
    images = {}
    for f, (n, a) in enumerate(zip(dims, alpha)):
        params = [S.gen(f"z{f}_{j}") for j in range(a)] + [S.one()]
        for i, name in enumerate(ring.blocks.blocks[f]):
            images[name] = sum((p.scale(rng.randrange(1, prime)) for p in params),
                               S.zero())
    Fp = [f.map_to(Rp) for f in forms]

    def combo():
        out = Rp.zero()
        for f in Fp:
            out = out + f.scale(rng.randrange(1, prime))
        return out

    eqs = [combo().substitute(images) for _ in range(sum(alpha))]
    guard = combo().substitute(images)
    eqs.append(1 - S.gen("v") * guard)
    I = Ideal(eqs, S)
    if not is_zero_dimensional(I):
        raise _NotGeneric(f"slice {alpha} is not zero-dimensional")
    return quotient_length(I)


def _primes(ring, prime, confirm_prime):
    """Counting primes for input over ``ring``.

    Rational input is reduced modulo two distinct primes. Input already
    over GF(q) cannot be moved to another characteristic, so both runs use
    q and differ only in their random draws.
    """
    if ring.field.p:
        return ring.field.p, ring.field.p
    if confirm_prime is None:
        confirm_prime = CONFIRM_PRIME if prime != CONFIRM_PRIME else DEFAULT_PRIME
    return prime, confirm_prime


def _confirmed(compute, seed, tag, prime, confirm_prime, retries, log):
    """Run ``compute(prime, rng)`` twice, independently, until the results agree."""
    for attempt in range(retries + 1):
        try:
            a = compute(prime, _rng(seed, tag, attempt, prime))
            b = compute(confirm_prime, _rng(seed, tag, attempt, confirm_prime, "confirm"))
        except _NotGeneric as exc:
            log.append(f"{tag} attempt {attempt}: {exc}")
            continue
        if a == b:
            return a
        log.append(f"{tag} attempt {attempt}: primes {prime} and {confirm_prime} "
                   f"disagree ({a} vs {b})")
    raise GenericityExhaustedError(
        f"genericity checks failed for {tag} after {retries + 1} attempts", log)


def graph_multidegree(forms, ring=None, nfactors=None, *, seed=0, prime=DEFAULT_PRIME,
                      confirm_prime=None, retries=5, log=None):
    """Multidegree of the graph of (F_0 : ... : F_r), from counts on Y."""
    forms = [f for f in forms]
    if ring is None:
        ring = forms[0].ring
    if all(f.is_zero() for f in forms):
        raise ZeroMapError("all forms vanish identically")
    nfactors = nfactors or ring.blocks.nblocks
    dims = tuple(len(b) - 1 for b in ring.blocks.blocks[:nfactors])
    r = len(forms) - 1
    prime, confirm_prime = _primes(ring, prime, confirm_prime)
    log = [] if log is None else log
    entries = {}
    for alpha in _alphas(dims, r):
        count = _confirmed(
            lambda p, rng, alpha=alpha: _slice_count(forms, ring, dims, alpha, p, rng),
            seed, ("slice",) + alpha, prime, confirm_prime, retries, log)
        if count:
            entries[alpha + (r - sum(alpha),)] = count
    return MultidegreeVector(entries, dims, r, [seed])


def multidegree_class(G, nfactors=None, *, seed=0, prime=DEFAULT_PRIME,
                      confirm_prime=None, retries=5, log=None):
    """Multidegree of a graph ideal by slicing it directly.

    For the coefficient of H^a u^c: add n_f - a_f random linear forms on
    factor f and r - c on the u block, pick a random affine chart on every
    block, and count the points of the resulting zero-dimensional scheme.
    """
    ring = G.ring
    k = nfactors or ring.blocks.nblocks - 1
    dims = tuple(len(b) - 1 for b in ring.blocks.blocks[:k])
    r = G.generator_count - 1
    prime, confirm_prime = _primes(ring, prime, confirm_prime)
    log = [] if log is None else log
    u_block = ring.blocks.nblocks - 1
    block_dims = dims + (r,)

    def count(alpha, p, rng):
        Rp = ring.with_field(GF(p))
        eqs = [g.map_to(Rp) for g in G.graph_ideal.generators]
        cuts = [n - a for n, a in zip(dims, alpha)] + [sum(alpha)]
        for b, (cut, n) in enumerate(zip(cuts, block_dims)):
            blk = b if b < k else u_block
            for _ in range(cut):
                eqs.append(_linear(Rp, blk, rng))
            eqs.append(_linear(Rp, blk, rng) - 1)
        I = Ideal(eqs, Rp)
        if not is_zero_dimensional(I):
            raise _NotGeneric(f"graph slice {alpha} is not zero-dimensional")
        return quotient_length(I)

    entries = {}
    for alpha in _alphas(dims, r):
        c = _confirmed(lambda p, rng, alpha=alpha: count(alpha, p, rng),
                       seed, ("graph",) + alpha, prime, confirm_prime, retries, log)
        if c:
            entries[alpha + (r - sum(alpha),)] = c
    return MultidegreeVector(entries, dims, r, [seed])


def _linear(ring, block, rng):
    p = ring.field.p
    return sum((ring.gen(v).scale(rng.randrange(1, p))
                for v in ring.blocks.blocks[block]), ring.zero())


def graph_ambient(dims, r):
    names = ("h", "u") if len(dims) == 1 else tuple(f"h{i}" for i in range(len(dims))) + ("u",)
    return AmbientSpec(tuple(dims) + (r,), names)


def pushforward_segre(gamma, d, dims):
    """Push the exceptional-divisor series on Gamma down to Y."""
    r = gamma.r
    big = graph_ambient(dims, r)
    hyper = big.hyperplanes()
    eps = -hyper[-1]
    for f, df in enumerate(d):
        eps = eps + hyper[f] * df
    series = eps * inverse(big.one() + eps)
    total = series * gamma.class_in(big)
    down = coefficient_extract(total, len(dims), r)
    return ChowClass(down.coeffs, AmbientSpec(dims))


@dataclass
class SegreResult:
    segre: ChowClass
    forms: list
    degree: tuple
    multidegree: MultidegreeVector | None
    seed: int
    prime: int
    confirm_prime: int
    log: list


def compute_segre(I, ring=None, *, seed=0, prime=DEFAULT_PRIME, confirm_prime=None,
                  retries=5, allow_full=False):
    """Segre class computation with its intermediate data (see :func:`segre_class`)."""
    if isinstance(I, Ideal):
        ring = ring or I.ring
        I = I.generators
    items = list(I)
    if ring is None:
        if not items:
            raise StructuralError("an empty generator list needs an explicit ring")
        first = items[0]
        ring = first.ring if isinstance(first, MultiPoly) else first[0].ring
    ambient = ambient_of(ring)
    prime, confirm_prime = _primes(ring, prime, confirm_prime)
    pairs = _normalize_generators(items)
    if not pairs:
        if allow_full:
            return SegreResult(ambient.one(), [], (), None, seed, prime, confirm_prime, [])
        raise FullAmbientError("the ideal is zero; s(Y, Y) = [Y] needs allow_full=True")
    forms, d = equigenerate(pairs)
    log = []
    gamma = graph_multidegree(forms, ring, seed=seed, prime=prime,
                              confirm_prime=confirm_prime, retries=retries, log=log)
    seg = pushforward_segre(gamma, d, ambient.factor_dims)
    return SegreResult(seg, forms, d, gamma, seed, prime, confirm_prime, log)


def segre_class(I, ring=None, **kwargs):
    """i_* s(Z, Y) for the subscheme Z cut out by the generators ``I``.

    ``I`` is an :class:`Ideal`, a list of polynomials, or a list of
    ``(polynomial, multidegree)`` pairs; every block of the ring is a
    projective factor. Keyword arguments: ``seed``, ``prime``,
    ``confirm_prime``, ``retries`` and ``allow_full``.

    >>> from segrezeta.exactalg import PolyRing
    >>> R = PolyRing.projective([2])
    >>> str(segre_class([R("x0^2"), R("x0*x1")]))
    'H'
    """
    return compute_segre(I, ring, **kwargs).segre


def segre_from_projective_degrees(g, d, n):
    """1 - sum_i g_i H^i (1 + dH)^{-(i+1)} in the Chow ring of P^n."""
    if isinstance(g, MultidegreeVector):
        g = g.projective_degrees()
    amb = AmbientSpec([n])
    H = amb.hyperplane(0)
    inv = inverse(amb.one() + H * d)
    out = amb.one()
    power = inv
    for i, gi in enumerate(g):
        if i > n:
            break
        out = out - (H ** i) * power * gi
        power = power * inv
    return out


def projective_degrees(I, ring=None, **kwargs):
    """(g, d): projective degrees of the map given by the equigenerated forms."""
    pairs = _normalize_generators(I.generators if isinstance(I, Ideal) else I)
    forms, d = equigenerate(pairs)
    ring = ring or forms[0].ring
    if ring.blocks.nblocks != 1:
        raise StructuralError("projective degrees need a single projective factor")
    gamma = graph_multidegree(forms, ring, **kwargs)
    return gamma.projective_degrees(), d[0]


def complete_intersection_segre(degrees, ambient):
    """prod D_j / prod (1 + D_j) with D_j = sum_f d_{j,f} H_f."""
    H = ambient.hyperplanes()
    num = ambient.one()
    den = ambient.one()
    for d in degrees:
        d = tuple(d) if isinstance(d, (list, tuple)) else (d,)
        D = ambient.zero()
        for f, x in enumerate(d):
            D = D + H[f] * x
        num = num * D
        den = den * (ambient.one() + D)
    return expand_rational(num, den, ambient)
