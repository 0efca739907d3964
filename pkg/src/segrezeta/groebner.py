"""Buchberger's algorithm (sugar strategy, Gebauer-Moeller pruning) and the
ideal operations built on top of it.

Internally a monomial is carried twice, as two linear images of its exponent
vector:

* ``key``, a big integer whose natural order is the term order, so that
  multiplying monomials is adding keys;
* ``E``, the exponents packed into 16-bit fields with a guard bit, which
  turns divisibility tests and lcms into a few integer operations.

Exponents must stay below 2**15.
"""

from __future__ import annotations

import heapq

from .errors import DimensionError, StructuralError
from .exactalg import MultiPoly

_BITS = 16
_FIELD = (1 << _BITS) - 1
_LOW = (1 << (_BITS - 1)) - 1


class TermOrder:
    """Graded reverse lexicographic order, optionally refined into a block
    elimination order whose first block is the variable indices ``first``.

    Ties inside a block follow the declaration order of the variables.
    """

    def __init__(self, kind="grevlex", first=()):
        if kind not in ("grevlex", "elimination"):
            raise ValueError(f"unknown term order {kind!r}")
        self.kind = kind
        self.first = tuple(sorted(set(first))) if kind == "elimination" else ()

    @classmethod
    def elimination(cls, first):
        return cls("elimination", first)

    def weights(self, nvars):
        base = 1 << _BITS
        if self.kind == "grevlex":
            return _grevlex_weights(range(nvars), nvars, base)
        rest = [i for i in range(nvars) if i not in self.first]
        wa = _grevlex_weights(self.first, nvars, base)
        wr = _grevlex_weights(rest, nvars, base)
        big = base ** (len(rest) + 2)
        return [a * big + r for a, r in zip(wa, wr)]

    def key(self, exps):
        return sum(e * w for e, w in zip(exps, self.weights(len(exps))))

    def __eq__(self, other):
        return (isinstance(other, TermOrder) and other.kind == self.kind
                and other.first == self.first)

    def __hash__(self):
        return hash((self.kind, self.first))

    def __repr__(self):
        if self.kind == "grevlex":
            return "TermOrder('grevlex')"
        return f"TermOrder.elimination({list(self.first)})"


GREVLEX = TermOrder()


def _grevlex_weights(indices, nvars, base):
    indices = list(indices)
    top = base ** len(indices)
    w = [0] * nvars
    for pos, i in enumerate(indices):
        w[i] = top - base ** pos
    return w


class _Engine:
    """Packed-monomial arithmetic for one (ring, order) pair."""

    def __init__(self, ring, order):
        self.ring = ring
        self.order = order
        self.n = ring.nvars
        self.p = ring.field.p
        self.field = ring.field
        self.w = order.weights(self.n)
        self.shifts = [_BITS * i for i in range(self.n)]
        self.guard = sum(1 << (s + _BITS - 1) for s in self.shifts)
        self.ones = sum(_LOW << s for s in self.shifts)
        self.E_of = {}

    # -- conversions ---------------------------------------------------------
    def encode(self, exps):
        key = 0
        E = 0
        for e, w, s in zip(exps, self.w, self.shifts):
            if e:
                if e > _LOW:
                    raise StructuralError("exponent too large for the packed engine")
                key += e * w
                E += e << s
        self.E_of[key] = E
        return key

    def decode(self, E):
        return tuple((E >> s) & _FIELD for s in self.shifts)

    def from_poly(self, f):
        items = sorted(((self.encode(e), c) for e, c in f.terms.items()), reverse=True)
        keys = [k for k, _ in items]
        return (keys, [c for _, c in items], [self.E_of[k] for k in keys])

    def to_poly(self, g):
        keys, coeffs, Es = g
        return MultiPoly(self.ring, {self.decode(E): c for E, c in zip(Es, coeffs)},
                         _normalized=True)

    # -- monomial helpers ----------------------------------------------------
    def divides(self, a, b):
        return ((b | self.guard) - a) & self.guard == self.guard

    def lcm(self, a, b):
        d = ((b | self.guard) - a) & self.guard
        mask = (d >> (_BITS - 1)) * _LOW
        return (b & mask) | (a & (self.ones ^ mask))

    def degree(self, E):
        return E % _FIELD

    def key_of(self, E):
        key = 0
        for s, w in zip(self.shifts, self.w):
            e = (E >> s) & _FIELD
            if e:
                key += e * w
        self.E_of[key] = E
        return key

    def monic(self, g):
        keys, coeffs, Es = g
        lc = coeffs[0]
        if lc == 1:
            return g
        inv = self.field.inv(lc)
        if self.p:
            p = self.p
            return (keys, [c * inv % p for c in coeffs], Es)
        return (keys, [c * inv for c in coeffs], Es)

    # -- reduction -----------------------------------------------------------
    def reduce(self, terms, G, div_cache, full=True):
        """Normal form of the dict ``terms`` (key -> coeff) modulo monic ``G``.

        ``G`` is a list of packed polynomials; ``div_cache`` maps a packed
        exponent to the index of a reducer (or -1) and must be reset by the
        caller whenever ``G`` changes.
        """
        p = self.p
        E_of = self.E_of
        guard = self.guard
        leads = [g[2][0] for g in G]
        heap = [-k for k in terms]
        heapq.heapify(heap)
        rem_keys = []
        rem_coeffs = []
        while heap:
            k = -heapq.heappop(heap)
            c = terms.pop(k, None)
            if c is None:
                continue
            E = E_of[k]
            j = div_cache.get(E)
            if j is None:
                j = -1
                for idx, L in enumerate(leads):
                    if ((E | guard) - L) & guard == guard:
                        j = idx
                        break
                div_cache[E] = j
            if j < 0:
                rem_keys.append(k)
                rem_coeffs.append(c)
                if not full:
                    for k2 in sorted(terms, reverse=True):
                        rem_keys.append(k2)
                        rem_coeffs.append(terms[k2])
                    terms.clear()
                    break
                continue
            gkeys, gcoeffs, gEs = G[j]
            dk = k - gkeys[0]
            dE = E - gEs[0]
            for t in range(1, len(gkeys)):
                nk = gkeys[t] + dk
                old = terms.get(nk)
                if old is None:
                    v = -c * gcoeffs[t]
                    if p:
                        v %= p
                    terms[nk] = v
                    if nk not in E_of:
                        E_of[nk] = gEs[t] + dE
                    heapq.heappush(heap, -nk)
                else:
                    v = old - c * gcoeffs[t]
                    if p:
                        v %= p
                    if v:
                        terms[nk] = v
                    else:
                        del terms[nk]
        return (rem_keys, rem_coeffs, [E_of[k] for k in rem_keys])

    def spoly(self, f, g, L):
        """S-polynomial of monic ``f`` and ``g`` with lead lcm ``L`` as a dict."""
        p = self.p
        fk = self.key_of(L - f[2][0]) if L != f[2][0] else 0
        gk = self.key_of(L - g[2][0]) if L != g[2][0] else 0
        E_of = self.E_of
        out = {}
        for k, c, E in zip(f[0][1:], f[1][1:], f[2][1:]):
            nk = k + fk
            out[nk] = c
            if nk not in E_of:
                E_of[nk] = E + (L - f[2][0])
        dg = L - g[2][0]
        for k, c, E in zip(g[0][1:], g[1][1:], g[2][1:]):
            nk = k + gk
            v = out.get(nk, 0) - c
            if p:
                v %= p
            if v:
                out[nk] = v
            else:
                out.pop(nk, None)
            if nk not in E_of:
                E_of[nk] = E + dg
        return out


def _buchberger(engine, polys):
    """Reduced Groebner basis of packed polynomials (list of monic triples)."""
    basis = []       # all polynomials ever added
    sugar = []
    active = []      # indices into basis forming the current G
    pairs = []       # heap of (sugar, lcm key, i, j, lcm E)
    div_cache = {}

    def current():
        return [basis[i] for i in active]

    def update(h_idx):
        h = basis[h_idx]
        hE = h[2][0]
        cand = []
        for g_idx in active:
            gE = basis[g_idx][2][0]
            cand.append((g_idx, engine.lcm(hE, gE), gE))
        # Gebauer-Moeller: drop new pairs whose lcm is a multiple of another
        # new pair's lcm, then the ones with coprime leading monomials.
        kept = []
        for pos, (g_idx, L, gE) in enumerate(cand):
            coprime = L == hE + gE
            if not coprime and (
                    any(engine.divides(o[1], L) for o in cand[pos + 1:])
                    or any(engine.divides(o[1], L) for o in kept)):
                continue
            kept.append((g_idx, L, gE, coprime))
        new_pairs = [(g_idx, L, gE) for g_idx, L, gE, coprime in kept if not coprime]
        # Prune old pairs whose lcm is divisible by lead(h) strictly.
        if pairs:
            survivors = []
            for item in pairs:
                _, _, i, j, L = item
                if engine.divides(hE, L):
                    Li = engine.lcm(basis[i][2][0], hE)
                    Lj = engine.lcm(basis[j][2][0], hE)
                    if Li != L and Lj != L:
                        continue
                survivors.append(item)
            pairs[:] = survivors
            heapq.heapify(pairs)
        hdeg = engine.degree(hE)
        for g_idx, L, gE in new_pairs:
            dl = engine.degree(L)
            s = max(sugar[h_idx] + dl - hdeg, sugar[g_idx] + dl - engine.degree(gE))
            heapq.heappush(pairs, (s, engine.key_of(L), g_idx, h_idx, L))
        active[:] = [i for i in active if not engine.divides(hE, basis[i][2][0])]
        active.append(h_idx)

    def add(h, s):
        basis.append(engine.monic(h))
        sugar.append(s)
        update(len(basis) - 1)
        div_cache.clear()

    for f in sorted(polys, key=lambda f: f[0][0]):
        G = current()
        h = engine.reduce(dict(zip(f[0], f[1])), G, div_cache)
        if h[0]:
            add(h, max(engine.degree(E) for E in f[2]))
    while pairs:
        s, _, i, j, L = heapq.heappop(pairs)
        sp = engine.spoly(basis[i], basis[j], L)
        if not sp:
            continue
        h = engine.reduce(sp, current(), div_cache)
        if h[0]:
            add(h, s)
    return _interreduce(engine, current())


def _interreduce(engine, G):
    G = sorted(G, key=lambda g: g[0][0])
    minimal = []
    for g in G:
        if not any(engine.divides(h[2][0], g[2][0]) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = dict(zip(g[0][1:], g[1][1:]))
        r = engine.reduce(tail, others, {})
        out.append(([g[0][0]] + r[0], [g[1][0]] + r[1], [g[2][0]] + r[2]))
    out = [engine.monic(g) for g in out]
    out.sort(key=lambda g: g[0][0], reverse=True)
    return out


class Ideal:
    """An ideal given by generators, with Groebner bases cached per order.

    The cache is filled once per order and never changed afterwards.
    """

    def __init__(self, generators, ring=None):
        generators = list(generators)
        if ring is None:
            if not generators:
                raise StructuralError("an empty generator list needs an explicit ring")
            ring = generators[0].ring
        for g in generators:
            if g.ring != ring:
                raise StructuralError("all generators must share one ring")
        self.ring = ring
        self.generators = [g for g in generators if not g.is_zero()]
        self._bases = {}

    def groebner_basis(self, order=GREVLEX):
        return groebner_basis(self, order)

    def reduce(self, f, order=GREVLEX):
        return normal_form(f, self.groebner_basis(order), order)

    def __contains__(self, f):
        return self.reduce(f).is_zero()

    def is_zero(self):
        return not self.generators

    def is_unit(self):
        G = self.groebner_basis()
        return len(G) == 1 and G[0].is_constant()

    def contains_ideal(self, other):
        return all(g in self for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            return NotImplemented
        return self.groebner_basis() == other.groebner_basis()

    __hash__ = None

    def map_to(self, ring):
        return Ideal([g.map_to(ring) for g in self.generators], ring)

    def __add__(self, other):
        return Ideal(self.generators + other.generators, self.ring)

    def __repr__(self):
        return f"Ideal([{', '.join(str(g) for g in self.generators)}])"


def groebner_basis(I, order=GREVLEX):
    """Reduced Groebner basis of ``I`` for ``order`` as monic MultiPolys."""
    cached = I._bases.get(order)
    if cached is not None:
        return list(cached)
    engine = _Engine(I.ring, order)
    packed = [engine.monic(engine.from_poly(g)) for g in I.generators]
    G = _buchberger(engine, packed)
    result = tuple(engine.to_poly(g) for g in G)
    I._bases.setdefault(order, result)
    return list(I._bases[order])


def normal_form(f, basis, order=GREVLEX):
    """Fully reduced remainder of ``f`` modulo a Groebner basis."""
    if f.is_zero() or not basis:
        return f
    engine = _Engine(f.ring, order)
    G = [engine.monic(engine.from_poly(g)) for g in basis]
    pf = engine.from_poly(f)
    r = engine.reduce(dict(zip(pf[0], pf[1])), G, {})
    return engine.to_poly(r)


def leading_exponent(f, order=GREVLEX):
    w = order.weights(f.ring.nvars)
    return max(f.terms, key=lambda e: sum(a * b for a, b in zip(e, w)))


def eliminate(I, drop):
    """Generators of the intersection of ``I`` with the subring lacking ``drop``.

    The result stays in the ring of ``I``; its generators simply avoid the
    dropped variables.
    """
    drop = set(drop)
    if not drop:
        return Ideal(I.generators, I.ring)
    idx = [I.ring.blocks.index[v] for v in drop]
    G = groebner_basis(I, TermOrder.elimination(idx))
    kept = [g for g in G if not (g.variables() & drop)]
    return Ideal(kept, I.ring)


def _with_aux(ring, stem):
    name = ring.fresh_name(stem)
    return ring.extend([name]), name


def intersect(I, J):
    """I ∩ J via t*I + (1-t)*J and elimination of t."""
    ring = I.ring
    if J.ring != ring:
        raise StructuralError("ideals live in different rings")
    big, t = _with_aux(ring, "_t")
    T = big.gen(t)
    gens = [T * g.map_to(big) for g in I.generators]
    gens += [(1 - T) * g.map_to(big) for g in J.generators]
    E = eliminate(Ideal(gens, big), {t})
    return Ideal([g.map_to(ring) for g in E.generators], ring)


def saturate_element(I, f):
    """I : f^∞ via the extra generator 1 - w*f and elimination of w."""
    ring = I.ring
    big, w = _with_aux(ring, "_w")
    gens = [g.map_to(big) for g in I.generators]
    gens.append(1 - big.gen(w) * f.map_to(big))
    E = eliminate(Ideal(gens, big), {w})
    return Ideal([g.map_to(ring) for g in E.generators], ring)


def saturate(I, J):
    """I : J^∞ as the intersection of I : f^∞ over the generators f of J."""
    if not isinstance(J, Ideal):
        J = Ideal(J, I.ring)
    if J.is_zero():
        raise StructuralError("cannot saturate by the zero ideal")
    result = None
    for f in J.generators:
        S = saturate_element(I, f)
        result = S if result is None else intersect(result, S)
    # normalise the generator list to the reduced basis
    return Ideal(groebner_basis(result), I.ring)


def _leads(I):
    return [leading_exponent(g) for g in groebner_basis(I)]


def is_zero_dimensional(I):
    """True iff finitely many monomials lie outside the leading-term ideal."""
    leads = _leads(I)
    n = I.ring.nvars
    if any(not any(e) for e in leads):
        return True
    for i in range(n):
        if not any(e[i] > 0 and all(a == 0 for j, a in enumerate(e) if j != i)
                   for e in leads):
            return False
    return True


def standard_monomials(I):
    """Exponents outside the leading-term ideal (finite case only)."""
    if not is_zero_dimensional(I):
        raise DimensionError("quotient ring is not finite dimensional")
    leads = _leads(I)
    n = I.ring.nvars
    if any(not any(e) for e in leads):
        return []

    def standard(m):
        return not any(all(a <= b for a, b in zip(L, m)) for L in leads)

    start = (0,) * n
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
                if m2 not in seen and standard(m2):
                    seen.add(m2)
                    nxt.append(m2)
        frontier = nxt
    return sorted(seen, key=lambda e: (sum(e), e))


def quotient_length(I):
    """Vector space dimension of the quotient by a zero-dimensional ideal."""
    return len(standard_monomials(I))
