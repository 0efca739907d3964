"""Truncated Chow rings of products of projective spaces.

The Chow ring of P^{n_1} x ... x P^{n_k} is Z[t_1..t_k]/(t_i^{n_i+1}).  Every
relation is a pure power, so a class has exactly one representative whose
exponents respect the bounds; :class:`ChowClass` stores that representative.
:class:`IntPoly` is the untruncated counterpart used for numerators and
denominators of zeta functions.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import NonUnitDenominatorError, StructuralError

_DEFAULT_VARS = {1: ("H",), 2: ("s", "t"), 3: ("s", "t", "u")}


def default_class_vars(k):
    return _DEFAULT_VARS.get(k, tuple(f"h{i}" for i in range(k)))


def _mul_terms(a, b, bounds=None):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if bounds is not None and any(x > n for x, n in zip(e, bounds)):
                continue
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _add_terms(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _display_order(e):
    return (sum(e), tuple(-x for x in e))


def format_terms(coeffs, names, grammar=False):
    """Human form ``s - s^2 + 3st^2`` or, with ``grammar``, ``s - s^2 + 3*s*t^2``."""
    if not coeffs:
        return "0"
    parts = []
    for e in sorted(coeffs, key=_display_order):
        c = coeffs[e]
        factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(names, e) if k]
        mono = ("*" if grammar else "").join(factors)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}" if grammar else f"{a}{mono}"
        if parts:
            parts.append(("- " if c < 0 else "+ ") + body)
        else:
            parts.append(("-" if c < 0 else "") + body)
    return " ".join(parts)


class AmbientSpec:
    """Product of projective spaces P^{n_1} x ... x P^{n_k}."""

    def __init__(self, factor_dims, class_vars=None):
        dims = tuple(int(n) for n in factor_dims)
        if not dims:
            raise StructuralError("an ambient needs at least one factor")
        if any(n < 0 for n in dims):
            raise StructuralError(f"negative factor dimension in {dims}")
        self.factor_dims = dims
        self.class_vars = tuple(class_vars) if class_vars else default_class_vars(len(dims))
        if len(self.class_vars) != len(dims):
            raise StructuralError("one class variable per factor is required")

    @property
    def nfactors(self):
        return len(self.factor_dims)

    @property
    def dim(self):
        return sum(self.factor_dims)

    def dominates(self, other):
        return (self.nfactors == other.nfactors
                and all(a >= b for a, b in zip(self.factor_dims, other.factor_dims)))

    def hyperplane(self, factor):
        e = [0] * self.nfactors
        e[factor] = 1
        return ChowClass({tuple(e): 1}, self)

    def hyperplanes(self):
        return [self.hyperplane(i) for i in range(self.nfactors)]

    def one(self):
        return ChowClass({(0,) * self.nfactors: 1}, self)

    def zero(self):
        return ChowClass({}, self)

    def point(self):
        return ChowClass({self.factor_dims: 1}, self)

    def with_vars(self, class_vars):
        return AmbientSpec(self.factor_dims, class_vars)

    def __eq__(self, other):
        # class variable names are cosmetic
        return isinstance(other, AmbientSpec) and other.factor_dims == self.factor_dims

    def __hash__(self):
        return hash(self.factor_dims)

    def __repr__(self):
        return "x".join(f"P^{n}" for n in self.factor_dims)


class IntPoly:
    """Integer polynomial in named variables, without truncation."""

    __slots__ = ("names", "coeffs")

    def __init__(self, coeffs, names):
        self.names = tuple(names)
        k = len(self.names)
        clean = {}
        for e, c in dict(coeffs).items():
            e = tuple(int(x) for x in e)
            if len(e) != k:
                raise StructuralError(f"exponent {e} does not match variables {self.names}")
            if c:
                clean[e] = int(c)
        self.coeffs = clean

    @classmethod
    def one(cls, names):
        return cls({(0,) * len(names): 1}, names)

    def _check(self, other):
        if not isinstance(other, IntPoly) or other.names != self.names:
            raise StructuralError("integer polynomials in different variables")

    def __add__(self, other):
        self._check(other)
        return IntPoly(_add_terms(self.coeffs, other.coeffs), self.names)

    def __sub__(self, other):
        self._check(other)
        return IntPoly(_add_terms(self.coeffs, other.coeffs, -1), self.names)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly({e: c * other for e, c in self.coeffs.items()}, self.names)
        self._check(other)
        return IntPoly(_mul_terms(self.coeffs, other.coeffs), self.names)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = IntPoly.one(self.names)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, IntPoly) and other.names == self.names
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.names, frozenset(self.coeffs.items())))

    def is_zero(self):
        return not self.coeffs

    def total_degree(self):
        return max((sum(e) for e in self.coeffs), default=-1)

    def low_degree(self):
        return min((sum(e) for e in self.coeffs), default=-1)

    def degree_part(self, d):
        return IntPoly({e: c for e, c in self.coeffs.items() if sum(e) == d}, self.names)

    def constant_term(self):
        return self.coeffs.get((0,) * len(self.names), 0)

    def truncate(self, ambient):
        return ChowClass(self.coeffs, ambient)

    def rename(self, names):
        return IntPoly(self.coeffs, names)

    def to_string(self):
        """Form accepted by the polynomial grammar, e.g. ``t + 4*t^2``."""
        return format_terms(self.coeffs, self.names, grammar=True)

    @classmethod
    def parse(cls, text, names):
        from .exactalg import PolyRing, QQ
        ring = PolyRing([list(names)], QQ)
        f = ring.parse(text)
        out = {}
        for e, c in f.terms.items():
            c = Fraction(c)
            if c.denominator != 1:
                raise StructuralError(f"non-integer coefficient {c} in {text!r}")
            out[e] = c.numerator
        return cls(out, names)

    def __str__(self):
        return format_terms(self.coeffs, self.names)

    def __repr__(self):
        return f"IntPoly({self.to_string()!r}, {self.names})"


class ChowClass:
    """A class in the truncated Chow ring of ``ambient``.

    ``coeffs`` maps exponent vectors (one entry per factor, each at most that
    factor's dimension) to nonzero integers. Terms beyond the bounds are
    dropped on construction.
    """

    __slots__ = ("ambient", "coeffs")

    def __init__(self, coeffs, ambient):
        self.ambient = ambient
        dims = ambient.factor_dims
        clean = {}
        for e, c in dict(coeffs).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(dims):
                raise StructuralError(f"exponent {e} does not fit ambient {ambient!r}")
            if any(x < 0 for x in e):
                raise StructuralError(f"negative exponent {e}")
            if any(x > n for x, n in zip(e, dims)):
                continue
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        self.coeffs = {e: c for e, c in clean.items() if c}

    def _check(self, other):
        if not isinstance(other, ChowClass):
            raise StructuralError(f"cannot combine a Chow class with {type(other).__name__}")
        if other.ambient != self.ambient:
            raise StructuralError(
                f"ambient mismatch: {self.ambient!r} vs {other.ambient!r}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ambient.one() * other
        self._check(other)
        return ChowClass(_add_terms(self.coeffs, other.coeffs), self.ambient)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ambient.one() * other
        self._check(other)
        return ChowClass(_add_terms(self.coeffs, other.coeffs, -1), self.ambient)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ChowClass({e: -c for e, c in self.coeffs.items()}, self.ambient)

    def __mul__(self, other):
        if isinstance(other, int):
            return ChowClass({e: c * other for e, c in self.coeffs.items()}, self.ambient)
        self._check(other)
        return ChowClass(_mul_terms(self.coeffs, other.coeffs, self.ambient.factor_dims),
                         self.ambient)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self.ambient.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ambient.one() * other
        return (isinstance(other, ChowClass) and other.ambient == self.ambient
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.ambient, frozenset(self.coeffs.items())))

    def is_zero(self):
        return not self.coeffs

    def codim_part(self, d):
        """Homogeneous component of codimension ``d``."""
        return ChowClass({e: c for e, c in self.coeffs.items() if sum(e) == d}, self.ambient)

    def lowest_codim(self):
        return min((sum(e) for e in self.coeffs), default=None)

    def highest_codim(self):
        return max((sum(e) for e in self.coeffs), default=None)

    def coefficient(self, exps):
        return self.coeffs.get(tuple(exps), 0)

    def degree(self):
        """Coefficient of the point class."""
        return self.coeffs.get(self.ambient.factor_dims, 0)

    def truncate(self, ambient):
        """Image in a smaller (or equal) ambient with the same factor count."""
        if ambient.nfactors != self.ambient.nfactors:
            raise StructuralError("truncation needs the same number of factors")
        return ChowClass(self.coeffs, ambient)

    def __str__(self):
        return format_terms(self.coeffs, self.ambient.class_vars)

    def __repr__(self):
        return f"ChowClass({str(self)!r}, {self.ambient!r})"

    def to_json(self):
        return {
            "ambient": list(self.ambient.factor_dims),
            "coeffs": {_key(e): c for e, c in sorted(self.coeffs.items(),
                                                      key=lambda t: _display_order(t[0]))},
        }

    @classmethod
    def from_json(cls, data):
        ambient = AmbientSpec(data["ambient"])
        return cls({_parse_key(k): int(v) for k, v in data["coeffs"].items()}, ambient)


def _key(e):
    return "(" + ",".join(str(x) for x in e) + ")"


_KEY = re.compile(r"^\(\s*(\d+(?:\s*,\s*\d+)*)?\s*,?\s*\)$")


def _parse_key(text):
    m = _KEY.match(text.strip())
    if not m:
        raise StructuralError(f"bad exponent key {text!r}")
    inner = m.group(1) or ""
    return tuple(int(x) for x in inner.split(",") if x.strip())


def chow_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


class BundleSpec:
    """Direct sum of line bundles O(d_j) on a product of projective spaces."""

    def __init__(self, degrees):
        degrees = [tuple(int(x) for x in (d if isinstance(d, (list, tuple)) else (d,)))
                   for d in degrees]
        if not degrees:
            raise StructuralError("a bundle needs at least one summand")
        if len({len(d) for d in degrees}) != 1:
            raise StructuralError(f"inconsistent degree vector lengths in {degrees}")
        self.degrees = degrees

    @property
    def rank(self):
        return len(self.degrees)

    @property
    def nfactors(self):
        return len(self.degrees[0])

    def globally_generated(self):
        return all(x >= 0 for d in self.degrees for x in d)

    def chern_factors(self, names):
        """The polynomials 1 + sum_f d_f * var_f, one per summand."""
        out = []
        k = len(names)
        for d in self.degrees:
            coeffs = {(0,) * k: 1}
            for f, x in enumerate(d):
                e = [0] * k
                e[f] = 1
                coeffs[tuple(e)] = coeffs.get(tuple(e), 0) + x
            out.append(IntPoly(coeffs, names))
        return out

    def chern_polynomial(self, names):
        """Untruncated product of (1 + sum_f d_f var_f)."""
        out = IntPoly.one(names)
        for factor in self.chern_factors(names):
            out = out * factor
        return out

    def top_chern_polynomial(self, names):
        """Product of the linear forms sum_f d_f var_f."""
        return self.chern_polynomial(names).degree_part(self.rank)

    def __eq__(self, other):
        return isinstance(other, BundleSpec) and other.degrees == self.degrees

    def __repr__(self):
        return f"BundleSpec({[list(d) for d in self.degrees]})"


def total_chern(bundle, ambient):
    """prod_j (1 + sum_f d_{j,f} H_f) in the truncated ring of ``ambient``."""
    if bundle.nfactors != ambient.nfactors:
        raise StructuralError(
            f"bundle degrees {bundle.degrees} do not fit ambient {ambient!r}")
    return bundle.chern_polynomial(ambient.class_vars).truncate(ambient)


def _as_class(x, ambient):
    if isinstance(x, ChowClass):
        return x.truncate(ambient) if x.ambient != ambient else x
    if isinstance(x, IntPoly):
        return x.truncate(ambient)
    if isinstance(x, int):
        return ambient.one() * x
    raise StructuralError(f"cannot interpret {x!r} as a class")


def inverse(c):
    """Inverse of a class whose constant term is +1 or -1."""
    ambient = c.ambient
    c0 = c.coefficient((0,) * ambient.nfactors)
    if c0 not in (1, -1):
        raise NonUnitDenominatorError(
            f"constant term {c0} is not a unit in the Chow ring")
    nil = c * c0 - 1            # c = c0 (1 + nil)
    out = ambient.one()
    power = ambient.one()
    for _ in range(ambient.dim):
        power = power * (-nil)
        if power.is_zero():
            break
        out = out + power
    return out * c0


def expand_rational(P, Q, ambient):
    """The class X with X*Q = P, i.e. the power series P/Q cut at the bounds."""
    P = _as_class(P, ambient)
    Q = _as_class(Q, ambient)
    return P * inverse(Q)


def reduced_representative(c):
    """Minimal degree integer polynomial representing ``c``."""
    return IntPoly(c.coeffs, c.ambient.class_vars)


def coefficient_extract(c, factor, power):
    """Coefficient of ``var_factor ** power``, as a class on the other factors.

    With ``power`` equal to the factor's dimension this is the pushforward
    along the projection forgetting that factor.
    """
    amb = c.ambient
    if not 0 <= factor < amb.nfactors:
        raise StructuralError(f"no factor {factor} in {amb!r}")
    if amb.nfactors == 1:
        raise StructuralError("cannot remove the only factor")
    dims = amb.factor_dims[:factor] + amb.factor_dims[factor + 1:]
    names = amb.class_vars[:factor] + amb.class_vars[factor + 1:]
    target = AmbientSpec(dims, names if len(dims) > 1 else None)
    out = {}
    for e, v in c.coeffs.items():
        if e[factor] == power:
            out[e[:factor] + e[factor + 1:]] = v
    return ChowClass(out, target)


class ZetaFunction:
    """Rational series P/Q together with the data it was built from.

    P and Q are stored untruncated so one object can be evaluated in every
    ambient dominating ``base_ambient``.
    """

    def __init__(self, P, Q, bundle, base_ambient, segre=None):
        self.P = P
        self.Q = Q
        self.bundle = bundle
        self.base_ambient = base_ambient
        self.segre = segre

    @property
    def names(self):
        return self.P.names

    def evaluate(self, ambient):
        if ambient.nfactors != self.base_ambient.nfactors:
            raise StructuralError("evaluation ambient has the wrong number of factors")
        return expand_rational(self.P, self.Q, ambient.with_vars(self.base_ambient.class_vars))

    def __eq__(self, other):
        return (isinstance(other, ZetaFunction) and other.P == self.P
                and other.Q == self.Q)

    def __str__(self):
        return f"({self.P})/({format_factored(self.bundle, self.P.names)})"

    def to_json(self):
        return {
            "P": self.P.to_string(),
            "Q": self.Q.to_string(),
            "degrees": [list(d) for d in self.bundle.degrees],
            "ambient": list(self.base_ambient.factor_dims),
        }

    @classmethod
    def from_json(cls, data):
        degrees = data["degrees"]
        bundle = BundleSpec(degrees)
        names = zeta_vars(bundle.nfactors)
        dims = data.get("ambient") or [max(1, bundle.rank)] * bundle.nfactors
        ambient = AmbientSpec(dims, names)
        return cls(IntPoly.parse(data["P"], names), IntPoly.parse(data["Q"], names),
                   bundle, ambient)

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def zeta_vars(k):
    """Variable names for zeta numerators: t for one factor, s,t for two."""
    if k == 1:
        return ("t",)
    return default_class_vars(k)


def format_factored(bundle, names):
    """Denominator written as a product of its linear factors, grouped."""
    counts = {}
    order = []
    for f in bundle.chern_factors(names):
        s = str(f)
        if s not in counts:
            order.append(s)
            counts[s] = 0
        counts[s] += 1
    if len(order) == 1 and counts[order[0]] == 1:
        return order[0]
    parts = []
    for s in order:
        parts.append(f"({s})" + (f"^{counts[s]}" if counts[s] > 1 else ""))
    return "".join(parts)
