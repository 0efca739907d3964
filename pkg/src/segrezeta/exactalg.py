"""Exact multivariate polynomials over Q or a prime field, graded by blocks.

A :class:`PolyRing` couples a :class:`VarBlocks` (one block of variables per
projective factor, plus optional auxiliary blocks) with a coefficient field.
Polynomials are immutable :class:`MultiPoly` values holding a dense exponent
tuple per term.
"""

from __future__ import annotations

import itertools
import random
import re
from fractions import Fraction
from functools import lru_cache

from sympy import isprime

from .errors import (
    InhomogeneousError,
    PolynomialParseError,
    StructuralError,
    ZeroPolynomialError,
)

DEFAULT_PRIME = 2147483647


class Field:
    """Coefficient field; ``p == 0`` means the rationals."""

    def __init__(self, p=0):
        p = int(p)
        if p and not isprime(p):
            raise StructuralError(f"modulus {p} is not prime")
        self.p = p

    @property
    def characteristic(self):
        return self.p

    def __call__(self, value):
        if self.p:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ZeroDivisionError(
                        f"denominator of {value} vanishes mod {self.p}")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        value = Fraction(value)
        return value.numerator if value.denominator == 1 else value

    def inv(self, a):
        if self.p:
            return pow(a, -1, self.p)
        return 1 / Fraction(a)

    def random_element(self, rng, nonzero=False):
        # over QQ draw integers from the same range as the default prime field
        return rng.randrange(1 if nonzero else 0, self.p or DEFAULT_PRIME)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"


QQ = Field(0)


def GF(p=DEFAULT_PRIME):
    return _gf(int(p))


@lru_cache(maxsize=None)
def _gf(p):
    return Field(p)


class VarBlocks:
    """Ordered blocks of variable names.

    The first blocks are the projective factors; auxiliary blocks (graph
    coordinates, elimination variables) are appended after them.
    """

    def __init__(self, blocks):
        self.blocks = tuple(tuple(str(v) for v in b) for b in blocks)
        if any(len(b) == 0 for b in self.blocks):
            raise StructuralError("every variable block needs at least one variable")
        self.names = tuple(v for b in self.blocks for v in b)
        if len(set(self.names)) != len(self.names):
            raise StructuralError(f"duplicate variable names in {self.blocks}")
        self.index = {v: i for i, v in enumerate(self.names)}
        self.block_index = []
        self.block_slices = []
        start = 0
        for k, b in enumerate(self.blocks):
            self.block_slices.append(range(start, start + len(b)))
            self.block_index.extend([k] * len(b))
            start += len(b)

    @property
    def nvars(self):
        return len(self.names)

    @property
    def nblocks(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, VarBlocks) and other.blocks == self.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"VarBlocks({[list(b) for b in self.blocks]})"


class PolyRing:
    def __init__(self, blocks, field=QQ):
        if not isinstance(blocks, VarBlocks):
            blocks = VarBlocks(blocks)
        self.blocks = blocks
        self.field = field

    @classmethod
    def projective(cls, dims, field=QQ, names=("x", "y", "z", "w")):
        """Ring of the product of projective spaces of the given dimensions."""
        if len(dims) > len(names):
            raise StructuralError("too many factors for the default names")
        return cls([[f"{names[k]}{i}" for i in range(n + 1)]
                    for k, n in enumerate(dims)], field)

    @property
    def nvars(self):
        return self.blocks.nvars

    @property
    def names(self):
        return self.blocks.names

    def gens(self):
        return [self.gen(v) for v in self.names]

    def gen(self, name):
        i = self.blocks.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): 1})

    def __getitem__(self, name):
        return self.gen(name)

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = self.field(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps, coeff=1):
        return MultiPoly(self, {tuple(exps): coeff})

    def __call__(self, value):
        if isinstance(value, MultiPoly):
            return value.map_to(self)
        if isinstance(value, str):
            return parse_poly(value, self)
        return self.constant(value)

    def parse(self, text):
        return parse_poly(text, self)

    def with_field(self, field):
        return PolyRing(self.blocks, field)

    def extend(self, *new_blocks):
        """Ring with extra (auxiliary) blocks appended after the existing ones."""
        return PolyRing(list(self.blocks.blocks) + [list(b) for b in new_blocks],
                        self.field)

    def fresh_name(self, stem):
        k = 0
        while f"{stem}{k}" in self.blocks.index:
            k += 1
        return f"{stem}{k}"

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.blocks == self.blocks
                and other.field == self.field)

    def __hash__(self):
        return hash((self.blocks, self.field))

    def __repr__(self):
        return f"PolyRing({[list(b) for b in self.blocks.blocks]}, {self.field!r})"


def _grevlex_sort_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


class MultiPoly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms, _normalized=False):
        self.ring = ring
        if _normalized:
            self.terms = terms
        else:
            f = ring.field
            n = ring.nvars
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise StructuralError(
                        f"exponent {e} has length {len(e)}, ring has {n} variables")
                c = f(c)
                if c:
                    clean[e] = c
            self.terms = clean
        self._hash = None

    # -- basic queries -------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def block_degrees(self, exps):
        return tuple(sum(exps[i] for i in sl) for sl in self.ring.blocks.block_slices)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return {self.ring.names[i] for i in used}

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grevlex_sort_key(t[0]),
                      reverse=True)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise StructuralError(
                    f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, _add_terms(self.terms, other.terms, 1, self.ring.field.p),
                         _normalized=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, _add_terms(self.terms, other.terms, -1, self.ring.field.p),
                         _normalized=True)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        p = self.ring.field.p
        return MultiPoly(self.ring, {e: (-c % p if p else -c) for e, c in self.terms.items()},
                         _normalized=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return MultiPoly(self.ring, out, _normalized=True)

    __rmul__ = __mul__

    def scale(self, c):
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p:
            return MultiPoly(self.ring, {e: v * c % p for e, v in self.terms.items()},
                             _normalized=True)
        return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()},
                         _normalized=True)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- conversions -----------------------------------------------------
    def map_to(self, ring):
        """Reinterpret this polynomial in ``ring`` by matching variable names.

        Variables absent from ``ring`` must not occur in the polynomial.
        Coefficients are converted into the target field.
        """
        if ring == self.ring:
            return self
        idx = []
        for i, v in enumerate(self.ring.names):
            idx.append(ring.blocks.index.get(v))
        n = ring.nvars
        out = {}
        for e, c in self.terms.items():
            t = [0] * n
            for i, a in enumerate(e):
                if a:
                    j = idx[i]
                    if j is None:
                        raise StructuralError(
                            f"variable {self.ring.names[i]} not in target ring")
                    t[j] = a
            out[tuple(t)] = c
        return MultiPoly(ring, out)

    def change_field(self, field):
        return MultiPoly(self.ring.with_field(field), dict(self.terms))

    def monic(self):
        if not self.terms:
            return self
        lead = self.sorted_terms()[0][1]
        return self.scale(self.ring.field.inv(lead))

    def substitute(self, assignments):
        return substitute(self, assignments)

    def multidegree(self):
        return multidegree_of(self)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def _add_terms(a, b, sign, p):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if p:
            v %= p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_arith(a, b, op):
    """Add, subtract or multiply two polynomials of the same ring."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def multidegree_of(f):
    """Block-degree vector shared by every term of ``f``."""
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no multidegree")
    items = iter(f.sorted_terms())
    first, _ = next(items)
    deg = f.block_degrees(first)
    for e, _ in items:
        other = f.block_degrees(e)
        if other != deg:
            r = f.ring
            raise InhomogeneousError(
                f"terms {format_poly(r.monomial(first))} (degree {deg}) and "
                f"{format_poly(r.monomial(e))} (degree {other}) differ")
    return deg


def is_multihomogeneous(f):
    try:
        multidegree_of(f)
    except (InhomogeneousError, ZeroPolynomialError):
        return False
    return True


def monomials_of_degree(ring, d, blocks=None):
    """All exponent tuples of multidegree ``d`` on the given blocks.

    ``blocks`` defaults to the first ``len(d)`` blocks of the ring; other
    variables get exponent zero.
    """
    if blocks is None:
        blocks = range(len(d))
    slices = ring.blocks.block_slices
    per_block = []
    for k, dk in zip(blocks, d):
        sl = slices[k]
        choices = []
        for combo in itertools.combinations_with_replacement(sl, dk):
            choices.append(combo)
        per_block.append(choices)
    out = []
    for pick in itertools.product(*per_block):
        e = [0] * ring.nvars
        for combo in pick:
            for i in combo:
                e[i] += 1
        out.append(tuple(e))
    return out


def random_form(ring, d, rng, blocks=None):
    """Dense form of multidegree ``d`` with uniform nonzero coefficients.

    ``rng`` is a :class:`random.Random` (or an int seed); the result is a
    pure function of the ring, ``d`` and the generator state.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    field = ring.field
    terms = {e: field.random_element(rng, nonzero=True)
             for e in monomials_of_degree(ring, d, blocks)}
    return MultiPoly(ring, terms, _normalized=True)


def substitute(f, assignments):
    """Simultaneously replace variables by polynomials.

    Replacement polynomials may live in a different ring than ``f``; the
    result lives in their ring, and untouched variables are carried over by
    name.
    """
    ring = f.ring
    for v in assignments:
        if v not in ring.blocks.index:
            raise StructuralError(f"unknown variable {v!r}")
    targets = [p.ring for p in assignments.values()]
    out_ring = targets[0] if targets else ring
    if any(r != out_ring for r in targets):
        raise StructuralError("replacement polynomials must share one ring")
    images = []
    for v in ring.names:
        if v in assignments:
            images.append(assignments[v])
        elif out_ring == ring:
            images.append(None)
        else:
            images.append(ring.gen(v).map_to(out_ring))
    if out_ring == ring and all(im is None for im in images):
        return f
    power_cache = {}

    def power(i, k):
        key = (i, k)
        if key not in power_cache:
            base = images[i] if images[i] is not None else ring.gen(ring.names[i])
            power_cache[key] = base if k == 1 else power(i, k - 1) * base
        return power_cache[key]

    result = out_ring.zero()
    for e, c in f.terms.items():
        term = out_ring.constant(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


# -- text grammar ---------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[+\-*^()]))")


def parse_poly(text, ring):
    """Parse ``3*x0^2*y1 - y0*y1`` style strings into ``ring``."""
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise PolynomialParseError(
                f"unexpected character {stripped[pos]!r}", text, pos + 1)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    if not tokens:
        raise PolynomialParseError("empty polynomial", text, 1)

    i = 0
    result = ring.zero()

    def peek():
        return tokens[i] if i < len(tokens) else (None, None, len(text) + 1)

    def factor():
        nonlocal i
        kind, val, col = peek()
        if kind == "num":
            i += 1
            value = ring.constant(Fraction(val))
        elif kind == "name":
            if val not in ring.blocks.index:
                raise PolynomialParseError(f"unknown variable {val!r}", text, col)
            i += 1
            value = ring.gen(val)
        elif val == "(":
            i += 1
            value = expr()
            k2, v2, c2 = peek()
            if v2 != ")":
                raise PolynomialParseError("expected ')'", text, c2)
            i += 1
        else:
            raise PolynomialParseError(
                f"expected a number or variable, got {val!r}" if val else
                "unexpected end of input", text, col)
        kind, val, col = peek()
        if val == "^":
            i += 1
            k2, v2, c2 = peek()
            if k2 != "num" or "/" in v2:
                raise PolynomialParseError("exponent must be a nonnegative integer",
                                           text, c2)
            i += 1
            value = value ** int(v2)
        return value

    def term():
        nonlocal i
        value = factor()
        while peek()[1] == "*":
            i += 1
            value = value * factor()
        return value

    def expr():
        nonlocal i
        sign = 1
        if peek()[1] in ("+", "-"):
            sign = -1 if peek()[1] == "-" else 1
            i += 1
        value = term().scale(sign)
        while peek()[1] in ("+", "-"):
            sign = -1 if peek()[1] == "-" else 1
            i += 1
            value = value + term().scale(sign)
        return value

    result = expr()
    if i != len(tokens):
        raise PolynomialParseError(f"unexpected {tokens[i][1]!r}", text, tokens[i][2])
    return result


def _format_coeff(c, p):
    if p and c > p // 2:
        return c - p
    return c


def format_poly(f):
    if f.is_zero():
        return "0"
    p = f.ring.field.p
    names = f.ring.names
    parts = []
    for e, c in f.sorted_terms():
        c = _format_coeff(c, p)
        mono = "*".join(names[i] if k == 1 else f"{names[i]}^{k}"
                        for i, k in enumerate(e) if k)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)
