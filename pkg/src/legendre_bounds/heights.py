"""Absolute logarithmic Weil heights with certified error bounds.

For a point ``[x_0 : ... : x_n]`` with coordinates in a number field F of
degree d,

    h = (1/d) * ( sum over complex embeddings s of log max_i |s(x_i)|
                  - log N(x_0, ..., x_n) )

where ``N(...)`` is the norm of the fractional ideal generated by the
coordinates. That norm is the rational content of the norm polynomial
``N_{F/Q}(x_0 + x_1 T + ... + x_n T^n)`` (Gauss's lemma over Dedekind
domains), so no ring of integers is ever needed.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import math

import flint

from .algebraic import (
    AlgebraicNumber,
    FPoly,
    NFElement,
    NumberField,
    _with_prec,
    common_field,
    primitive_integer_poly,
    qpoly,
    to_fraction,
)
from .logbound import LogExpr

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class HeightValue:
    """A certified enclosure ``[value - error, value + error]`` of a height.

    ``exact`` is set when the height is known in closed form as ``ln(exact)``.
    """

    ball: flint.arb
    exact: Fraction = None

    @property
    def value(self) -> float:
        return float(self.ball.mid())

    @property
    def error(self) -> float:
        return float(self.ball.rad())

    @property
    def lower(self) -> float:
        return float(self.ball.lower())

    @property
    def upper(self) -> float:
        return float(self.ball.upper())

    def expr(self):
        return LogExpr.ln(self.exact) if self.exact is not None else None

    def __add__(self, other):
        if isinstance(other, HeightValue):
            ex = self.exact * other.exact if self.exact is not None and other.exact is not None else None
            return HeightValue(self.ball + other.ball, ex)
        return HeightValue(self.ball + other)

    def __float__(self):
        return self.value

    def __repr__(self):
        return "HeightValue(%.15g +/- %.2g)" % (self.value, self.error)


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of a product of projective spaces.

    ``coords`` is a flat tuple; ``ambient_dims`` gives the dimension of each
    factor (a plain projective point has one factor of dimension len-1).
    """

    coords: tuple
    ambient_dims: tuple = dc_field(default=None)

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        dims = self.ambient_dims or (len(coords) - 1,)
        object.__setattr__(self, "ambient_dims", tuple(dims))
        if sum(d + 1 for d in dims) != len(coords):
            raise ValueError("ambient dimensions do not match the coordinate count")
        for block in self.blocks():
            if all(_is_zero(c) for c in block):
                raise ValueError("invalid point: a projective factor has all coordinates zero")

    def blocks(self):
        out, i = [], 0
        for d in self.ambient_dims:
            out.append(self.coords[i : i + d + 1])
            i += d + 1
        return out

    def scaled(self, factor):
        return ProjectivePoint(tuple(c * factor for c in self.coords), self.ambient_dims)


def _is_zero(c):
    if isinstance(c, (NFElement, AlgebraicNumber)):
        return c.is_zero()
    return c == 0


def _to_field(coords):
    """Move a coordinate list into one NumberField."""
    nf = [c for c in coords if isinstance(c, NFElement)]
    alg = [c for c in coords if isinstance(c, AlgebraicNumber)]
    if nf and alg:
        raise TypeError("mixing NFElement and AlgebraicNumber coordinates")
    if alg:
        field, _, elems = common_field([c if isinstance(c, AlgebraicNumber) else AlgebraicNumber.from_rational(c)
                                        for c in coords])
        return field, elems
    field = nf[0].field if nf else NumberField.rationals()
    for c in nf:
        if c.field != field:
            raise TypeError("coordinates in different number fields")
    return field, [c if isinstance(c, NFElement) else field(Fraction(c)) for c in coords]


def _rational_block_height(block):
    fr = [Fraction(c) for c in block]
    den = 1
    for q in fr:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [int(q * den) for q in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    top = max(abs(v) // g for v in ints)
    return Fraction(top)


def _content(poly: flint.fmpq_poly) -> Fraction:
    num, den = 0, 1
    for c in poly.coeffs():
        c = to_fraction(c)
        if c:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
    return Fraction(num, den)


def _field_block_height(field: NumberField, block, tol):
    d = field.degree
    norm_form = FPoly(field, block).norm()
    log_content = flint.arb(_content(norm_form).numerator).log() - flint.arb(_content(norm_form).denominator).log()
    prec = 64
    while True:
        with _with_prec(prec):
            total = flint.arb(0)
            ok = True
            for root in field.embeddings(prec):
                best = None
                for c in block:
                    a = abs(c.embed(root))
                    best = a if best is None else best.max(a)
                if not best > 0:
                    ok = False
                    break
                total += best.log()
            if ok:
                val = (total - log_content) / d
                if float(val.rad()) <= tol:
                    return val
        prec *= 2
        if prec > 1 << 16:
            raise ArithmeticError("height tolerance not reached")


def weil_height(p, tol: float = DEFAULT_TOL) -> HeightValue:
    """Absolute logarithmic Weil height; multiprojective points use the Segre sum."""
    if not isinstance(p, ProjectivePoint):
        p = ProjectivePoint(tuple(p))
    if all(not isinstance(c, (NFElement, AlgebraicNumber)) or
           (isinstance(c, NFElement) and c.field.degree == 1) for c in p.coords):
        coords = [c.to_fraction() if isinstance(c, NFElement) else Fraction(c) for c in p.coords]
        exact = Fraction(1)
        for block in ProjectivePoint(tuple(coords), p.ambient_dims).blocks():
            exact *= _rational_block_height(block)
        with _with_prec(max(64, int(-math.log2(tol)) + 20)):
            ball = flint.arb(exact.numerator).log() - flint.arb(exact.denominator).log()
        return HeightValue(ball, exact)
    field, coords = _to_field(p.coords)
    ball = flint.arb(0)
    i = 0
    blocks = []
    for dim in p.ambient_dims:
        blocks.append(coords[i : i + dim + 1])
        i += dim + 1
    per = tol / len(blocks)
    for block in blocks:
        ball += _field_block_height(field, block, per)
    return HeightValue(ball)


def height_of_algebraic(a, tol: float = DEFAULT_TOL) -> HeightValue:
    """h(a) from the Mahler measure of its minimal polynomial.

    Accepts an :class:`AlgebraicNumber` or a polynomial (coefficient list,
    low degree first), which must be irreducible over Q.
    """
    if isinstance(a, AlgebraicNumber):
        poly = a.min_poly
    else:
        poly = primitive_integer_poly(qpoly(a))
        _, factors = poly.factor()
        if len(factors) != 1 or factors[0][1] != 1:
            raise ValueError("invalid input: polynomial is reducible")
    d = poly.degree()
    lead = int(poly.coeffs()[-1])
    if d == 1:
        c0 = int(poly.coeffs()[0])
        exact = Fraction(max(abs(c0), abs(lead)))
        return HeightValue(flint.arb(exact.numerator).log(), exact)
    prec = 64
    while True:
        with _with_prec(prec):
            total = flint.arb(lead).log()
            for r in poly.complex_roots():
                total += abs(r[0]).max(flint.arb(1)).log()
            val = total / d
            if float(val.rad()) <= tol:
                return HeightValue(val)
        prec *= 2


def polynomial_height(P, tol: float = DEFAULT_TOL) -> HeightValue:
    """Height of the coefficient vector of a nonzero polynomial.

    ``P`` may be a dict (monomial -> coefficient), a coefficient sequence,
    or a flint polynomial (uni- or multivariate).
    """
    if isinstance(P, dict):
        coeffs = list(P.values())
    elif isinstance(P, (list, tuple)):
        coeffs = list(P)
    elif hasattr(P, "coeffs"):
        coeffs = [to_fraction(c) if isinstance(c, (flint.fmpq, flint.fmpz)) else c for c in P.coeffs()]
    else:
        raise TypeError("unsupported polynomial type %r" % type(P))
    coeffs = [c for c in coeffs if not _is_zero(c)]
    if not coeffs:
        raise ValueError("invalid: zero polynomial")
    return weil_height(ProjectivePoint(tuple(coeffs)), tol)
