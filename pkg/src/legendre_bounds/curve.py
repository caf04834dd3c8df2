"""Points on fibers E_L : y^2 = x(x-1)(x-L) of the Legendre family.

Coordinates live in an explicit number field F containing L. The ordinate
may need a quadratic extension, so an affine point is stored as
``(x, w, s)`` with ``y = w * sqrt(s)`` and x, w, s in F. The chord-tangent law
keeps the same ``s``:

    slope = sqrt(s) * mu,  x3 = s*mu^2 + 1 + L - x1 - x2,
    w3 = -(w1 + mu*(x3 - x1)).

``s`` is normalised to 1 whenever it is a square in F (for F = Q: to a
squarefree integer), so equal points have equal representations.
"""

from fractions import Fraction
import flint

from .algebraic import AlgebraicNumber, NFElement, NumberField, qpoly
from . import divpoly


class DomainError(ValueError):
    pass


def _squarefree_split(n: int):
    """n = r^2 * m with m squarefree (sign kept in m)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = 1
    m = 1
    for p, e in (flint.fmpz(n).factor() if n > 1 else []):
        p, e = int(p), int(e)
        r *= p ** (e // 2)
        m *= p ** (e % 2)
    return r, sign * m


class LegendreFiber:
    """The fiber E_L. ``lam`` may be a rational, an NFElement or an AlgebraicNumber."""

    def __init__(self, lam):
        if isinstance(lam, AlgebraicNumber):
            if lam.is_rational():
                lam = lam.to_fraction()
            else:
                field = NumberField(lam.min_poly)
                lam = field.gen()
        if isinstance(lam, NFElement):
            if lam.field.degree == 1:
                lam = lam.to_fraction()
            else:
                self.field = lam.field
                self.lam = lam
        if not isinstance(lam, NFElement):
            self.field = NumberField.rationals()
            self.lam = self.field(Fraction(lam))
        if self.lam == 0 or self.lam == 1:
            raise DomainError("lambda must avoid 0 and 1")

    def __eq__(self, other):
        return isinstance(other, LegendreFiber) and self.field == other.field and self.lam == other.lam

    def __hash__(self):
        return hash((self.field, self.lam))

    def __repr__(self):
        return "LegendreFiber(%r)" % (self.lam,)

    def is_rational(self):
        return self.field.degree == 1

    def f(self, x):
        x = self.field(x)
        return x * (x - 1) * (x - self.lam)

    # point construction ------------------------------------------------------
    def identity(self):
        return LegendrePoint(self, None, None, None)

    def point(self, x, y=None, w=None, s=1):
        """Affine point; give ``y`` (in F) or ``w`` and ``s`` with y = w*sqrt(s)."""
        x = self.field(x)
        if y is not None:
            w, s = self.field(y), self.field(1)
        else:
            w, s = self.field(w), self.field(s)
        if s.is_zero():
            raise DomainError("twist parameter s must be nonzero")
        if w * w * s != self.f(x):
            raise DomainError("point is not on the curve")
        return LegendrePoint(self, x, w, s)

    def lift_x(self, x):
        """A point with abscissa x (ordinate in F or in F(sqrt(f(x))))."""
        x = self.field(x)
        fx = self.f(x)
        if fx.is_zero():
            return LegendrePoint(self, x, self.field(0), self.field(1))
        r = fx.sqrt()
        if r is not None:
            return LegendrePoint(self, x, r, self.field(1))
        return LegendrePoint(self, x, self.field(1), fx)

    def two_torsion(self):
        return [self.point(0, 0), self.point(1, 0), self.point(self.lam, 0)]


class LegendrePoint:
    __slots__ = ("fiber", "x", "w", "s")

    def __init__(self, fiber, x, w, s):
        self.fiber = fiber
        if x is None:
            self.x = self.w = self.s = None
            return
        field = fiber.field
        if w.is_zero():
            s = field(1)
        elif field.degree == 1:
            q = s.to_fraction()
            r, m = _squarefree_split(q.numerator * q.denominator)
            # s = m * (r / den)^2
            w = w * field(Fraction(r, q.denominator))
            s = field(m)
        elif s != 1:
            root = s.sqrt()
            if root is not None:
                w, s = w * root, field(1)
        self.x, self.w, self.s = x, w, s

    @property
    def is_identity(self):
        return self.x is None

    def y(self):
        """The ordinate when it lies in F, otherwise None."""
        if self.is_identity:
            raise DomainError("identity has no affine ordinate")
        return self.w if self.s == 1 else None

    def y_squared(self):
        return self.w * self.w * self.s

    def projective(self):
        """[X : Y : Z] as a tuple, with Y reported as (w, s)."""
        if self.is_identity:
            return (0, 1, 0)
        return (self.x, (self.w, self.s), 1)

    def __eq__(self, other):
        if not isinstance(other, LegendrePoint) or other.fiber != self.fiber:
            return False
        if self.is_identity or other.is_identity:
            return self.is_identity and other.is_identity
        return self.x == other.x and self.w == other.w and (self.w.is_zero() or self.s == other.s)

    def __hash__(self):
        return hash((self.fiber, None if self.is_identity else (self.x, self.y_squared())))

    def __neg__(self):
        if self.is_identity:
            return self
        return LegendrePoint(self.fiber, self.x, -self.w, self.s)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __rmul__(self, n):
        return multiply(n, self)

    def __repr__(self):
        if self.is_identity:
            return "O"
        if self.s == 1:
            return "(%r, %r)" % (self.x, self.w)
        return "(%r, %r*sqrt(%r))" % (self.x, self.w, self.s)


def add(P: LegendrePoint, Q: LegendrePoint) -> LegendrePoint:
    """Chord-tangent sum on a common fiber."""
    if P.fiber != Q.fiber:
        raise DomainError("points lie on different fibers")
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    E = P.fiber
    F = E.field
    if P.w.is_zero() and not Q.w.is_zero():
        s = Q.s
    else:
        s = P.s
    if not Q.w.is_zero() and not P.w.is_zero() and P.s != Q.s:
        raise DomainError("points use different quadratic twists of the coordinate field")
    if P.x == Q.x:
        if P.w == -Q.w:
            return E.identity()
        # doubling, w != 0
        mu = (3 * P.x * P.x - 2 * (1 + E.lam) * P.x + E.lam) / (2 * P.w * s)
    else:
        mu = (Q.w - P.w) / (Q.x - P.x)
    x3 = s * mu * mu + 1 + E.lam - P.x - Q.x
    w3 = -(P.w + mu * (x3 - P.x))
    return LegendrePoint(E, x3, w3, s if not w3.is_zero() else F(1))


def multiply(n: int, P: LegendrePoint) -> LegendrePoint:
    """[n]P by double-and-add."""
    n = int(n)
    if n < 0:
        return multiply(-n, -P)
    result = P.fiber.identity()
    base = P
    while n:
        if n & 1:
            result = add(result, base)
        n >>= 1
        if n:
            base = add(base, base)
    return result


def double(P):
    return add(P, P)


def torsion_order(P: LegendrePoint, maxN: int):
    """Exact order of P when it is at most ``maxN``, otherwise None."""
    if maxN < 1:
        raise ValueError("maxN must be >= 1")
    Q = P
    for k in range(1, maxN + 1):
        if Q.is_identity:
            return k
        Q = add(Q, P)
    return None


def _prime_divisors(n):
    return [int(p) for p, _ in flint.fmpz(n).factor()] if n > 1 else []


def killed_by(P: LegendrePoint, n: int) -> bool:
    """[n]P = O decided from the division polynomials alone."""
    if P.is_identity:
        return True
    if n == 1:
        return False
    return divpoly.torsion_polynomial(n).evaluate(P.x, P.fiber.lam) == 0


def order_by_division_polynomials(P: LegendrePoint, n: int) -> bool:
    """True iff P has exact order n, using only division-polynomial evaluations."""
    if P.is_identity:
        return n == 1
    if n == 1 or not killed_by(P, n):
        return False
    return all(not killed_by(P, n // p) for p in _prime_divisors(n))


def order_by_multiplication(P: LegendrePoint, n: int) -> bool:
    if not multiply(n, P).is_identity:
        return False
    return all(not multiply(n // p, P).is_identity for p in _prime_divisors(n))


def certify_order(P: LegendrePoint, n: int) -> dict:
    """Both order certificates; ``agree`` flags whether they coincide."""
    by_mult = order_by_multiplication(P, n)
    by_div = order_by_division_polynomials(P, n)
    return {"order": n, "multiply": by_mult, "division_polynomial": by_div, "agree": by_mult == by_div}


# ---------------------------------------------------------------------------
# j-invariant


def j_invariant(lam):
    """256 (L^2 - L + 1)^3 / (L^2 (L - 1)^2) in the field of ``lam``."""
    E = LegendreFiber(lam)
    l = E.lam
    val = 256 * (l * l - l + 1) ** 3 / (l * l * (l - 1) ** 2)
    return val.to_fraction() if E.is_rational() else val


def check_j_sextic(lam) -> bool:
    """L^6 = j L^2 (L-1)^2 / 256 + 3L^5 - 6L^4 + 7L^3 - 6L^2 + 3L - 1, exactly."""
    E = LegendreFiber(lam)
    l = E.lam
    j = E.field(j_invariant(lam)) if E.is_rational() else j_invariant(lam)
    rhs = j * l**2 * (l - 1) ** 2 / 256 + 3 * l**5 - 6 * l**4 + 7 * l**3 - 6 * l**2 + 3 * l - 1
    return l**6 == rhs


def count_points_killed_by(a: int, lam) -> int:
    """#E_L[a] over an algebraic closure, counted from the abscissa polynomial.

    Each root x of the a-torsion abscissa polynomial contributes two points
    unless f(x) = 0, which contributes one; the identity adds one more.
    """
    if a < 1:
        raise ValueError("a must be >= 1")
    E = LegendreFiber(lam)
    if a == 1:
        return 1
    D = divpoly.torsion_polynomial(a)
    if not E.is_rational():
        raise NotImplementedError("counting is implemented over rational fibers")
    lv = E.lam.to_fraction()
    coeffs = [Fraction(0)] * (D.degree_x() + 1)
    for (i, j), c in D.terms.items():
        coeffs[i] += c * lv**j
    poly = qpoly(coeffs)
    sq = poly / poly.gcd(poly.derivative())
    two_tors = sum(1 for r in (0, 1, lv) if sq(flint.fmpq(r.numerator, r.denominator)) == 0)
    return 1 + 2 * (sq.degree() - two_tors) + two_tors
