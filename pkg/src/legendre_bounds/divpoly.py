"""Division polynomials of y^2 = x(x-1)(x-L) as polynomials in Z[X, L].

``A_n / B_n`` is the abscissa of [n]P. They come from the usual psi
recurrence, written with F = 4x(x-1)(x-L) = (2y)^2 so that every psi stays a
polynomial in x and L:

    psi_n = tpsi_n          (n odd)
    psi_n = 2y * tpsi_n     (n even)
"""

from fractions import Fraction
import threading

import flint

from .algebraic import NFElement

CTX = flint.fmpz_mpoly_ctx.get(("X", "L"), "lex")
X, L = CTX.gens()
_ZERO = CTX.from_dict({})
_ONE = CTX.from_dict({(0, 0): 1})

_a2, _a4 = -(1 + L), L
_b2, _b4, _b6, _b8 = 4 * _a2, 2 * _a4, _ZERO, -(_a4**2)
FX = 4 * X * (X - 1) * (X - L)


class BivariatePolynomial:
    """Immutable element of Q[X, L] with integer or rational coefficients."""

    __slots__ = ("poly", "denom")

    def __init__(self, poly, denom=1):
        self.poly = poly
        self.denom = int(denom)

    @classmethod
    def from_terms(cls, terms):
        den = 1
        fr = {k: Fraction(v) for k, v in terms.items() if v}
        for v in fr.values():
            den = den * v.denominator // _gcd(den, v.denominator)
        return cls(CTX.from_dict({k: int(v * den) for k, v in fr.items()}), den)

    @property
    def terms(self):
        """Map (deg_X, deg_L) -> Fraction with no zero entries."""
        return {(int(m[0]), int(m[1])): Fraction(int(c), self.denom) for m, c in zip(self.poly.monoms(), self.poly.coeffs())}

    def degree_x(self):
        return max((m[0] for m in self.poly.monoms()), default=-1)

    def degree_lambda(self):
        return max((m[1] for m in self.poly.monoms()), default=-1)

    def leading_coefficient_x(self):
        """Coefficient of the top X power, itself a polynomial in L (as terms dict)."""
        d = self.degree_x()
        return {m[1]: c for m, c in self.terms.items() if m[0] == d}

    def is_monic_x(self):
        return self.leading_coefficient_x() == {0: Fraction(1)}

    def evaluate(self, x, lam):
        """Value at (x, lam); both Fractions/ints or elements of one NumberField."""
        if isinstance(x, NFElement) or isinstance(lam, NFElement):
            field = x.field if isinstance(x, NFElement) else lam.field
            x, lam = field(x), field(lam)
            zero = field(0)
        else:
            x, lam = Fraction(x), Fraction(lam)
            zero = Fraction(0)
        dx, dl = max(self.degree_x(), 0), max(self.degree_lambda(), 0)
        xp = [zero + 1]
        for _ in range(dx):
            xp.append(xp[-1] * x)
        lp = [zero + 1]
        for _ in range(dl):
            lp.append(lp[-1] * lam)
        total = zero
        for (i, j), c in zip(self.poly.monoms(), self.poly.coeffs()):
            total = total + xp[i] * lp[j] * int(c)
        return total / self.denom if self.denom != 1 else total

    def coefficients_in_x(self):
        """List (low to high) of polynomials in L, as {deg_L: Fraction} dicts."""
        out = [dict() for _ in range(self.degree_x() + 1)]
        for (i, j), c in self.terms.items():
            out[i][j] = c
        return out

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.poly * other.denom == other.poly * self.denom

    def __hash__(self):
        return hash(str(self.poly))

    def __str__(self):
        s = str(self.poly).replace("L", "Λ")
        return s if self.denom == 1 else "(%s)/%d" % (s, self.denom)

    __repr__ = __str__


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class _DivisionTable:
    """Memoised tpsi_n table; guarded by a lock so threads can share it."""

    def __init__(self):
        self._lock = threading.Lock()
        self._psi = {
            0: _ZERO,
            1: _ONE,
            2: _ONE,
            3: 3 * X**4 + _b2 * X**3 + 3 * _b4 * X**2 + 3 * _b6 * X + _b8,
            4: 2 * X**6 + _b2 * X**5 + 5 * _b4 * X**4 + 10 * _b6 * X**3 + 10 * _b8 * X**2
            + (_b2 * _b8 - _b4 * _b6) * X + (_b4 * _b8 - _b6**2),
        }
        self._ab = {}

    def psi(self, n):
        with self._lock:
            return self._psi_locked(n)

    def _psi_locked(self, n):
        if n in self._psi:
            return self._psi[n]
        # iterative fill so deep n does not recurse
        top = max(self._psi)
        for k in range(top + 1, n + 1):
            self._psi[k] = self._step(k)
        return self._psi[n]

    def _step(self, n):
        p = self._psi
        m = n // 2
        if n % 2:
            if m % 2 == 0:
                return FX**2 * p[m + 2] * p[m] ** 3 - p[m - 1] * p[m + 1] ** 3
            return p[m + 2] * p[m] ** 3 - FX**2 * p[m - 1] * p[m + 1] ** 3
        return p[m] * (p[m + 2] * p[m - 1] ** 2 - p[m - 2] * p[m + 1] ** 2)

    def ab(self, n):
        with self._lock:
            if n not in self._ab:
                psi = self._psi_locked
                if n % 2:
                    B = psi(n) ** 2
                    P = FX * psi(n - 1) * psi(n + 1)
                else:
                    B = FX * psi(n) ** 2
                    P = psi(n - 1) * psi(n + 1)
                A = X * B - P
                self._ab[n] = (A, B)
            return self._ab[n]


_TABLE = _DivisionTable()


def psi_tilde(n: int) -> BivariatePolynomial:
    """tpsi_n (psi_n with the factor 2y removed when n is even)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return BivariatePolynomial(_TABLE.psi(n))


def division_polynomials(n: int):
    """(A_n, B_n) with x([n]P) = A_n(x, L) / B_n(x, L)."""
    if n < 1:
        raise ValueError("division polynomials need n >= 1")
    A, B = _TABLE.ab(n)
    return BivariatePolynomial(A), BivariatePolynomial(B)


def check_functional_equation(n: int) -> bool:
    """L^{n^2} A_n(X/L, 1/L) = A_n and L^{n^2-1} B_n(X/L, 1/L) = B_n, plus deg_L <= n^2."""
    A, B = division_polynomials(n)
    for poly, top in ((A, n * n), (B, n * n - 1)):
        terms = poly.terms
        for (i, j), c in terms.items():
            k = top - i - j
            if k < 0 or terms.get((i, k)) != c:
                return False
        if poly.degree_lambda() > n * n:
            return False
    return True


def torsion_polynomial(n: int) -> BivariatePolynomial:
    """Polynomial in X whose roots are the abscissas of nonzero points killed by n.

    For odd n this is tpsi_n; for even n it is x(x-1)(x-L) * tpsi_n. For
    n = 1 it is the constant 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return BivariatePolynomial(_ONE)
    psi = _TABLE.psi(n)
    if n % 2:
        return BivariatePolynomial(psi)
    return BivariatePolynomial(X * (X - 1) * (X - L) * psi)


def _mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


_PRIM = {}
_PRIM_LOCK = threading.Lock()


def primitive_division_polynomial(n: int) -> BivariatePolynomial:
    """Abscissa polynomial of the points of exact order n (product of D_d^mu(n/d))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with _PRIM_LOCK:
        if n in _PRIM:
            return _PRIM[n]
    num, den = _ONE, _ONE
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        if mu == 1:
            num = num * torsion_polynomial(d).poly
        elif mu == -1:
            den = den * torsion_polynomial(d).poly
    q, r = divmod(num, den)
    if r != 0:
        raise ArithmeticError("primitive division polynomial is not exact")
    out = BivariatePolynomial(q)
    with _PRIM_LOCK:
        _PRIM[n] = out
    return out
