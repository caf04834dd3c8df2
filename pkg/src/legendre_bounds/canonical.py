"""Canonical heights on Legendre fibers with certified error bars.

Normalisation: hat_h(P) = lim h([x:y:1](2^n P)) / 4^n, which equals
(3/2) * lim h(x(2^n P)) / 4^n because [x:y:1] is a degree-3 map in x.

Write phi for the doubling map on abscissas, with homogeneous forms F, G of
degree 4. Two explicit constants bound Phi = h(phi(x)) - 4 h(x):

* ``c_up``  = log 5 + h(coefficients of F and G)       (triangle inequality)
* ``c_low`` = log 8 + h([1 : coefficients of A, B, A', B'])
  where A F + B G = X^7 and A' F + B' G = Z^7          (Nullstellensatz)

and then  h_n/4^n - c_low/(3*4^n) <= hat_h_x <= h_n/4^n + c_up/(3*4^n).

For rational fibers and abscissas h(x_n) is evaluated place by place: the
archimedean part from normalised balls, and only the primes dividing the
resultant of F and G can contribute to the gcd of the unreduced iterates.
That keeps n around 20 cheap, enough for tolerances near 1e-12.
"""

from fractions import Fraction
import functools
import math

import flint

from .algebraic import _with_prec, to_fraction
from .curve import DomainError, LegendreFiber, LegendrePoint
from .heights import DEFAULT_TOL, HeightValue, weil_height


# ---------------------------------------------------------------------------
# doubling forms and their constants


def lattes_forms(E: LegendreFiber):
    """Coefficients (X^4 ... Z^4) of F and G with x(2P) = F(x,1)/G(x,1)."""
    if E.is_rational():
        lam = E.lam.to_fraction()
        a, b = lam.numerator, lam.denominator
        # (b X^2 - a Z^2)^2 and 4b X Z (X - Z)(b X - a Z)
        Fc = [b * b, 0, -2 * a * b, 0, a * a]
        Gc = [0, 4 * b * b, -4 * b * (a + b), 4 * a * b, 0]
        return Fc, Gc
    l = E.lam
    one, zero = E.field(1), E.field(0)
    Fc = [one, zero, -2 * l, zero, l * l]
    Gc = [zero, 4 * one, -4 * (1 + l), 4 * l, zero]
    return Fc, Gc


def _sylvester(Fc, Gc):
    """8x8 matrix of (A, B) -> A F + B G on degree-3 forms (columns), rows by monomial."""
    rows = [[0] * 8 for _ in range(8)]
    for shift in range(4):
        for i, c in enumerate(Fc):
            rows[i + shift][shift] = c
        for i, c in enumerate(Gc):
            rows[i + shift][4 + shift] = c
    return rows


def _solve_rational(M, rhs):
    A = flint.fmpq_mat([[flint.fmpq(int(v)) if not isinstance(v, Fraction) else flint.fmpq(v.numerator, v.denominator)
                         for v in row] for row in M])
    b = flint.fmpq_mat([[flint.fmpq(v)] for v in rhs])
    sol = A.solve(b)
    return [to_fraction(sol[i, 0]) for i in range(8)]


def _solve_field(M, rhs, field):
    """Gaussian elimination over a NumberField."""
    n = len(M)
    aug = [[field(v) for v in M[i]] + [field(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if not aug[r][col].is_zero())
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


@functools.lru_cache(maxsize=256)
def _constants_cached(E: LegendreFiber):
    Fc, Gc = lattes_forms(E)
    M = _sylvester(Fc, Gc)
    targets = ([1] + [0] * 7, [0] * 7 + [1])
    if E.is_rational():
        sols = [_solve_rational(M, t) for t in targets]
        up = weil_height(Fc + Gc).ball
        low = weil_height([1] + sols[0] + sols[1]).ball
        res = int(flint.fmpz_mat(M).det())
    else:
        sols = [_solve_field(M, t, E.field) for t in targets]
        up = weil_height([c for c in Fc + Gc]).ball
        low = weil_height([E.field(1)] + sols[0] + sols[1]).ball
        res = None
    c_up = flint.arb(5).log() + up
    c_low = flint.arb(8).log() + low
    return c_up, c_low, res


def tail_constants(E: LegendreFiber):
    """(c_up, c_low) as balls: -c_low <= h(2P)_x - 4 h(P)_x <= c_up."""
    c_up, c_low, _ = _constants_cached(E)
    return c_up, c_low


def quoted_tail_constant(E: LegendreFiber) -> flint.arb:
    """3 h(L) + log 72, the one-sided doubling constant for h([x:y:1])."""
    return 3 * weil_height([E.lam, 1]).ball + flint.arb(72).log()


# ---------------------------------------------------------------------------
# helpers


def _phi(E, x):
    """Abscissa of 2P from that of P; None for the identity."""
    if x is None:
        return None
    lam = E.lam
    den = 4 * x * (x - 1) * (x - lam)
    if den == 0:
        return None
    return (x * x - lam) ** 2 / den


def naive_height(P: LegendrePoint, tol=DEFAULT_TOL) -> HeightValue:
    """h([x : y : 1]) computed as h([x^2 : y^2 : 1]) / 2."""
    if P.is_identity:
        raise DomainError("the identity is not affine")
    hv = weil_height([P.x * P.x, P.y_squared(), P.fiber.field(1)], tol)
    return HeightValue(hv.ball / 2)


def x_height(P: LegendrePoint, tol=DEFAULT_TOL) -> HeightValue:
    if P.is_identity:
        raise DomainError("the identity is not affine")
    return weil_height([P.x, P.fiber.field(1)], tol)


def _rational_iterate_height(E, x0: Fraction, n: int, prec: int) -> flint.arb:
    """h(x_n) for x_0 rational on a rational fiber, place by place."""
    Fc, Gc = lattes_forms(E)
    _, _, res = _constants_cached(E)
    X0, Z0 = x0.numerator, x0.denominator

    def form(c, u, v):
        return c[0] * u**4 + c[1] * u**3 * v + c[2] * u**2 * v**2 + c[3] * u * v**3 + c[4] * v**4

    with _with_prec(prec):
        M = max(abs(X0), abs(Z0))
        u, v = flint.arb(X0) / M, flint.arb(Z0) / M
        L = flint.arb(M).log()
        for _ in range(n):
            fu, gu = form(Fc, u, v), form(Gc, u, v)
            m = abs(fu).max(abs(gu))
            if not m > 0:
                raise ArithmeticError("lost precision in the archimedean iteration")
            L = 4 * L + m.log()
            u, v = fu / m, gu / m
        total = L
        for p, _ in flint.fmpz(abs(res)).factor():
            p = int(p)
            vres = _vp(res, p)
            K = (n + 1) * vres + 2
            mod = p**K
            xh, zh = X0 % mod, Z0 % mod
            acc = 0
            for _ in range(n):
                fx, gz = form(Fc, xh, zh) % mod, form(Gc, xh, zh) % mod
                e = min(_vp_mod(fx, p, K), _vp_mod(gz, p, K))
                if e > vres:
                    raise ArithmeticError("p-adic valuation exceeded the resultant bound")
                acc = 4 * acc + e
                K -= e
                mod = p**K
                xh, zh = (fx // p**e) % mod, (gz // p**e) % mod
            total -= acc * flint.arb(p).log()
        return total


def _vp(n, p):
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_mod(n, p, K):
    if n == 0:
        return K
    return min(_vp(n, p), K)


def _screen_torsion(P: LegendrePoint, c_low: flint.arb, max_steps=64):
    """Exact doubling orbit of x(P): 'torsion', or ('free', k, h_k) with a proof.

    A torsion point has h(x(2^k P)) <= c_low / 3 for all k, so exceeding that
    certifies infinite order; below it the orbit is finite and must cycle.
    """
    E = P.fiber
    seen = set()
    x = P.x
    limit = float((c_low / 3).upper())
    for k in range(max_steps):
        if x is None:
            return "torsion", k, None
        key = x
        if key in seen:
            return "torsion", k, None
        seen.add(key)
        h = weil_height([x, E.field(1)], 1e-6)
        if h.lower > limit:
            return "free", k, x
        x = _phi(E, x)
    raise ArithmeticError("doubling orbit neither cycled nor escaped")


def canonical_height(P: LegendrePoint, tol: float = DEFAULT_TOL) -> HeightValue:
    """hat_h(P) as a certified ball of radius at most ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if P.is_identity:
        return HeightValue(flint.arb(0), Fraction(1))
    E = P.fiber
    c_up, c_low = tail_constants(E)
    kind, _, _ = _screen_torsion(P, c_low)
    if kind == "torsion":
        return HeightValue(flint.arb(0), Fraction(1))
    width = float((c_up + c_low).upper()) / 2  # (3/2) * (c_up + c_low) / 3
    n = max(1, math.ceil(math.log(max(width, 1e-300) / (tol / 2), 4)))
    rational = E.is_rational()
    x0 = P.x
    for attempt in range(4):
        prec = 80 + 4 * n + int(-math.log2(tol))
        with _with_prec(prec):
            if rational:
                hn = _rational_iterate_height(E, x0.to_fraction(), n, prec)
            else:
                hn = _field_iterate_height(E, x0, n, tol)
            scale = flint.arb(4) ** n
            lo = (hn - c_low / 3) / scale
            hi = (hn + c_up / 3) / scale
            lo_b, hi_b = lo.lower(), hi.upper()
            mid = (lo_b + hi_b) / 2
            rad = (hi_b - lo_b) / 2
            ball = flint.arb(mid, rad) * flint.arb(3) / 2
            if float(ball.rad()) <= tol:
                return HeightValue(ball)
        n += 1
        if not rational:
            break
    raise ArithmeticError(
        "tolerance %g not reached; non-torsion points over number fields of degree > 1 "
        "are iterated exactly and cannot go deep enough" % tol)


def _field_iterate_height(E, x, n, tol, max_digits=20000):
    for _ in range(n):
        x = _phi(E, x)
        if x is None:
            raise ArithmeticError("unexpected torsion")
        if sum(len(str(c)) for c in x.poly.coeffs()) > max_digits:
            raise ArithmeticError("exact iteration too large for the requested tolerance")
    return weil_height([x, E.field(1)], tol / 1e3).ball


def upper_bound_check(P: LegendrePoint, tol: float = 1e-9) -> bool:
    """hat_h(P) <= h([x:y:1]) + 3 max{1, h(L)}, decided with certified balls."""
    if P.is_identity:
        raise DomainError("upper bound check is not applicable to the identity")
    rhs = naive_height(P, tol).ball + 3 * weil_height([P.fiber.lam, 1], tol).ball.max(flint.arb(1))
    lhs = canonical_height(P, tol).ball
    if lhs.upper() <= rhs.lower():
        return True
    if lhs.lower() > rhs.upper():
        return False
    return upper_bound_check(P, tol / 1000) if tol > 1e-30 else False
