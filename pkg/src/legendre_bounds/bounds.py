"""Explicit bounds and inequality chains, evaluated exactly in log space.

Inputs that are heights or degrees are taken as exact rationals (floats are
converted exactly). Results that can be astronomically large are
:class:`LogBound` values; small auxiliary quantities are plain numbers.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

from .constants import ConstantsTable, load_constants
from .logbound import LogBound, LogExpr, lb_max


class PreconditionError(ValueError):
    pass


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _qmax(*xs) -> Fraction:
    return max(_q(x) for x in xs)


def bound_record(name, value, inputs):
    """Serializable report record for a bound."""
    rec = {"name": name, "inputs": {k: str(v) for k, v in inputs.items()}}
    if isinstance(value, LogBound):
        rec.update({"log_value": None if value.is_zero else str(value.log_value),
                    "log10_display": None if value.is_zero else "%.6g" % value.log10(),
                    "display": value.display()})
    else:
        rec.update({"value": str(value), "display": "%.6g" % float(value)})
    return rec


# ---------------------------------------------------------------------------
# curves in the Legendre surface

MM_FLOOR = LogBound.exp(LogExpr.power(2, Fraction(18, 5)))


def mm_curve_bound(C, D2: int) -> LogBound:
    """max{(3 C D2)^4, exp(2^(18/5))}."""
    if D2 < 1:
        raise PreconditionError("D2 must be >= 1")
    C = LogBound.coerce(C)
    return lb_max((C * (3 * D2)) ** 4, MM_FLOOR)


GAMMA1 = 12698
GAMMA2 = Fraction(22 * 10**9)
GAMMA3 = 26471


@dataclass(frozen=True)
class MMCurveParams:
    D1: int
    D2: int
    H: Fraction = Fraction(0)
    h_E0: Fraction = Fraction(0)
    C: LogBound = None
    h0: Fraction = None

    def __post_init__(self):
        if self.D1 < 1 or self.D2 < 1:
            raise PreconditionError("D1 and D2 must be >= 1")
        object.__setattr__(self, "H", _q(self.H))
        object.__setattr__(self, "h_E0", _q(self.h_E0))
        if self.H < 0:
            raise PreconditionError("H must be >= 0")
        if self.h0 is not None and _q(self.h0) <= 0:
            raise PreconditionError("h0 must be positive")


def ml_bounds(params: MMCurveParams, isogeny_bound=None) -> dict:
    """Isogeny degree and order bounds for curves meeting a rational orbit.

    ``isogeny_bound(params) -> LogBound`` replaces the built-in deg_phi
    formula, for callers holding a different isogeny estimate.
    """
    m = _qmax(params.D1, params.D2, params.H)
    if isogeny_bound is not None:
        deg_phi = LogBound.coerce(isogeny_bound(params))
    else:
        deg_phi = LogBound.from_rational(_qmax(2, params.h_E0)) ** GAMMA1 * LogBound.from_rational(m) ** 6
    N = (LogBound.exp(GAMMA2) * LogBound.from_rational(_qmax(1, params.h_E0)) ** GAMMA3
         * LogBound.from_rational(m) ** 9)
    return {"deg_phi": deg_phi, "N": N}


def solve_log_inequality(A1, A2, A3) -> Fraction:
    """B = max{2 A1/A3, 4 A2^2/A3^2}: A3 x <= A1 + A2 ln x with x >= 1 forces x <= B."""
    A1, A2, A3 = _q(A1), _q(A2), _q(A3)
    if min(A1, A2, A3) <= 0:
        raise PreconditionError("A1, A2, A3 must be positive")
    return max(2 * A1 / A3, 4 * A2 * A2 / (A3 * A3))


def fiber_point_height_bound(D1, D2, H, h_lambda) -> dict:
    """20((D1+D2) max{1,h_lambda} + H), plus the finer 3h(Q) + D2 h(F) + 18 D2."""
    if D1 < 1 or D2 < 1 or H < 0 or h_lambda < 0:
        raise PreconditionError("need D1, D2 >= 1 and H, h_lambda >= 0")
    m = max(1.0, float(h_lambda))
    h_Q = math.log(D1 + 1) + float(H) + D1 * float(h_lambda)
    h_F = 2 * m
    return {"bound": 20 * ((D1 + D2) * m + float(H)),
            "pre_bound": 3 * h_Q + D2 * h_F + 18 * D2,
            "h_Q": h_Q, "h_F": h_F}


LOG_7680 = math.log(256) + math.log(30)


def lambda_height_bounds(h_j, deg_phi, h_jE0) -> dict:
    """h(lambda) <= h(j) + ln 256 + ln 30 and <= h(j(E0)) + 19 + 12 ln deg(phi)."""
    if h_j < 0 or h_jE0 < 0 or deg_phi < 1:
        raise PreconditionError("need heights >= 0 and deg_phi >= 1")
    return {"from_j": float(h_j) + LOG_7680,
            "via_isogeny": float(h_jE0) + 19 + 12 * math.log(deg_phi)}


def faltings_j_relation(h_E0) -> Fraction:
    """74 max{1, h(E0)} bounds max{1, h(j(E0))}."""
    return 74 * _qmax(1, h_E0)


def kummer_chain_bounds(D2: int) -> dict:
    if D2 < 1:
        raise PreconditionError("D2 must be >= 1")
    return {"N1": LogBound.from_rational(2**130 * D2),
            "index_floor_coeff": LogBound.from_rational(Fraction(1, 2**126))}


# ---------------------------------------------------------------------------
# descent for Galois-stable torsion


@dataclass(frozen=True)
class DescentParams:
    g: int
    dimY: int
    c: int
    degV: int

    def __post_init__(self):
        if not 0 <= self.dimY:
            raise PreconditionError("dim Y must be >= 0")
        if self.g - self.dimY <= 0:
            raise PreconditionError("violated condition g - dim Y > 0")
        if self.c < 1:
            raise PreconditionError("violated condition c >= 1")
        if self.degV < 1:
            raise PreconditionError("violated condition deg V >= 1")


def descent_xi(g: int, dimY: int) -> Fraction:
    return Fraction((dimY + 2) ** 2 * (g - dimY), 4)


def plateau_length(g: int, dimY: int) -> int:
    """t0 from s <- s + floor((s+1) Xi / m') + 1 for m' = dim Y, ..., 1, starting at s = 1.

    dim Y = 0 gives t0 = 0: the point is already isolated.
    """
    if dimY == 0:
        return 0
    xi = descent_xi(g, dimY)
    s = 1
    for m in range(dimY, 0, -1):
        s = s + math.floor((s + 1) * xi / m) + 1
    return s


def descent_thresholds(b: int, t0: int, c: int, degV: int):
    """The four sufficient conditions on N, as LogBounds (named)."""
    T = (t0 + 1) * (t0 + 2)
    return {
        "prime_gap": LogBound.exp((LogExpr.ln(25) + LogExpr.ln(17) * (b * T)) * 16),
        "log_square": LogBound.exp(Fraction((128 * b * T) ** 2)),
        "degree": LogBound.exp(LogExpr.ln(25) * 32 + LogExpr.ln(degV) * (16 * T)),
        "serre_exponent": LogBound.exp(LogExpr.power(c, Fraction(8, 5))),
    }


def hindry_descent(params: DescentParams) -> dict:
    g, dimY, c, degV = params.g, params.dimY, params.c, params.degV
    xi = descent_xi(g, dimY)
    t0 = plateau_length(g, dimY)
    b = c * (g - dimY)
    named = descent_thresholds(b, t0, c, degV)
    thresholds = list(named.values())
    final = lb_max(*thresholds)
    return {"Xi": xi, "t0": t0, "b": b, "thresholds": thresholds, "named_thresholds": named,
            "final": final, "gamma_g": smallest_gamma(final, c, degV)}


def smallest_gamma(final: LogBound, c: int, degV: int) -> Fraction:
    """Least integer gamma with final <= max{exp(gamma c^2), degV^gamma}."""
    lnf = final.log_value

    def ok(gam):
        a = (lnf - LogExpr.const(gam * c * c)).sign() <= 0
        b = degV > 1 and (lnf - LogExpr.ln(degV) * gam).sign() <= 0
        return a or b

    denom = max(c * c, math.log(degV) if degV > 1 else 0)
    gam = max(0, math.ceil(float(lnf) / denom) - 1)
    while gam > 0 and ok(gam - 1):
        gam -= 1
    while not ok(gam):
        gam += 1
    return Fraction(gam)


# ---------------------------------------------------------------------------
# fibered powers and torsion cosets


def fibered_power_bound(g: int, degV: int, dimV: int, h_E0, deg_K: int, is_cm: bool,
                        constants_table: ConstantsTable = None) -> dict:
    """Both alternatives of the fibered-power theorem with gamma(g) from the table."""
    if g < 1 or degV < 1 or deg_K < 1 or not 0 <= dimV <= g + 1:
        raise PreconditionError("need g, degV, deg_K >= 1 and 0 <= dim V <= g + 1")
    table = constants_table or load_constants()
    gamma = table.gamma_fibered(g)
    if gamma.denominator != 1:
        raise PreconditionError("gamma(g) must be an integer")
    gamma = int(gamma)
    h = _q(h_E0)
    base1 = LogBound.from_rational(_qmax(2, degV)) ** gamma
    top = _qmax(2, deg_K) if is_cm else _qmax(2, h, deg_K)
    case2 = (LogBound.exp(LogExpr.ln(2) * top**gamma)
             * LogBound.from_rational(_qmax(2, h, degV)) ** gamma)
    return {"case1": {"orderQ": base1, "degB": base1}, "case2": case2, "gamma": gamma,
            "constants_version": table.version}


def torsion_coset_count_bound(C, N: int, g: int, j: int, dimV: int, degA: int, delta: int) -> LogBound:
    """C N^{(g-j) dim V} deg(A) delta^{g-j}."""
    if not 0 <= j <= dimV <= g:
        raise PreconditionError("need 0 <= j <= dim V <= g")
    if min(N, degA, delta) < 1:
        raise PreconditionError("N, deg A and delta must be >= 1")
    C = LogBound.coerce(C)
    return (C * LogBound.from_rational(N) ** ((g - j) * dimV) * degA
            * LogBound.from_rational(delta) ** (g - j))
