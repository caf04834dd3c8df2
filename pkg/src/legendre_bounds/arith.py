"""Arithmetic functions and the two analytic inequalities on omega and phi."""

from dataclasses import dataclass
import math

import flint

from . import kernels


def _factor(N):
    return [(int(p), int(e)) for p, e in flint.fmpz(N).factor()] if N > 1 else []


def omega(N: int) -> int:
    """Number of distinct prime divisors of ``N``."""
    if N < 1:
        raise ValueError("omega needs N >= 1")
    return len(_factor(N))


def euler_phi(N: int) -> int:
    if N < 1:
        raise ValueError("euler_phi needs N >= 1")
    out = 1
    for p, e in _factor(N):
        out *= (p - 1) * p ** (e - 1)
    return out


def prime_factors(N: int):
    return [p for p, _ in _factor(N)]


@dataclass(frozen=True)
class InequalityReport:
    N: int
    robin_ok: bool
    phi_ok: bool


def _certified_le(lhs, rhs, prec_bits=(64, 128, 256, 1024)):
    """Decide ``lhs(ctx) <= rhs(ctx)`` with balls; both are thunks returning arb.

    Returns False only when the balls prove the opposite; an unresolved case at
    the top precision raises, since neither answer would be certified.
    """
    old = flint.ctx.prec
    try:
        for prec in prec_bits:
            flint.ctx.prec = prec
            diff = rhs() - lhs()
            if diff >= 0:
                return True
            if diff < 0:
                return False
        raise ArithmeticError("inequality could not be decided at %d bits" % prec_bits[-1])
    finally:
        flint.ctx.prec = old


def robin_holds(N, w=None):
    w = omega(N) if w is None else w
    return _certified_le(
        lambda: flint.arb(w),
        lambda: 7 * flint.arb(N).log() / (5 * flint.arb(N).log().log()),
    )


def phi_holds(N, ph=None):
    ph = euler_phi(N) if ph is None else ph
    return _certified_le(
        lambda: flint.arb(N) / (2 * flint.arb(N).log() + 1),
        lambda: flint.arb(ph),
    )


def check_analytic_inequalities(N: int) -> InequalityReport:
    """Certified check of omega(N) <= 7 ln N/(5 ln ln N) and phi(N) >= N/(2 ln N + 1)."""
    if N < 3:
        raise ValueError("analytic inequalities need N >= 3 (ln ln N must be positive)")
    return InequalityReport(N, robin_holds(N), phi_holds(N))


@dataclass(frozen=True)
class SweepResult:
    lo: int
    hi: int
    robin_failures: tuple
    phi_failures: tuple
    rechecked: int

    @property
    def ok(self):
        return not self.robin_failures and not self.phi_failures


def sweep_analytic_inequalities(hi: int, lo: int = 3) -> SweepResult:
    """Check both inequalities for every N in [lo, hi].

    A float screen clears almost everything; values within the screening
    margin are re-decided one by one with ball arithmetic.
    """
    if lo < 3:
        raise ValueError("sweep needs lo >= 3")
    om, ph = kernels.omega_phi_table(hi)
    robin_ok, phi_ok = kernels.screen_inequalities(om, ph, lo, hi)
    robin_bad, phi_bad = [], []
    rechecked = 0
    for i in (~robin_ok).nonzero()[0]:
        n = lo + int(i)
        rechecked += 1
        if not robin_holds(n, int(om[n])):
            robin_bad.append(n)
    for i in (~phi_ok).nonzero()[0]:
        n = lo + int(i)
        rechecked += 1
        if not phi_holds(n, int(ph[n])):
            phi_bad.append(n)
    return SweepResult(lo, hi, tuple(robin_bad), tuple(phi_bad), rechecked)


def find_coprime_prime(N: int, lo, hi, window: int = 1 << 20):
    """Smallest prime ``a`` with ``lo <= a < hi`` and gcd(a, N) = 1, or None.

    ``lo``/``hi`` may be any reals (Fractions, floats, ints). The range is
    sieved in windows so huge ``hi`` costs only as much as the search needs.
    """
    if lo > hi:
        raise ValueError("need lo <= hi")
    start = max(2, math.ceil(lo))
    # primes a < hi  <=>  a <= ceil(hi) - 1
    stop = math.ceil(hi)
    while start < stop:
        end = min(stop, start + window)
        for p in kernels.primes_in_range(start, end):
            p = int(p)
            if math.gcd(p, N) == 1:
                return p
        start = end
    return None
