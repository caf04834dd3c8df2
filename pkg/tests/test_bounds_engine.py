import math
from fractions import Fraction

import flint
import numpy as np
import pytest
from hypothesis import given, strategies as st

from legendre_bounds.bounds import (GAMMA1, GAMMA2, GAMMA3, DescentParams, MMCurveParams, PreconditionError,
                                    descent_thresholds, faltings_j_relation, fiber_point_height_bound,
                                    fibered_power_bound, hindry_descent, kummer_chain_bounds,
                                    lambda_height_bounds, ml_bounds, mm_curve_bound, plateau_length,
                                    solve_log_inequality, torsion_coset_count_bound)
from legendre_bounds.curve import j_invariant
from legendre_bounds.heights import weil_height
from legendre_bounds.logbound import LogBound, LogExpr, lb_max

# ---------------------------------------------------------------------------
# LogBound


def lb(x):
    return LogBound.from_rational(x)


log_values = st.one_of(
    st.fractions(min_value=0, max_value=10**6, max_denominator=1000).map(lambda q: LogBound.from_rational(q)),
    st.fractions(min_value=-50, max_value=50, max_denominator=20).map(lambda q: LogBound.exp(q)),
    st.tuples(st.integers(2, 30), st.fractions(min_value=-5, max_value=5, max_denominator=7))
      .map(lambda t: LogBound.exp(LogExpr.power(t[0], t[1]))),
)


@given(log_values, log_values, log_values)
def test_logbound_order_is_antisymmetric_and_transitive(a, b, c):
    assert a.compare(b) == -b.compare(a)
    if a <= b and b <= c:
        assert a <= c


@given(log_values)
def test_logbound_round_trip(a):
    back = LogBound.parse(a.to_expr())
    assert back.identical(a)
    if not a.is_zero:
        assert abs(back.ln() - a.ln()) <= 1e-12 * max(1.0, abs(a.ln()))


def test_logbound_exact_equality_between_forms():
    assert lb(18000) ** 4 == LogBound.exp(LogExpr.ln(18000) * 4)
    assert lb(2) ** 10 == lb(1024)


# ---------------------------------------------------------------------------
# curve bound and the Masser-type chain


def test_mm_curve_examples():
    floor = LogBound.exp(LogExpr.power(2, Fraction(18, 5)))
    assert mm_curve_bound(6, 1).identical(floor)
    assert mm_curve_bound(6, 10) == lb(180) ** 4
    assert mm_curve_bound(1, 1).identical(floor)
    assert mm_curve_bound(6, 1000) == lb(18000) ** 4
    assert math.isclose(mm_curve_bound(6, 1).ln(), 2**3.6)
    assert 4 * math.log(18) < 2**3.6
    with pytest.raises(PreconditionError):
        mm_curve_bound(6, 0)


def test_ml_bounds_examples():
    r = ml_bounds(MMCurveParams(1, 1, 1, 1))
    assert r["deg_phi"] == lb(2) ** 12698
    assert r["N"] == LogBound.exp(Fraction(22 * 10**9))
    r3 = ml_bounds(MMCurveParams(1, 1, 0, 3))
    assert r3["deg_phi"] == lb(3) ** 12698
    a = ml_bounds(MMCurveParams(1, 2, 0, 1))["deg_phi"]
    b = ml_bounds(MMCurveParams(1, 4, 0, 1))["deg_phi"]
    assert b / a == lb(2) ** 6


def test_ml_bounds_structure():
    assert (GAMMA1, GAMMA2, GAMMA3) == (12698, Fraction(22 * 10**9), 26471)
    # h_E0 = 7 and max{D1, D2, H} = 5 keep the three exponents on separate atoms
    r = ml_bounds(MMCurveParams(2, 3, 5, 7))
    assert r["N"].log_value.terms == {("one",): GAMMA2, ("ln", 7): GAMMA3, ("ln", 5): 9}
    assert r["deg_phi"].log_value.terms == {("ln", 7): GAMMA1, ("ln", 5): 6}


def test_ml_bounds_isogeny_callback():
    r = ml_bounds(MMCurveParams(1, 1, 0, 1), isogeny_bound=lambda p: 77)
    assert r["deg_phi"] == lb(77)


@pytest.mark.parametrize("args,expected", [((1, 1, 1), 4), ((10, Fraction(1, 10**9), 1), 20)])
def test_solve_log_inequality_examples(args, expected):
    assert solve_log_inequality(*args) == expected


def test_solve_log_inequality_rejects_nonpositive():
    with pytest.raises(PreconditionError):
        solve_log_inequality(0, 1, 1)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-2, 1e2))
def test_solve_log_inequality_grid(A1, A2, A3):
    B = float(solve_log_inequality(Fraction(A1), Fraction(A2), Fraction(A3)))
    x = np.logspace(0, 6, 20000)
    viol = (A3 * x <= A1 + A2 * np.log(x)) & (x > B * (1 + 1e-12))
    assert not viol.any()


def test_fiber_point_height_examples():
    assert fiber_point_height_bound(1, 1, 0, 0)["bound"] == 40
    assert fiber_point_height_bound(2, 3, 1, 2)["bound"] == 220


@given(st.integers(1, 50), st.integers(1, 50), st.floats(0, 100), st.floats(0, 100), st.sampled_from(range(4)))
def test_fiber_point_height_monotone(D1, D2, H, h, which):
    base = [D1, D2, H, h]
    bumped = list(base)
    bumped[which] += 1
    assert fiber_point_height_bound(*bumped)["bound"] >= fiber_point_height_bound(*base)["bound"]


def test_lambda_height_examples():
    r = lambda_height_bounds(0, 1, 5)
    assert r["from_j"] == pytest.approx(math.log(256) + math.log(30))
    assert r["via_isogeny"] == 24


@given(st.fractions(min_value=-300, max_value=300, max_denominator=300).filter(lambda q: q not in (0, 1)))
def test_lambda_height_bounded_by_j_height(lam):
    h_lam = weil_height([lam, 1]).value
    h_j = weil_height([j_invariant(lam), 1]).value
    assert h_lam <= lambda_height_bounds(h_j, 1, 0)["from_j"] + 1e-12


def test_faltings_j_examples():
    assert (faltings_j_relation(0), faltings_j_relation(2), faltings_j_relation(1)) == (74, 148, 74)


def test_kummer_examples():
    assert kummer_chain_bounds(1)["N1"] == lb(2**130)
    assert kummer_chain_bounds(4)["N1"] == lb(2**132)
    assert kummer_chain_bounds(1)["index_floor_coeff"] == lb(Fraction(1, 2**126))
    with pytest.raises(PreconditionError):
        kummer_chain_bounds(0)


# ---------------------------------------------------------------------------
# descent


def test_descent_example():
    r = hindry_descent(DescentParams(2, 0, 1, 5))
    assert (r["b"], r["t0"], r["Xi"]) == (2, 0, 2)
    assert r["final"] == LogBound.exp(262144)
    assert r["named_thresholds"]["log_square"] == r["final"]
    assert r["gamma_g"] == 162880


def test_plateau_length_zero_dimension():
    assert plateau_length(5, 0) == 0


@pytest.mark.parametrize("bad", [dict(g=2, dimY=2, c=1, degV=1), dict(g=2, dimY=0, c=0, degV=1),
                                 dict(g=2, dimY=0, c=1, degV=0)])
def test_descent_preconditions_name_the_condition(bad):
    with pytest.raises(PreconditionError, match="violated condition"):
        DescentParams(**bad)


descent_args = st.tuples(st.integers(1, 4), st.integers(0, 3), st.integers(1, 6), st.integers(1, 50)) \
    .filter(lambda t: t[1] < t[0])


@given(descent_args)
def test_descent_monotone_in_c_and_degV(t):
    g, dimY, c, degV = t
    base = hindry_descent(DescentParams(g, dimY, c, degV))["final"]
    assert hindry_descent(DescentParams(g, dimY, c + 1, degV))["final"] >= base
    assert hindry_descent(DescentParams(g, dimY, c, degV + 1))["final"] >= base


@given(descent_args)
def test_gamma_is_minimal(t):
    g, dimY, c, degV = t
    r = hindry_descent(DescentParams(g, dimY, c, degV))
    gam = int(r["gamma_g"])
    ok = lambda k: r["final"] <= lb_max(LogBound.exp(k * c * c), lb(degV) ** k)
    assert ok(gam) and (gam == 0 or not ok(gam - 1))


@given(descent_args)
def test_thresholds_imply_quoted_inequalities(t):
    # N at each threshold satisfies the matching inequality, decided with balls
    g, dimY, c, degV = t
    r = hindry_descent(DescentParams(g, dimY, c, degV))
    b, T = r["b"], (r["t0"] + 1) * (r["t0"] + 2)
    lnN = r["final"].log_value.arb()
    ln = lambda k: flint.arb(k).log()
    assert lnN >= 16 * (ln(25) + b * T * ln(17)) or lnN.overlaps(16 * (ln(25) + b * T * ln(17)))
    assert lnN >= flint.arb((128 * b * T) ** 2) or lnN.overlaps(flint.arb((128 * b * T) ** 2))
    assert lnN >= 32 * ln(25) + 16 * T * ln(degV) or lnN.overlaps(32 * ln(25) + 16 * T * ln(degV))
    assert lnN >= flint.arb(c) ** (flint.arb(8) / 5) or lnN.overlaps(flint.arb(c) ** (flint.arb(8) / 5))


def test_descent_thresholds_named():
    th = descent_thresholds(2, 0, 1, 5)
    assert set(th) == {"prime_gap", "log_square", "degree", "serre_exponent"}


# ---------------------------------------------------------------------------
# fibered powers and torsion cosets


def test_fibered_power_examples():
    r = fibered_power_bound(1, 1, 1, 0, 1, True)
    assert r["case1"]["orderQ"] == lb(2) ** r["gamma"]
    cm = fibered_power_bound(2, 3, 1, 50, 4, True)["case2"]
    non = fibered_power_bound(2, 3, 1, 50, 4, False)["case2"]
    g = fibered_power_bound(2, 3, 1, 50, 4, True)["gamma"]
    assert cm == LogBound.exp(LogExpr.ln(2) * 4**g) * lb(50) ** g
    assert non == LogBound.exp(LogExpr.ln(2) * 50**g) * lb(50) ** g


@given(st.integers(1, 3), st.integers(1, 30), st.integers(0, 40), st.integers(1, 10), st.booleans())
def test_fibered_power_monotone(g, degV, h, dK, cm):
    base = fibered_power_bound(g, degV, 1, h, dK, cm)
    for args in ((g, degV + 1, 1, h, dK, cm), (g, degV, 1, h + 1, dK, cm), (g, degV, 1, h, dK + 1, cm)):
        up = fibered_power_bound(*args)
        assert up["case1"]["orderQ"] >= base["case1"]["orderQ"] and up["case2"] >= base["case2"]


def test_torsion_coset_examples():
    assert torsion_coset_count_bound(1, 10, 2, 0, 1, 3, 2) == lb(1200)
    assert torsion_coset_count_bound(5, 10, 2, 2, 2, 3, 2) == lb(15)
    with pytest.raises(PreconditionError):
        torsion_coset_count_bound(1, 10, 2, 3, 2, 3, 2)


@given(st.integers(1, 20), st.integers(1, 50), st.integers(0, 3), st.integers(1, 9), st.integers(1, 9),
       st.sampled_from(range(4)))
def test_torsion_coset_monotone(C, N, j, degA, delta, which):
    g, dimV = 3, 3
    base = [C, N, degA, delta]
    up = list(base)
    up[which] += 1
    f = lambda v: torsion_coset_count_bound(v[0], v[1], g, j, dimV, v[2], v[3])
    assert f(up) >= f(base)
