import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from legendre_bounds.algebraic import AlgebraicNumber, NumberField
from legendre_bounds.arith import (check_analytic_inequalities, euler_phi, find_coprime_prime, omega,
                                   sweep_analytic_inequalities)
from legendre_bounds.heights import ProjectivePoint, height_of_algebraic, polynomial_height, weil_height


def trial_factor(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@pytest.mark.parametrize("n,w", [(1, 0), (12, 2), (30, 3)])
def test_omega_examples(n, w):
    assert omega(n) == w


@pytest.mark.parametrize("n,phi", [(1, 1), (5, 4), (12, 4)])
def test_phi_examples(n, phi):
    assert euler_phi(n) == phi


@given(st.integers(1, 5000))
def test_omega_phi_match_trial_division(n):
    assert omega(n) == len(trial_factor(n))
    assert euler_phi(n) == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


@pytest.mark.parametrize("n", [3, 30])
def test_analytic_inequalities_examples(n):
    r = check_analytic_inequalities(n)
    assert r.robin_ok and r.phi_ok


def test_analytic_inequalities_precondition():
    with pytest.raises(ValueError):
        check_analytic_inequalities(2)


def test_sweep_small_range():
    assert sweep_analytic_inequalities(20_000).ok


@pytest.mark.parametrize("N,lo,hi,expected", [(6, 2, 7, 5), (1, 2, 3, 2), (2, 4, 5, None)])
def test_find_coprime_prime_examples(N, lo, hi, expected):
    assert find_coprime_prime(N, lo, hi) == expected


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


@given(st.integers(1, 10**4), st.integers(0, 3000), st.integers(0, 400))
def test_find_coprime_prime_is_minimal(N, lo, width):
    hi = lo + width
    got = find_coprime_prime(N, lo, hi)
    brute = next((a for a in range(lo, hi) if _is_prime(a) and math.gcd(a, N) == 1), None)
    assert got == brute


@pytest.mark.parametrize("coords,value", [([1, 1], 0.0), ([3, 4, 5], math.log(5)),
                                          ([Fraction(1, 2), Fraction(1, 3)], math.log(3))])
def test_weil_height_examples(coords, value):
    assert weil_height(coords).value == pytest.approx(value, abs=1e-12)


def test_weil_height_rejects_zero_vector():
    with pytest.raises(ValueError):
        weil_height([0, 0])


def _mahler_oracle(coeffs_low_first):
    roots = np.roots(list(reversed(coeffs_low_first)))
    lead = abs(coeffs_low_first[-1])
    return (math.log(lead) + sum(math.log(max(1.0, abs(r))) for r in roots)) / (len(coeffs_low_first) - 1)


@pytest.mark.parametrize("poly,value", [([-5, 1], math.log(5)), ([-2, 0, 1], math.log(2) / 2), ([1, 0, 1], 0.0)])
def test_height_of_algebraic_examples(poly, value):
    assert height_of_algebraic(poly).value == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("poly", [[-3, 0, 2], [1, -1, 0, 5], [7, 3, -2, 4], [2, 1, 1, 1]])
def test_height_of_algebraic_low_degree_against_numpy(poly):
    assert height_of_algebraic(poly).value == pytest.approx(_mahler_oracle(poly), abs=1e-9)


def test_height_of_algebraic_rejects_reducible():
    with pytest.raises(ValueError):
        height_of_algebraic([-1, 0, 1])


def test_polynomial_height_examples():
    assert polynomial_height({(1, 0): 1, (0, 1): 1}).value == pytest.approx(0)
    assert polynomial_height([5, -4, 3]).value == pytest.approx(math.log(5))
    assert polynomial_height([1, Fraction(1, 2)]).value == pytest.approx(math.log(2))
    with pytest.raises(ValueError):
        polynomial_height([0, 0])


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=50)
nonzero = rationals.filter(lambda q: q != 0)


@given(st.lists(rationals, min_size=2, max_size=4).filter(lambda v: any(v)), nonzero)
def test_weil_height_scaling_invariance(coords, t):
    a = weil_height(coords)
    b = weil_height([c * t for c in coords])
    assert a.exact == b.exact


def test_weil_height_multiprojective_is_segre_sum():
    p = ProjectivePoint((1, 2, 3, 4, 5), (1, 2))
    assert weil_height(p).value == pytest.approx(math.log(2) + math.log(5))


K = NumberField([-5, 0, 1])
quad = st.tuples(st.integers(-9, 9), st.integers(-9, 9)).filter(lambda t: t != (0, 0))


@given(quad, quad)
def test_height_triangle_inequalities(a, b):
    s = K.gen()
    x, y = a[0] + a[1] * s, b[0] + b[1] * s
    h = lambda z: weil_height([z, K(1)], 1e-12)
    hx, hy = h(x), h(y)
    tol = 1e-10
    assume(not (x + y).is_zero())
    assert h(x * y).value <= hx.value + hy.value + tol
    assert h(x + y).value <= hx.value + hy.value + math.log(2) + tol


def test_field_height_matches_mahler():
    s = K.gen()
    x = 1 + s                       # minimal polynomial t^2 - 2t - 4
    assert weil_height([x, K(1)]).value == pytest.approx(_mahler_oracle([-4, -2, 1]), abs=1e-10)


def test_algebraic_number_box_isolates_one_root():
    roots = AlgebraicNumber.roots_of([-2, 0, 1])
    assert len(roots) == 2
    assert height_of_algebraic(roots[0]).value == pytest.approx(math.log(2) / 2)
