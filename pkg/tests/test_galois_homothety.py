import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from legendre_bounds.arith import euler_phi, omega
from legendre_bounds.galois import (DomainError, HomothetySubgroup, SerreConstantParams, TorsionModule,
                                    bound_formula, homotheties_preserve_submodules, orbit, orbit_lower_bound,
                                    quotient_descent, serre_constant_bound, squaring_rule, units,
                                    verify_orbit_bound)
from legendre_bounds.logbound import LogBound


def test_orbit_examples():
    assert orbit((0, 0), HomothetySubgroup.full(5), 1) == {(0, 0)}
    assert orbit((1, 0), HomothetySubgroup.full(5), 1) == {(1, 0), (4, 0)}
    assert orbit((1, 5), HomothetySubgroup.full(12), 1) == {(1, 5)}


def test_orbit_modulus_mismatch():
    with pytest.raises(DomainError):
        orbit((1, 0), HomothetySubgroup.full(5), 1, TorsionModule(7, 2))


def _brute_orbit(p, N, e):
    return {tuple(pow(a, e, N) * x % N for x in p) for a in range(1, N) if math.gcd(a, N) == 1}


@given(st.integers(2, 60), st.integers(1, 3), st.data())
def test_orbit_matches_brute_force_and_unit_multiples(N, c, data):
    p = (data.draw(st.integers(0, N - 1)), data.draw(st.integers(0, N - 1)))
    G = HomothetySubgroup.full(N)
    o = orbit(p, G, c)
    assert o == _brute_orbit(p, N, 2 * c)
    u = data.draw(st.sampled_from(units(N)))
    assert len(orbit(tuple(u * x % N for x in p), G, c)) == len(o)


@pytest.mark.parametrize("N,C,value", [(5, 1, Fraction(1)), (12, 1, Fraction(1, 2)), (2, 1, Fraction(1, 4))])
def test_orbit_lower_bound_examples(N, C, value):
    assert orbit_lower_bound(N, C) == value


def test_bound_formulas():
    assert bound_formula("theorem", 5, 1, 1) == Fraction(4, 2 * 2)
    assert bound_formula("conjugates", 30, 1, 2) == Fraction(8, 2 * 8)
    with pytest.raises(ValueError):
        bound_formula("other", 5, 1, 1)


@pytest.mark.parametrize("N,C,c,sampled", [(5, 1, 1, False), (12, 1, 1, False), (210, 2, 2, True)])
def test_verify_orbit_bound_examples(N, C, c, sampled):
    r = verify_orbit_bound(N, C, c)
    assert r.ok and r.sampled == sampled


def test_full_group_square_orbits_exhaustive():
    # every order-N point: orbit under squares of (Z/N)^* has size >= phi(N) / (2 * 2^omega(N))
    for N in range(2, 201):
        r = verify_orbit_bound(N, 1, 1, full_group_only=True)
        assert r.min_orbit >= Fraction(euler_phi(N), 2 * 2 ** omega(N)), N


def test_homotheties_preserve_cyclic_submodules():
    for g in (1, 2):
        for N in range(2, 51):
            count, failures = homotheties_preserve_submodules(N, g)
            assert count > 0 and failures == 0


def test_quotient_descent_examples():
    a = quotient_descent(3, [(2, 0)], 4)
    assert a.preserved and a.well_defined and a.is_multiplication_by(3)
    assert a.submodule_size * a.quotient_size == 16
    a = quotient_descent(5, [(3, 3)], 6)
    assert a.preserved and a.well_defined and a.is_multiplication_by(5)
    a = quotient_descent(1, [(1, 2)], 5)
    assert all(k == v for k, v in a.mapping.items())


@given(st.integers(2, 12), st.data())
def test_quotient_descent_always_well_defined(N, data):
    b = data.draw(st.sampled_from(units(N)))
    gens = data.draw(st.lists(st.tuples(st.integers(0, N - 1), st.integers(0, N - 1)), min_size=1, max_size=2))
    a = quotient_descent(b, gens, N)
    assert a.preserved and a.well_defined and a.is_multiplication_by(b)


@pytest.mark.parametrize("b,N,sq", [(1, 7, 1), (2, 5, 4), (3, 8, 1)])
def test_squaring_rule_examples(b, N, sq):
    assert squaring_rule(b, N) == sq


def test_squaring_rule_rejects_nonunit():
    with pytest.raises(ValueError):
        squaring_rule(2, 8)


def test_odd_squares_mod_8():
    assert {squaring_rule(b, 8) for b in units(8)} == {1}


def test_serre_examples():
    assert serre_constant_bound(SerreConstantParams(True, 1, 1)) == LogBound.from_rational(6)
    assert serre_constant_bound(SerreConstantParams(True, 3, 3)) == LogBound.from_rational(18)
    non = serre_constant_bound(SerreConstantParams(False, 1, 1, 1))
    assert non == LogBound.exp(Fraction(19 * 10**9))
    assert non.ln() == pytest.approx(1.9e10)


def test_serre_params_validation():
    with pytest.raises(ValueError):
        SerreConstantParams(False, 2, 3)
    with pytest.raises(ValueError):
        SerreConstantParams(False, 0, 0)


@given(st.integers(1, 40), st.fractions(min_value=0, max_value=100, max_denominator=10), st.booleans())
def test_serre_monotone(d, h, cm):
    base = serre_constant_bound(SerreConstantParams(cm, d, 1, h))
    assert serre_constant_bound(SerreConstantParams(cm, d + 1, 1, h)) >= base
    assert serre_constant_bound(SerreConstantParams(cm, d, 1, h + 1)) >= base
    if d >= 2:
        assert serre_constant_bound(SerreConstantParams(cm, d, 2, h)) >= base


def test_serre_non_cm_log_form():
    # ln C = 1.9e10 + 12395 ln(d max{1, h, ln d})
    for d, h in ((2, 5), (30, 1), (1000, 2)):
        v = serre_constant_bound(SerreConstantParams(False, d, 1, h)).ln()
        expect = 1.9e10 + 12395 * math.log(d * max(1, h, math.log(d)))
        assert v == pytest.approx(expect, rel=1e-14)
