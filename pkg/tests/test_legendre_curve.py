import random
from fractions import Fraction

import flint
import pytest
from hypothesis import given, strategies as st

from legendre_bounds.algebraic import NumberField
from legendre_bounds.canonical import canonical_height, upper_bound_check, x_height
from legendre_bounds.curve import (DomainError, LegendreFiber, add, certify_order, check_j_sextic,
                                   count_points_killed_by, j_invariant, multiply, torsion_order)
from legendre_bounds.divpoly import (check_functional_equation, division_polynomials,
                                     primitive_division_polynomial)
from legendre_bounds.heights import weil_height

# lambda = -6 carries the non-torsion rational points with x = -3 and x = 2
E6 = LegendreFiber(-6)
P1 = E6.point(-3, 6)
P2 = E6.point(2, 4)
T2 = E6.two_torsion()


def combo(a, b, t):
    out = add(multiply(a, P1), multiply(b, P2))
    return add(out, T2[t]) if t < 3 else out


points = st.builds(combo, st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 3))


def test_two_torsion_sum_is_third():
    for lam in (-6, 2, Fraction(5, 3)):
        E = LegendreFiber(lam)
        s = add(E.point(0, 0), E.point(1, 0))
        assert (s.x, s.w) == (E.lam, 0)


def test_identity_law_and_duplication_example():
    E = LegendreFiber(-3)
    P = E.point(-1, 2)
    assert add(P, E.identity()) == P
    D = add(P, P)
    assert (D.x, D.w) == (1, 0)
    assert multiply(1, P) == P
    assert multiply(4, P).is_identity


def test_add_rejects_different_fibers():
    with pytest.raises(DomainError):
        add(LegendreFiber(2).point(0, 0), LegendreFiber(3).point(0, 0))


@given(points, points, points)
def test_group_law_associative_commutative(P, Q, R):
    assert add(P, Q) == add(Q, P)
    assert add(add(P, Q), R) == add(P, add(Q, R))
    assert add(P, -P).is_identity


@pytest.mark.parametrize("lam", [0, 1])
def test_degenerate_fibers_rejected(lam):
    with pytest.raises(DomainError):
        LegendreFiber(lam)


def test_division_polynomials_small_cases():
    A1, B1 = division_polynomials(1)
    assert A1.terms == {(1, 0): 1} and B1.terms == {(0, 0): 1}
    A2, B2 = division_polynomials(2)
    X, L = flint.fmpz_mpoly_ctx.get(("X", "L"), "lex").gens()
    assert A2.poly == (X**2 - L) ** 2
    assert B2.poly == 4 * X * (X - 1) * (X - L)
    A3, B3 = division_polynomials(3)
    assert (A3.degree_x(), B3.degree_x(), A3.is_monic_x()) == (9, 8, True)
    with pytest.raises(ValueError):
        division_polynomials(0)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_functional_equation(n):
    assert check_functional_equation(n)


def test_lambda_degree_is_floor_half_n_squared():
    # measured e = deg_L A_n; only e <= n^2 is claimed
    for n in range(1, 11):
        A, _ = division_polynomials(n)
        assert A.degree_lambda() == n * n // 2


@given(st.integers(1, 12), points)
def test_abscissa_of_multiple_matches_division_polynomials(n, P):
    Q = multiply(n, P)
    if P.is_identity or Q.is_identity:
        return
    A, B = division_polynomials(n)
    lam = E6.lam
    assert Q.x * B.evaluate(P.x, lam) == A.evaluate(P.x, lam)


@pytest.mark.parametrize("lam", [-1, -3, 2, 5])
def test_division_polynomial_roots_are_torsion_abscissas(lam):
    E = LegendreFiber(lam)
    for n in range(2, 9):
        _, B = division_polynomials(n)
        coeffs = [Fraction(0)] * (B.degree_x() + 1)
        for (i, j), c in B.terms.items():
            coeffs[i] += c * Fraction(lam) ** j
        Bx = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in coeffs])
        for f, _ in Bx.factor()[1]:
            K = NumberField(f)
            EK = LegendreFiber(K(E.lam.to_fraction())) if K.degree > 1 else E
            x = K.gen() if K.degree > 1 else -f.coeffs()[0] / f.coeffs()[1]
            P = EK.lift_x(x)
            assert multiply(n, P).is_identity


def test_count_points_killed_by():
    for lam in (-3, 2):
        assert [count_points_killed_by(a, lam) for a in range(1, 7)] == [a * a for a in range(1, 7)]


def test_primitive_division_polynomial_degrees():
    # number of x-coordinates of points of exact order N is (#points of exact order N) / 2
    expected = [0, 3, 4, 6, 12, 12, 24, 24]
    assert [primitive_division_polynomial(N).degree_x() for N in range(1, 9)] == expected


def test_torsion_order_examples():
    E = LegendreFiber(-3)
    assert torsion_order(E.point(0, 0), 10) == 2
    assert torsion_order(E.point(-1, 2), 10) == 4
    assert torsion_order(E.identity(), 10) == 1
    assert torsion_order(P1, 12) is None


def test_certify_order_both_methods_agree():
    c = certify_order(LegendreFiber(-3).point(-1, 2), 4)
    assert c["multiply"] and c["division_polynomial"] and c["agree"]
    c = certify_order(LegendreFiber(-3).point(-1, 2), 2)
    assert not c["multiply"] and not c["division_polynomial"]


def test_j_invariant_examples():
    assert j_invariant(2) == 1728 and j_invariant(-1) == 1728
    with pytest.raises(DomainError):
        j_invariant(1)


@given(st.fractions(min_value=-100, max_value=100, max_denominator=100).filter(lambda q: q not in (0, 1)))
def test_j_sextic_identity(lam):
    assert check_j_sextic(lam)


def test_j_invariant_independent_formula():
    for lam in (Fraction(3, 7), Fraction(-5, 2), 9):
        lam = Fraction(lam)
        assert j_invariant(lam) == 256 * (lam**2 - lam + 1) ** 3 / (lam**2 * (lam - 1) ** 2)


def test_canonical_height_of_torsion_is_zero():
    E = LegendreFiber(-3)
    for P in (E.point(-1, 2), E.point(0, 0), E.point(1, 0)):
        assert abs(canonical_height(P, 1e-10).value) <= 1e-10


def test_canonical_height_two_precisions_agree():
    P = LegendreFiber(-1).lift_x(2)          # (2, sqrt 6)
    a = canonical_height(P, 1e-6)
    b = canonical_height(P, 1e-9)
    assert abs(a.value - b.value) <= 1e-6
    assert a.error <= 1e-6 and b.error <= 1e-9


@given(points)
def test_canonical_height_is_quadratic(P):
    if P.is_identity:
        return
    tol = 1e-9
    h1 = canonical_height(P, tol).value
    h2 = canonical_height(add(P, P), tol).value
    assert abs(h2 - 4 * h1) <= 5 * tol


def test_upper_bound_check_examples():
    assert upper_bound_check(LegendreFiber(-1).lift_x(2))
    assert upper_bound_check(LegendreFiber(-3).point(-1, 2))
    with pytest.raises(DomainError):
        upper_bound_check(E6.identity())


def test_canonical_height_sanity_band():
    # |hat_h - (3/2) h(x)| <= 1.5 max{1, h(lambda)} + 3 (normalisation of hat_h on [x:y:1])
    rng = random.Random(7)
    for lam in (-1, 2, 5, Fraction(7, 3), Fraction(-5, 4)):
        E = LegendreFiber(lam)
        hl = weil_height([lam, 1]).value
        for _ in range(4):
            x = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
            if E.f(x).is_zero():
                continue
            P = E.lift_x(x)
            diff = canonical_height(P, 1e-8).value - 1.5 * x_height(P).value
            assert abs(diff) <= 1.5 * max(1, hl) + 3
