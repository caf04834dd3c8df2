import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from legendre_bounds.constants import (diagonal_degree, fibered_power_degree, hypersurface_degree,
                                       image_constant_chain, image_constant_formula, load_constants,
                                       parse_constants, render_table, sum_constant_formula)


# ---------------------------------------------------------------------------
# oracle: intersection numbers in the Chow ring of prod P^{n_i}


def _mul(a, b, dims):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if all(x <= n for x, n in zip(e, dims)):
                out[e] = out.get(e, 0) + ca * cb
    return out


def _linear(coeffs):
    out = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * len(coeffs)
            e[i] = 1
            out[tuple(e)] = c
    return out


def segre_degree(forms, dims):
    """Degree of a complete intersection of forms of the given multidegrees, via h^dim."""
    cls = {tuple([0] * len(dims)): 1}
    for md in forms:
        cls = _mul(cls, _linear(md), dims)
    H = _linear([1] * len(dims))
    for _ in range(sum(dims) - len(forms)):
        cls = _mul(cls, H, dims)
    return cls.get(tuple(dims), 0)


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,deg", [(0, 1), (1, 7), (2, 72), (3, 972), (4, 16200)])
def test_fibered_power_degree_values(n, deg):
    assert fibered_power_degree(n) == deg


@pytest.mark.parametrize("n", range(1, 6))
def test_fibered_power_degree_matches_chow_ring(n):
    dims = [1] + [2] * n
    forms = [[1] + [3 if j == i else 0 for j in range(n)] for i in range(n)]
    assert fibered_power_degree(n) == segre_degree(forms, dims)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
def test_hypersurface_degree_matches_chow_ring(dims, data):
    md = data.draw(st.lists(st.integers(0, 4), min_size=len(dims), max_size=len(dims)))
    assert hypersurface_degree(md, dims) == segre_degree([md], dims)


def test_diagonal_degree():
    assert diagonal_degree(1) == 60
    assert diagonal_degree(1) == segre_degree([[1, 0, 1, 0]], [1, 2, 1, 2])


def test_image_constant_chain():
    chain = image_constant_chain(1, 1)
    assert chain["C"] == 15552 == image_constant_formula(1, 1)
    assert chain["n"] == 2 and chain["deg_fibered_power"] == 72
    assert chain["C"] == chain["c4"] * max(chain["c5"], chain["c6"])


def test_shipped_table_matches_formulas():
    table = load_constants()
    assert table.version == "1"
    for g in range(1, 4):
        for k in range(1, g + 1):
            assert table.image_constant(k, g) == image_constant_formula(k, g)
    for g in (1, 2):
        assert table.sum_constant(g) == sum_constant_formula(g)
    rendered = parse_constants("version = 1\n" + render_table())
    assert rendered.entries == {k: v for k, v in table.entries.items() if k.startswith("C_")}


def test_sum_constant_composition():
    assert sum_constant_formula(1) == math.comb(4, 2) * diagonal_degree(1) * image_constant_formula(1, 2)


def test_parse_and_override():
    t = parse_constants("version = 7\nC_image(1,1) = 99  # sharper\nC_sum(1) = 5/1\n")
    assert t.version == "7"
    assert t.image_constant(1, 1) == 99 and t.notes["C_image(1,1)"] == "sharper"
    assert t.sum_constant(1) == 5
    # missing keys fall back to the formula
    assert t.image_constant(1, 2) == image_constant_formula(1, 2)


def test_parse_requires_version():
    with pytest.raises(ValueError, match="version"):
        parse_constants("C_sum(1) = 3\n")


@pytest.mark.parametrize("text", ["version = 1\nno equals sign\n", "version = 1\n1bad = 3\n",
                                  "version = 1\nC_sum(1) = abc\n"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_constants(text)


def test_placeholder_lookups():
    t = load_constants()
    assert t.gamma_fibered(2) == 80 and t.gamma_fibered(5) == 200
    assert t.proof_constant(7, 1) == 1
    bare = parse_constants("version = 1\n")
    with pytest.raises(KeyError):
        bare.gamma_fibered(1)
    with pytest.raises(KeyError):
        bare.proof_constant(1, 1)


def test_rational_values_are_exact():
    t = parse_constants("version = 2\nc3 = 7/3\n")
    assert t.proof_constant(3, 1) == Fraction(7, 3)
