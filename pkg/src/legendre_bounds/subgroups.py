"""Degrees of algebraic subgroups of E^g and bound propagation.

A codimension-k subgroup is presented by a k x g integer matrix M (the
kernel of the map E^g -> E^k it defines). Its degree in P^1 x (P^2)^g style
bookkeeping is (g-k)! 3^(g-k) sum over maximal minors D of D^2. Image,
preimage and sum bounds multiply by constants from :mod:`constants`.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import math
import random

import flint

from .constants import ConstantsTable, load_constants
from .divpoly import division_polynomials


class PreconditionError(ValueError):
    pass


def _as_rows(M):
    if isinstance(M, flint.fmpz_mat):
        return [[int(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]
    rows = [list(map(int, r)) for r in M]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise PreconditionError("matrix must be a non-empty rectangular list of rows")
    return rows


def maximal_minors(M):
    rows = _as_rows(M)
    k, g = len(rows), len(rows[0])
    if k > g:
        raise PreconditionError("need k <= g")
    out = []
    for cols in combinations(range(g), k):
        sub = flint.fmpz_mat([[rows[i][j] for j in cols] for i in range(k)])
        out.append(int(sub.det()))
    return out


def kernel_degree(M) -> int:
    """(g-k)! 3^(g-k) sum(Delta^2) over the maximal minors of M."""
    rows = _as_rows(M)
    k, g = len(rows), len(rows[0])
    if not 1 <= k <= g:
        raise PreconditionError("need 1 <= k <= g")
    minors = maximal_minors(rows)
    if not any(minors):
        raise PreconditionError("matrix has rank < k")
    return math.factorial(g - k) * 3 ** (g - k) * sum(d * d for d in minors)


def cauchy_binet_check(M) -> bool:
    rows = _as_rows(M)
    A = flint.fmpz_mat(rows)
    return int((A * A.transpose()).det()) == sum(d * d for d in maximal_minors(rows))


# ---------------------------------------------------------------------------
# lattices


def unit_ball_volume(k: int, prec=128) -> flint.arb:
    """pi^(k/2) / Gamma(k/2 + 1)."""
    ctx_prec = flint.ctx.prec
    flint.ctx.prec = prec
    try:
        return flint.arb.pi() ** (flint.arb(k) / 2) / flint.arb(flint.arb(k) / 2 + 1).gamma()
    finally:
        flint.ctx.prec = ctx_prec


@dataclass(frozen=True)
class BasisCertificate:
    norms_squared: tuple
    gram_det: int
    bound: flint.arb          # k 2^k nu_k^{-1} sqrt(gram_det)
    holds: tuple

    @property
    def ok(self):
        return all(self.holds)

    def as_dict(self):
        return {"norms": [math.sqrt(n) for n in self.norms_squared], "gram_det": self.gram_det,
                "bound": float(self.bound.upper()), "holds": list(self.holds)}


def gram_det(vectors) -> int:
    A = flint.fmpz_mat(_as_rows(vectors))
    return int((A * A.transpose()).det())


def is_saturated(vectors) -> bool:
    """(Q.L) cap Z^g = L, i.e. the maximal minors are coprime."""
    g = 0
    for d in maximal_minors(vectors):
        g = math.gcd(g, d)
    return g == 1


def hermite_form(vectors):
    H = flint.fmpz_mat(_as_rows(vectors)).hnf()
    return [row for row in _as_rows(H) if any(row)]


def _lagrange(u, v):
    """Gauss-Lagrange reduction of a rank-2 basis, exact."""
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    if dot(u, u) > dot(v, v):
        u, v = v, u
    while True:
        q = round(Fraction(dot(u, v), dot(u, u)))
        v = [b - q * a for a, b in zip(u, v)]
        if dot(v, v) >= dot(u, u):
            return [u, v]
        u, v = v, u


def reduced_basis(vectors):
    """Reduced basis of a saturated lattice plus its norm certificate."""
    rows = _as_rows(vectors)
    k = len(rows)
    if flint.fmpz_mat(rows).rank() != k:
        raise PreconditionError("basis vectors are linearly dependent")
    if not is_saturated(rows):
        raise PreconditionError("lattice is not saturated")
    if k == 1:
        basis = rows
    elif k == 2:
        basis = _lagrange(*rows)
    else:
        basis = _as_rows(flint.fmpz_mat(rows).lll())
    if hermite_form(basis) != hermite_form(rows):
        raise ArithmeticError("reduction changed the lattice")
    return basis, certify_basis(basis)


def certify_basis(basis) -> BasisCertificate:
    k = len(basis)
    D2 = gram_det(basis)
    norms2 = tuple(sum(x * x for x in v) for v in basis)
    if k == 1:
        # nu_1 = 2, so the bound is exactly sqrt(D2)
        holds = tuple(n <= D2 for n in norms2)
        return BasisCertificate(norms2, D2, flint.arb(D2).sqrt(), holds)
    prec = 128
    while True:
        bound = k * flint.arb(2) ** k / unit_ball_volume(k, prec) * flint.arb(D2).sqrt()
        holds = []
        decided = True
        for n in norms2:
            lhs = flint.arb(n).sqrt()
            if lhs.upper() <= bound.lower():
                holds.append(True)
            elif lhs.lower() > bound.upper():
                holds.append(False)
            else:
                decided = False
                break
        if decided:
            return BasisCertificate(norms2, D2, bound, tuple(holds))
        prec *= 2


def random_saturated_lattice(k, g, rng: random.Random, entry=6):
    """Random rank-k saturated sublattice of Z^g (rows of a random unimodular-completable matrix)."""
    while True:
        rows = [[rng.randint(-entry, entry) for _ in range(g)] for _ in range(k)]
        if flint.fmpz_mat(rows).rank() == k and is_saturated(rows):
            return rows


def matrix_entry_constant(g: int) -> flint.arb:
    """c(g) = max over 1 <= k <= g of k 2^k / nu_k."""
    return max((k * flint.arb(2) ** k / unit_ball_volume(k) for k in range(1, g + 1)),
               key=lambda a: float(a.mid()))


def matrix_from_degree_bound(degB: int, g: int, k: int = None) -> flint.arb:
    """c(g) sqrt(deg B): bound on the entries of a presenting matrix."""
    if degB < 1:
        raise PreconditionError("degree must be >= 1")
    return matrix_entry_constant(g) * flint.arb(degB).sqrt()


def pi_of_matrix(M) -> int:
    out = 1
    for row in _as_rows(M):
        for a in row:
            out *= max(1, abs(a))
    return out


def image_preimage_degree_bound(M, deg: int, direction: str = "image",
                                table: ConstantsTable = None) -> int:
    """C(k, g) Pi(M)^2 deg, for the image or the preimage under the map given by M."""
    if direction not in ("image", "preimage"):
        raise ValueError("direction must be 'image' or 'preimage'")
    if deg < 0:
        raise PreconditionError("degree must be >= 0")
    rows = _as_rows(M)
    k, g = len(rows), len(rows[0])
    if deg == 0:
        return 0
    table = table or load_constants()
    return table.image_constant(k, g) * pi_of_matrix(rows) ** 2 * deg


def sum_degree_bound(degV: int, degW: int, g: int, table: ConstantsTable = None) -> int:
    if degV < 0 or degW < 0:
        raise PreconditionError("degrees must be >= 0")
    if degV == 0 or degW == 0:
        return 0
    table = table or load_constants()
    return table.sum_constant(g) * degV * degW


def degree_toolkit(op: str, **args) -> int:
    """bezout(degV, degW), bezout2(degV, d, dimV, dimW), faltings(degV), projection(deg)."""
    if op == "bezout":
        a, b = args["degV"], args["degW"]
        if a < 0 or b < 0:
            raise PreconditionError("degrees must be >= 0")
        return a * b
    if op == "bezout2":
        degV, d, dimV, dimW = args["degV"], args["d"], args["dimV"], args["dimW"]
        if d < 1 or dimW > dimV or dimW < 0:
            raise PreconditionError("need d >= 1 and 0 <= dimW <= dimV")
        return degV * d ** (dimV - dimW)
    if op == "faltings":
        return args["degV"]
    if op == "projection":
        return args["deg"]
    raise ValueError("unknown toolkit operation %r" % op)


# ---------------------------------------------------------------------------
# graph polynomials


@dataclass(frozen=True)
class MultihomogeneousPolynomial:
    """Sparse polynomial; ``blocks`` groups variable names into projective factors."""

    terms: dict          # exponent tuple -> int
    variables: tuple
    blocks: tuple        # tuple of tuples of variable names

    def multidegree(self):
        idx = {v: i for i, v in enumerate(self.variables)}
        degs = set()
        for e in self.terms:
            degs.add(tuple(sum(e[idx[v]] for v in blk) for blk in self.blocks))
        if len(degs) != 1:
            raise ValueError("polynomial is not multihomogeneous")
        return degs.pop()

    def evaluate(self, values):
        """``values`` maps variable name to a number (int, Fraction, NFElement, ...)."""
        vals = [values[v] for v in self.variables]
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def __str__(self):
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(v if k == 1 else "%s^%d" % (v, k) for v, k in zip(self.variables, e) if k)
            parts.append("%d*%s" % (c, mon) if mon else str(c))
        return " + ".join(parts).replace("+ -", "- ") or "0"


_ADD_VARS = ("X1", "Y1", "Z1", "X2", "Y2", "Z2", "X3", "Y3", "Z3")


def addition_graph_polynomial() -> MultihomogeneousPolynomial:
    """X1Y2Z3 - Y1X2Z3 + X1Z2Y3 - Z1X2Y3 + Y1Z2X3 - Z1Y2X3 on (lambda-line, P, Q, R)."""
    monomials = [("X1", "Y2", "Z3", 1), ("Y1", "X2", "Z3", -1), ("X1", "Z2", "Y3", 1),
                 ("Z1", "X2", "Y3", -1), ("Y1", "Z2", "X3", 1), ("Z1", "Y2", "X3", -1)]
    variables = ("L", "M") + _ADD_VARS
    terms = {}
    for a, b, c, s in monomials:
        e = [0] * len(variables)
        for v in (a, b, c):
            e[variables.index(v)] += 1
        terms[tuple(e)] = s
    blocks = (("L", "M"), _ADD_VARS[:3], _ADD_VARS[3:6], _ADD_VARS[6:])
    return MultihomogeneousPolynomial(terms, variables, blocks)


def multiplication_graph_polynomial(n: int) -> MultihomogeneousPolynomial:
    """Z2 * tA_n - X2 * tB_n, multidegree (e, n^2, 1); the polynomial Z2 when n = 0."""
    variables = ("L", "M", "X1", "Y1", "Z1", "X2", "Y2", "Z2")
    blocks = (("L", "M"), ("X1", "Y1", "Z1"), ("X2", "Y2", "Z2"))
    if n == 0:
        e = [0] * 8
        e[7] = 1
        return MultihomogeneousPolynomial({tuple(e): 1}, variables, blocks)
    n = abs(n)
    A, B = division_polynomials(n)
    top = n * n
    e_lam = max(A.degree_lambda(), B.degree_lambda(), 0)
    terms = {}
    for poly, outer, sign in ((A, "Z2", 1), (B, "X2", -1)):
        for (i, j), c in poly.terms.items():
            ex = [0] * 8
            ex[0], ex[1] = j, e_lam - j
            ex[2], ex[4] = i, top - i
            ex[variables.index(outer)] = 1
            key = tuple(ex)
            terms[key] = terms.get(key, 0) + sign * int(c)
    terms = {k: v for k, v in terms.items() if v}
    return MultihomogeneousPolynomial(terms, variables, blocks)


def point_values(prefix, P):
    """Homogeneous coordinates of a LegendrePoint as a variable map.

    The ordinate must lie in the coordinate field; points stored as w*sqrt(s)
    with s not a square there are rejected.
    """
    if P.is_identity:
        return {prefix[0]: 0, prefix[1]: 1, prefix[2]: 0}
    y = P.y()
    if y is None:
        raise ValueError("ordinate w*sqrt(s) is not in the coordinate field")
    return {prefix[0]: P.x, prefix[1]: y, prefix[2]: 1}
