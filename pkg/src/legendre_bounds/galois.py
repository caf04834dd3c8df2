"""Galois action on torsion modelled by homotheties of (Z/N)^{2g}.

Only the image of Galois in (Z/N)^* acting by scalar multiplication is
modelled. The two bound formulas on orbit sizes come from different
hypotheses and are both exposed:

* ``"theorem"``:    phi(N) / (2 C (2c)^omega(N)) for multipliers a^{2c}, a in G,
                    G of index <= C; for c = 1 this is phi(N) / (2^omega(N) 2 C).
* ``"conjugates"``: phi(N) / (2 C c^omega(N)) for multipliers a^c.

Both follow from |ker(x -> x^m)| <= 2 m^omega(N) in (Z/N)^*, the factor 2
coming from the non-cyclic 2-part.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools
import math
import random

from . import kernels
from .arith import euler_phi, omega
from .logbound import LogBound, LogExpr


class DomainError(ValueError):
    pass


def units(N: int):
    return [a for a in range(1, N) if math.gcd(a, N) == 1] if N > 1 else [0]


@dataclass(frozen=True)
class TorsionModule:
    N: int
    rank: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("modulus must be >= 2")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    def element(self, coords):
        coords = tuple(int(c) % self.N for c in coords)
        if len(coords) != self.rank:
            raise DomainError("element has %d coordinates, module rank is %d" % (len(coords), self.rank))
        return coords

    def order(self, p):
        g = self.N
        for c in p:
            g = math.gcd(g, c)
        return self.N // g


class HomothetySubgroup:
    """Subgroup of (Z/N)^* generated by ``generators``."""

    def __init__(self, N: int, generators=None):
        self.N = N
        gens = [int(a) % N for a in (generators if generators is not None else units(N))]
        for a in gens:
            if math.gcd(a, N) != 1:
                raise ValueError("%d is not a unit modulo %d" % (a, N))
        self.generators = tuple(sorted(set(gens)))
        self.elements = _closure(N, self.generators)

    @classmethod
    def full(cls, N):
        return cls(N, units(N))

    @property
    def order(self):
        return len(self.elements)

    def index(self):
        return euler_phi(self.N) // self.order if self.N > 2 else 1

    def powers(self, e):
        return sorted({pow(a, e, self.N) for a in self.elements})


def _closure(N, gens):
    elems = {1 % N}
    frontier = [1 % N]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % N
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def orbit(p, G: HomothetySubgroup, c: int, module: TorsionModule = None):
    """{a^{2c} p : a in G}."""
    if c < 1:
        raise ValueError("c must be >= 1")
    module = module or TorsionModule(G.N, len(p))
    if module.N != G.N:
        raise DomainError("modulus mismatch: module N=%d, group N=%d" % (module.N, G.N))
    p = module.element(p)
    return {tuple(m * x % G.N for x in p) for m in G.powers(2 * c)}


def orbit_lower_bound(N: int, C: int) -> Fraction:
    """phi(N) / (2^omega(N) * 2C)."""
    if N < 2 or C < 1:
        raise ValueError("need N >= 2 and C >= 1")
    return Fraction(euler_phi(N), 2 ** omega(N) * 2 * C)


def bound_formula(kind: str, N: int, C: int, c: int) -> Fraction:
    w = omega(N)
    if kind == "theorem":
        return Fraction(euler_phi(N), 2 * C * (2 * c) ** w)
    if kind == "conjugates":
        return Fraction(euler_phi(N), 2 * C * c**w)
    raise ValueError("unknown bound formula %r" % kind)


def _exponent(kind, c):
    return 2 * c if kind == "theorem" else c


@lru_cache(maxsize=256)
def subgroups_of_units(N: int):
    """All subgroups of (Z/N)^*, as frozensets, built by joining cyclic ones."""
    cyc = {_closure(N, (a,)) for a in units(N)}
    subs = set(cyc)
    frontier = set(cyc)
    while frontier:
        new = set()
        for H in frontier:
            for K in cyc:
                if not K <= H:
                    J = _closure(N, tuple(H | K))
                    if J not in subs:
                        new.add(J)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda s: (-len(s), sorted(s)))


@dataclass(frozen=True)
class OrbitCheck:
    N: int
    C: int
    c: int
    formula: str
    bound: Fraction
    ok: bool
    sampled: bool
    subgroups_checked: int
    min_orbit: int

    def as_dict(self):
        return {"N": self.N, "C": self.C, "c": self.c, "formula": self.formula,
                "bound": str(self.bound), "ok": self.ok, "sampled": self.sampled,
                "subgroups_checked": self.subgroups_checked, "min_orbit": self.min_orbit}


EXHAUSTIVE_LIMIT = 200


def verify_orbit_bound(N: int, C: int, c: int, samples: int = 64, formula: str = "theorem",
                       seed: int = 0, full_group_only: bool = False) -> OrbitCheck:
    """Every order-N point of (Z/N)^2 has orbit >= bound under each subgroup of index <= C."""
    bound = bound_formula(formula, N, C, c)
    e = _exponent(formula, c)
    phi = euler_phi(N) if N > 2 else 1
    sampled = N > EXHAUSTIVE_LIMIT
    if full_group_only:
        groups = [frozenset(units(N))]
    elif not sampled:
        groups = [H for H in subgroups_of_units(N) if phi // len(H) <= C]
    else:
        rng = random.Random(seed)
        us = units(N)
        groups = {frozenset(us)}
        for _ in range(samples * 8):
            if len(groups) >= samples:
                break
            H = _closure(N, tuple(rng.sample(us, rng.randint(1, 3))))
            if phi // len(H) <= C:
                groups.add(H)
        groups = sorted(groups, key=lambda s: sorted(s))
    orders = kernels.point_orders(N)
    full_order = orders == N
    min_orbit = None
    ok = True
    for H in groups:
        mults = sorted({pow(a, e, N) for a in H})
        sizes = kernels.orbit_sizes(N, mults)
        m = int(sizes[full_order].min())
        min_orbit = m if min_orbit is None else min(min_orbit, m)
        if m < bound:
            ok = False
    return OrbitCheck(N, C, c, formula, bound, ok, sampled, len(groups), min_orbit or 0)


def homotheties_preserve_submodules(N: int, g: int):
    """Exhaustive b<v> = <v> over cyclic submodules of (Z/N)^{2g}; returns (count, failures)."""
    return kernels.cyclic_submodule_sweep(N, 2 * g, units(N))


# ---------------------------------------------------------------------------
# quotient descent


def span(N: int, gens, rank: int):
    """The Z-submodule of (Z/N)^rank generated by ``gens``."""
    S = {tuple([0] * rank)}
    frontier = list(S)
    gens = [tuple(int(x) % N for x in v) for v in gens]
    while frontier:
        nxt = []
        for v in frontier:
            for w in gens:
                u = tuple((a + b) % N for a, b in zip(v, w))
                if u not in S:
                    S.add(u)
                    nxt.append(u)
        frontier = nxt
    return frozenset(S)


@dataclass(frozen=True)
class InducedAction:
    N: int
    b: int
    submodule: frozenset
    preserved: bool
    well_defined: bool
    mapping: dict          # coset representative -> image representative

    @property
    def submodule_size(self):
        return len(self.submodule)

    @property
    def quotient_size(self):
        return len(self.mapping)

    def is_multiplication_by(self, b):
        return all(img == _coset_rep(self.submodule, tuple(b * x % self.N for x in rep), self.N)
                   for rep, img in self.mapping.items())


def _coset_rep(S, v, N):
    return min(tuple((a + s) % N for a, s in zip(v, t)) for t in S)


def quotient_descent(b: int, gens, N: int, rank: int = None) -> InducedAction:
    """Check b S = S and return the map induced by multiplication by b on (Z/N)^r / S."""
    if math.gcd(b, N) != 1:
        raise ValueError("b must be a unit modulo N")
    rank = rank or len(gens[0])
    S = span(N, gens, rank)
    preserved = {tuple(b * x % N for x in v) for v in S} == S
    mapping = {}
    well_defined = True
    for v in itertools.product(range(N), repeat=rank):
        rep = _coset_rep(S, v, N)
        img = _coset_rep(S, tuple(b * x % N for x in v), N)
        if mapping.setdefault(rep, img) != img:
            well_defined = False
    return InducedAction(N, b, S, preserved, well_defined, mapping)


def squaring_rule(b: int, N: int) -> int:
    """b^2 mod N: applying the homothety twice."""
    if math.gcd(b, N) != 1:
        raise ValueError("b is not a unit modulo N")
    return b * b % N


# ---------------------------------------------------------------------------
# explicit Serre constants


@dataclass(frozen=True)
class SerreConstantParams:
    is_cm: bool
    deg_K: int = 1
    deg_K_over_Qj: int = 1
    h_E0: Fraction = Fraction(0)

    def __post_init__(self):
        if self.deg_K < 1 or self.deg_K_over_Qj < 1:
            raise ValueError("field degrees must be >= 1")
        if self.deg_K_over_Qj > self.deg_K:
            raise ValueError("[K:Q(j)] cannot exceed [K:Q]")
        object.__setattr__(self, "h_E0", Fraction(self.h_E0))


NON_CM_CONSTANT = Fraction(19 * 10**9)
NON_CM_EXPONENT = 12395


def serre_constant_bound(params: SerreConstantParams) -> LogBound:
    """CM: 6 [K:Q(j)]. Non-CM: exp(1.9e10) (deg_K max{1, h, ln deg_K})^12395."""
    if params.is_cm:
        return LogBound.from_rational(6 * params.deg_K_over_Qj)
    d, h = params.deg_K, params.h_E0
    # ln max{1, h, ln d}, compared exactly in log space
    inner = LogExpr()
    candidates = []
    if h > 1:
        candidates.append(LogExpr.ln(h))
    if d >= 3:
        candidates.append(LogExpr.lnln(d))
    for cand in candidates:
        if (cand - inner).sign() > 0:
            inner = cand
    expr = LogExpr.const(NON_CM_CONSTANT) + (LogExpr.ln(d) + inner) * NON_CM_EXPONENT
    return LogBound.exp(expr)
