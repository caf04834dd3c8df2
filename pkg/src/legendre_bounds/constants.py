"""Effective constants for degree propagation, with an overridable table.

The image/preimage constant C(k, g) and the sum constant C(g) are assembled
from explicit multiprojective degree counts:

* ``hypersurface_degree``: Segre degree of a hypersurface of given
  multidegree in a product of projective spaces.
* ``fibered_power_degree(n)``: Segre degree of the n-fold fibered power of
  the Legendre surface inside P^1 x (P^2)^n, a complete intersection of n
  forms of multidegree (1, 3) in (P^1, P^2_i).

Everything is an exact integer. The table file can pin any entry; missing
keys fall back to the formulas, so a sharper derivation only needs new lines
in the table.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
import math
import re


def multinomial(*parts) -> int:
    out = math.factorial(sum(parts))
    for p in parts:
        out //= math.factorial(p)
    return out


def hypersurface_degree(multidegree, dims) -> int:
    """Segre degree of the zero locus of a form of ``multidegree`` in prod P^{dims[i]}.

    Equals sum_i d_i * (N-1)! / ((n_i - 1)! prod_{j != i} n_j!) with N = sum n_j.
    """
    if len(multidegree) != len(dims):
        raise ValueError("multidegree and dims differ in length")
    N = sum(dims)
    total = 0
    for i, (d, n) in enumerate(zip(multidegree, dims)):
        if d == 0 or n == 0:
            continue
        parts = [m for j, m in enumerate(dims) if j != i] + [n - 1]
        total += d * multinomial(*parts)
    return total


def fibered_power_degree(n: int) -> int:
    """(n+1)! 3^(n-1) (3 + n/2), the Segre degree of the n-th fibered power."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    val = Fraction(math.factorial(n + 1) * 3 ** (n - 1) * (6 + n), 2)
    return int(val)


def hypersurface_constant(n: int) -> int:
    """c_1: deg Z(f) <= c_1 * sum(multidegree) in P^1 x (P^2)^n."""
    if n < 1:
        return 1
    return math.factorial(2 * n) // 2 ** (n - 1)


def image_constant_chain(k: int, g: int) -> dict:
    """All links c_1 ... c_6 and C(k, g) for the image/preimage bound."""
    if not (1 <= k and 1 <= g):
        raise ValueError("need k >= 1 and g >= 1")
    n = g + k * (2 * g - 1)
    degE = fibered_power_degree(n)
    c1 = hypersurface_constant(n)
    # the graph of [a] and the addition graph pulled back to E^(n)
    c2 = 3 * c1 * degE
    c3 = 3 * c1 * degE
    n_add = k * max(g - 1, 0)
    c4 = c2 ** (k * g) * c3 ** n_add
    c5 = multinomial(g + 1, *([2] * k))
    c6 = multinomial(k + 1, *([2] * g))
    return {"n": n, "deg_fibered_power": degE, "c1": c1, "c2": c2, "c3": c3,
            "c4": c4, "c5": c5, "c6": c6, "C": c4 * max(c5, c6)}


@lru_cache(maxsize=None)
def image_constant_formula(k: int, g: int) -> int:
    return image_constant_chain(k, g)["C"]


def diagonal_degree(g: int) -> int:
    """Segre degree of the preimage of the diagonal of Y(2)^2 in (P^1 x (P^2)^g)^2."""
    dims = [1] + [2] * g + [1] + [2] * g
    multideg = [1] + [0] * g + [1] + [0] * g
    return hypersurface_degree(multideg, dims)


@lru_cache(maxsize=None)
def sum_constant_formula(g: int) -> int:
    """binom(2g+2, g+1) * deg(diagonal) * C(g, 2g)."""
    if g < 1:
        raise ValueError("g must be >= 1")
    return math.comb(2 * g + 2, g + 1) * diagonal_degree(g) * image_constant_formula(g, 2 * g)


# ---------------------------------------------------------------------------
# table resource

_KEY = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\(([0-9, ]*)\))?$")


@dataclass
class ConstantsTable:
    version: str
    entries: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    source: str = "<builtin>"

    def lookup(self, name: str, *idx):
        key = _make_key(name, idx)
        return self.entries.get(key)

    def image_constant(self, k: int, g: int) -> int:
        v = self.lookup("C_image", k, g)
        return int(v) if v is not None else image_constant_formula(k, g)

    def sum_constant(self, g: int) -> int:
        v = self.lookup("C_sum", g)
        return int(v) if v is not None else sum_constant_formula(g)

    def gamma_fibered(self, g: int) -> Fraction:
        v = self.lookup("gamma_fibered", g)
        if v is None:
            v = self.lookup("gamma_fibered_default")
            if v is None:
                raise KeyError("constants table has no gamma_fibered entry for g=%d" % g)
            v = v * g
        return Fraction(v)

    def proof_constant(self, i: int, g: int) -> Fraction:
        v = self.lookup("c%d" % i, g)
        if v is None:
            v = self.lookup("c%d" % i)
        if v is None:
            raise KeyError("constants table has no entry for c%d" % i)
        return Fraction(v)


def _make_key(name, idx):
    return name if not idx else "%s(%s)" % (name, ",".join(str(int(i)) for i in idx))


def parse_constants(text: str, source="<string>") -> ConstantsTable:
    """Lines ``key = value  # note``; ``version = ...`` is mandatory."""
    version = None
    entries, notes = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, note = raw.partition("#")
        line = line.strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("%s:%d: expected 'key = value'" % (source, lineno))
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "version":
            version = value
            continue
        m = _KEY.match(key.replace(" ", ""))
        if not m:
            raise ValueError("%s:%d: malformed key %r" % (source, lineno, key))
        name, idx = m.group(1), m.group(2)
        idx = tuple(int(s) for s in idx.split(",")) if idx else ()
        try:
            val = Fraction(value)
        except ValueError:
            raise ValueError("%s:%d: value %r is not an exact rational" % (source, lineno, value)) from None
        k = _make_key(name, idx)
        entries[k] = val
        if note.strip():
            notes[k] = note.strip()
    if version is None:
        raise ValueError("%s: constants table lacks a version line" % source)
    return ConstantsTable(version, entries, notes, source)


@lru_cache(maxsize=8)
def load_constants(path=None) -> ConstantsTable:
    if path is None:
        text = resources.files("legendre_bounds").joinpath("data/constants.txt").read_text()
        return parse_constants(text, "constants.txt")
    with open(path) as fh:
        return parse_constants(fh.read(), str(path))


def render_table(max_k_g=3, max_sum_g=2) -> str:
    """Regenerate the shipped table body from the formulas."""
    lines = []
    for g in range(1, max_k_g + 1):
        for k in range(1, g + 1):
            lines.append("C_image(%d,%d) = %d" % (k, g, image_constant_formula(k, g)))
    for g in range(1, max_sum_g + 1):
        lines.append("C_sum(%d) = %d" % (g, sum_constant_formula(g)))
    return "\n".join(lines)
