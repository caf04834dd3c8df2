"""Log-space numbers: exact symbolic logarithms of astronomically large bounds.

A :class:`LogBound` stores ``exp(L)`` where ``L`` is a finite rational linear
combination of *atoms*:

* ``ONE``            the number 1,
* ``("ln", p)``      ln p for a prime p,
* ``("pow", b, q)``  b**q for an integer b > 1 that is not a perfect power
                     and a non-integral rational q,
* ``("lnln", k)``    ln ln k for an integer k >= 3.

Rationals are factored into ``ln p`` atoms, so two LogBounds with equal value
built through different routes usually have identical expressions and compare
equal without any numerics. Otherwise the sign of the difference is decided
with ball arithmetic at increasing precision.
"""

from fractions import Fraction
import functools
import math
import re

import flint

ONE = ("one",)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite input")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _int_root(b):
    """Write b = r**k with k maximal."""
    for k in range(int(math.log2(b)), 1, -1):
        r = round(b ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand > 1 and cand**k == b:
                return cand, k
    return b, 1


class LogExpr:
    """Immutable rational combination of atoms, kept in canonical form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for atom, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                clean[atom] = clean.get(atom, Fraction(0)) + c
        self.terms = {a: c for a, c in clean.items() if c}

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, q):
        return cls({ONE: q})

    @classmethod
    def ln(cls, q):
        """ln q for a positive rational q, split into prime logarithms."""
        q = _as_fraction(q)
        if q <= 0:
            raise ValueError("ln of a non-positive number")
        terms = {}
        for n, sign in ((q.numerator, 1), (q.denominator, -1)):
            if n > 1:
                for p, e in flint.fmpz(n).factor():
                    atom = ("ln", int(p))
                    terms[atom] = terms.get(atom, 0) + sign * int(e)
        return cls(terms)

    @classmethod
    def power(cls, base, q):
        """The real number base**q (base a positive integer, q rational)."""
        base, q = int(base), _as_fraction(q)
        if base < 1:
            raise ValueError("power atom needs a positive integer base")
        if base == 1 or q == 0:
            return cls.const(1)
        r, k = _int_root(base)
        q = q * k
        if q.denominator == 1:
            return cls.const(r ** int(q)) if q > 0 else cls.const(Fraction(1, r ** int(-q)))
        return cls({("pow", r, q): 1})

    @classmethod
    def lnln(cls, k):
        k = int(k)
        if k < 3:
            raise ValueError("ln ln k is only used for k >= 3")
        return cls({("lnln", k): 1})

    # algebra ---------------------------------------------------------------
    def __add__(self, other):
        other = other if isinstance(other, LogExpr) else LogExpr.const(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, Fraction(0)) + c
        return LogExpr(terms)

    __radd__ = __add__

    def __neg__(self):
        return LogExpr({a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-(other if isinstance(other, LogExpr) else LogExpr.const(other)))

    def __mul__(self, k):
        k = _as_fraction(k)
        return LogExpr({a: c * k for a, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LogExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, atom) -> Fraction:
        return self.terms.get(atom, Fraction(0))

    def is_zero(self):
        return not self.terms

    # numerics --------------------------------------------------------------
    def arb(self):
        """Ball enclosure at the current ``flint.ctx.prec``."""
        total = flint.arb(0)
        for atom, c in self.terms.items():
            total += _atom_arb(atom) * flint.arb(flint.fmpq(c.numerator, c.denominator))
        return total

    def sign(self, max_prec=4096):
        if not self.terms:
            return 0
        old = flint.ctx.prec
        try:
            prec = 64
            while prec <= max_prec:
                flint.ctx.prec = prec
                v = self.arb()
                if v > 0:
                    return 1
                if v < 0:
                    return -1
                prec *= 4
        finally:
            flint.ctx.prec = old
        raise ArithmeticError("sign of %s undecided at %d bits" % (self, max_prec))

    def __float__(self):
        old = flint.ctx.prec
        try:
            flint.ctx.prec = 128
            return float(self.arb().mid())
        finally:
            flint.ctx.prec = old

    # text ------------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for atom in sorted(self.terms, key=_atom_key):
            parts.append("%s*%s" % (self.terms[atom], _atom_str(atom)))
        return " + ".join(parts)

    __repr__ = __str__

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text == "0":
            return cls()
        terms = {}
        for part in text.split(" + "):
            m = _TERM_RE.fullmatch(part.strip())
            if not m:
                raise ValueError("bad log-expression term %r" % part)
            coeff = Fraction(m.group(1))
            name, args = m.group(2), m.group(3)
            if name == "1":
                atom = ONE
            elif name == "ln":
                atom = ("ln", int(args))
            elif name == "lnln":
                atom = ("lnln", int(args))
            else:
                b, q = args.split(",")
                atom = ("pow", int(b), Fraction(q))
            terms[atom] = terms.get(atom, 0) + coeff
        return cls(terms)


_TERM_RE = re.compile(r"(-?\d+(?:/\d+)?)\*(1|ln|lnln|pow)(?:\(([^)]*)\))?")


def _atom_key(atom):
    order = {"one": 0, "ln": 1, "pow": 2, "lnln": 3}
    return (order[atom[0]],) + tuple(str(x) for x in atom[1:])


def _atom_str(atom):
    kind = atom[0]
    if kind == "one":
        return "1"
    if kind == "pow":
        return "pow(%d,%s)" % (atom[1], atom[2])
    return "%s(%d)" % (kind, atom[1])


@functools.lru_cache(maxsize=None)
def _atom_arb_cached(atom, prec):
    kind = atom[0]
    if kind == "one":
        return flint.arb(1)
    if kind == "ln":
        return flint.arb(atom[1]).log()
    if kind == "lnln":
        return flint.arb(atom[1]).log().log()
    q = atom[2]
    return (flint.arb(atom[1]).log() * flint.arb(flint.fmpq(q.numerator, q.denominator))).exp()


def _atom_arb(atom):
    return _atom_arb_cached(atom, flint.ctx.prec)


@functools.total_ordering
class LogBound:
    """A non-negative real ``exp(log_value)`` (or exactly 0) kept in log space."""

    __slots__ = ("log_value", "is_zero")

    def __init__(self, log_value=None, is_zero=False):
        self.is_zero = bool(is_zero)
        self.log_value = None if self.is_zero else (log_value if log_value is not None else LogExpr())

    @classmethod
    def zero(cls):
        return cls(is_zero=True)

    @classmethod
    def from_rational(cls, q):
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("LogBound values are non-negative")
        if q == 0:
            return cls.zero()
        return cls(LogExpr.ln(q))

    @classmethod
    def exp(cls, expr):
        """``exp(expr)`` for a LogExpr or a rational."""
        if not isinstance(expr, LogExpr):
            expr = LogExpr.const(expr)
        return cls(expr)

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, LogBound) else cls.from_rational(x)

    # algebra ---------------------------------------------------------------
    def __mul__(self, other):
        other = LogBound.coerce(other)
        if self.is_zero or other.is_zero:
            return LogBound.zero()
        return LogBound(self.log_value + other.log_value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = LogBound.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogBound")
        if self.is_zero:
            return self
        return LogBound(self.log_value - other.log_value)

    def __pow__(self, k):
        k = _as_fraction(k)
        if self.is_zero:
            if k <= 0:
                raise ValueError("0 to a non-positive power")
            return self
        return LogBound(self.log_value * k)

    # ordering --------------------------------------------------------------
    def compare(self, other) -> int:
        other = LogBound.coerce(other)
        if self.is_zero or other.is_zero:
            return (not self.is_zero) - (not other.is_zero)
        return (self.log_value - other.log_value).sign()

    def __eq__(self, other):
        try:
            return self.compare(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __hash__(self):
        return hash((self.is_zero, self.log_value))

    def identical(self, other):
        """Exact equality of the stored expressions (no numerics)."""
        return self.is_zero == other.is_zero and self.log_value == other.log_value

    # display ---------------------------------------------------------------
    def ln(self) -> float:
        return float("-inf") if self.is_zero else float(self.log_value)

    def log10(self) -> float:
        return self.ln() / math.log(10)

    def display(self) -> str:
        if self.is_zero:
            return "0"
        ln = self.ln()
        if ln < 700:
            return "%.6g" % math.exp(ln)
        return "10^%.6g" % (ln / math.log(10))

    def to_expr(self) -> str:
        return "0" if self.is_zero else "exp(%s)" % self.log_value

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text == "0":
            return cls.zero()
        if not (text.startswith("exp(") and text.endswith(")")):
            raise ValueError("LogBound text must be '0' or 'exp(...)'")
        return cls(LogExpr.parse(text[4:-1]))

    def record(self):
        return {"log_value": str(self.log_value) if not self.is_zero else None,
                "ln": None if self.is_zero else self.ln(),
                "log10": None if self.is_zero else self.log10(),
                "display": self.display()}

    def __repr__(self):
        return "LogBound(%s)" % self.to_expr()


def lb_max(*values):
    vals = [LogBound.coerce(v) for v in values]
    best = vals[0]
    for v in vals[1:]:
        if v > best:
            best = v
    return best
