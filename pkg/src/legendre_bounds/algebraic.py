"""Exact algebraic numbers and explicit number fields.

``AlgebraicNumber`` is a (minimal polynomial, isolating ball) pair, suited to
single numbers. ``NumberField`` is Q[t]/(m) with a chosen primitive element;
its elements are reduced rational polynomials, which keeps curve arithmetic
and identity tests exact.
"""

from fractions import Fraction
import functools

import flint


def _fmpq(x):
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    return flint.fmpq(x)


def qpoly(coeffs) -> flint.fmpq_poly:
    """fmpq_poly from a coefficient list (low degree first) of any rational type."""
    if isinstance(coeffs, (flint.fmpq_poly, flint.fmpz_poly)):
        return flint.fmpq_poly(coeffs)
    return flint.fmpq_poly([_fmpq(c) for c in coeffs])


def to_fraction(q) -> Fraction:
    q = _fmpq(q)
    return Fraction(int(q.p), int(q.q))


def primitive_integer_poly(p) -> flint.fmpz_poly:
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    if isinstance(p, flint.fmpz_poly):
        q = p
    else:
        p = qpoly(p)
        q = flint.fmpz_poly([int(c) for c in (p * p.denom()).coeffs()]) if p.degree() >= 0 else flint.fmpz_poly([])
    coeffs = [int(c) for c in q.coeffs()]
    if not coeffs:
        raise ValueError("zero polynomial")
    g = 0
    for c in coeffs:
        g = flint.fmpz(g).gcd(c) if g else abs(c)
    g = int(g)
    if coeffs[-1] < 0:
        g = -g
    return flint.fmpz_poly([c // g for c in coeffs])


def _arb_exact(x: flint.arb) -> Fraction:
    """Exact value of an arb with zero radius (a midpoint or a radius)."""
    if x.is_zero():
        return Fraction(0)
    man, exp = (int(v) for v in x.man_exp())
    return Fraction(man) * Fraction(2) ** exp


def _ball_overlaps(a: flint.acb, b: flint.acb):
    return a.real.overlaps(b.real) and a.imag.overlaps(b.imag)


def _with_prec(prec):
    class _P:
        def __enter__(self):
            self.old = flint.ctx.prec
            flint.ctx.prec = max(prec, 53)

        def __exit__(self, *exc):
            flint.ctx.prec = self.old

    return _P()


@functools.lru_cache(maxsize=4096)
def _roots_cached(coeffs, prec):
    with _with_prec(prec):
        return tuple(r for r, _ in flint.fmpz_poly(list(coeffs)).complex_roots())


def poly_roots(p: flint.fmpz_poly, prec=64):
    """Isolating balls for the roots of a squarefree integer polynomial."""
    return _roots_cached(tuple(int(c) for c in p.coeffs()), prec)


class AlgebraicNumber:
    """A root of an irreducible primitive integer polynomial, pinned by a ball.

    The ball ``root`` contains exactly one root of ``min_poly`` and no other;
    :meth:`refine` shrinks it with interval Newton steps.
    """

    __slots__ = ("min_poly", "root", "prec")

    def __init__(self, min_poly, root: flint.acb, prec=64, _checked=False):
        self.min_poly = primitive_integer_poly(min_poly)
        if not _checked:
            content, factors = self.min_poly.factor()
            if len(factors) != 1 or factors[0][1] != 1:
                raise ValueError("minimal polynomial must be irreducible")
        self.root = root
        self.prec = prec

    # construction -----------------------------------------------------------
    @classmethod
    def from_rational(cls, q):
        q = _fmpq(q)
        p = flint.fmpz_poly([-int(q.p), int(q.q)])
        return cls(p, flint.acb(flint.arb(q)), _checked=True)

    @classmethod
    def roots_of(cls, poly, prec=64):
        """Every root of ``poly`` (any rational polynomial), grouped by factor."""
        p = primitive_integer_poly(poly)
        out = []
        for f, _ in p.factor()[1]:
            f = primitive_integer_poly(f)
            for r in poly_roots(f, prec):
                out.append(cls(f, r, prec, _checked=True))
        return out

    @classmethod
    def nearest_root(cls, poly, approx, prec=64):
        """The root of ``poly`` nearest to the complex number ``approx``."""
        cands = cls.roots_of(poly, prec)
        approx = complex(approx)
        return min(cands, key=lambda a: abs(a.approx() - approx))

    # basic data ------------------------------------------------------------
    @property
    def degree(self):
        return self.min_poly.degree()

    def is_rational(self):
        return self.degree == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        c0, c1 = (int(c) for c in self.min_poly.coeffs())
        return Fraction(-c0, c1)

    def approx(self) -> complex:
        return complex(float(self.root.real.mid()), float(self.root.imag.mid()))

    def box(self):
        """Rational corners (re_lo, re_hi, im_lo, im_hi) of the isolating box."""
        out = []
        for part in (self.root.real, self.root.imag):
            mid, rad = _arb_exact(part.mid()), _arb_exact(part.rad())
            out += [mid - rad, mid + rad]
        return tuple(out)

    def conjugates(self, prec=None):
        return poly_roots(self.min_poly, prec or self.prec)

    # refinement ------------------------------------------------------------
    def refine(self, prec):
        """A copy whose ball was tightened to roughly ``prec`` bits."""
        if prec <= self.prec:
            return self
        if self.is_rational():
            return AlgebraicNumber(self.min_poly, flint.acb(flint.arb(_fmpq(self.to_fraction()))), prec, _checked=True)
        with _with_prec(prec + 20):
            f = flint.acb_poly([flint.acb(int(c)) for c in self.min_poly.coeffs()])
            df = f.derivative()
            box = self.root
            for _ in range(200):
                m = flint.acb(box.mid())
                step = f(m) / df(box)
                new = m - step
                if not box.contains(new):
                    break
                box = new
                if box.rel_accuracy_bits() >= prec:
                    return AlgebraicNumber(self.min_poly, box, prec, _checked=True)
        # Newton could not certify; fall back to re-isolation.
        for r in poly_roots(self.min_poly, prec + 20):
            if _ball_overlaps(r, self.root):
                return AlgebraicNumber(self.min_poly, r, prec, _checked=True)
        raise ArithmeticError("lost track of the root while refining")

    # exact identity -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, AlgebraicNumber):
            try:
                other = AlgebraicNumber.from_rational(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.min_poly != other.min_poly:
            return False
        prec = max(self.prec, other.prec)
        return self.refine(prec)._root_index_at(prec) == other.refine(prec)._root_index_at(prec)

    def _root_index_at(self, prec):
        while True:
            roots = poly_roots(self.min_poly, prec)
            hits = [i for i, r in enumerate(roots) if _ball_overlaps(r, self.root)]
            if len(hits) == 1:
                return hits[0]
            prec *= 2
            self = self.refine(prec)

    def __hash__(self):
        return hash(tuple(int(c) for c in self.min_poly.coeffs()))

    # arithmetic --------------------------------------------------------------
    def _combine(self, other, poly, value):
        """Pick the factor of ``poly`` with a unique root in the ball ``value``."""
        a, b = self, other
        prec = max(a.prec, b.prec)
        for _ in range(12):
            with _with_prec(prec):
                target = value(a.root, b.root)
            cands = []
            for f, _ in primitive_integer_poly(poly).factor()[1]:
                f = primitive_integer_poly(f)
                for r in poly_roots(f, prec):
                    if _ball_overlaps(r, target):
                        cands.append((f, r))
            if len(cands) == 1:
                return AlgebraicNumber(cands[0][0], cands[0][1], prec, _checked=True)
            prec *= 2
            a, b = a.refine(prec), b.refine(prec)
        raise ArithmeticError("could not separate the result from its conjugates")

    def __add__(self, other):
        other = _coerce_alg(other)
        return self._combine(other, _res_sum(self.min_poly, other.min_poly), lambda x, y: x + y)

    __radd__ = __add__

    def __neg__(self):
        p = flint.fmpz_poly([c * (-1) ** i for i, c in enumerate(self.min_poly.coeffs())])
        return AlgebraicNumber(p, -self.root, self.prec, _checked=True)

    def __sub__(self, other):
        return self + (-_coerce_alg(other))

    def __rsub__(self, other):
        return _coerce_alg(other) - self

    def __mul__(self, other):
        other = _coerce_alg(other)
        if self.is_zero() or other.is_zero():
            return AlgebraicNumber.from_rational(0)
        return self._combine(other, _res_prod(self.min_poly, other.min_poly), lambda x, y: x * y)

    __rmul__ = __mul__

    def is_zero(self):
        return self.degree == 1 and int(self.min_poly.coeffs()[0]) == 0

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        p = flint.fmpz_poly(list(reversed(self.min_poly.coeffs())))
        with _with_prec(self.prec):
            return AlgebraicNumber(p, 1 / self.root, self.prec, _checked=True)

    def __truediv__(self, other):
        return self * _coerce_alg(other).inverse()

    def __repr__(self):
        return "AlgebraicNumber(%s, ~%s)" % (self.min_poly, self.approx())


def _coerce_alg(x):
    return x if isinstance(x, AlgebraicNumber) else AlgebraicNumber.from_rational(x)


_XY = flint.fmpz_mpoly_ctx.get(("x", "y"), "lex")


def _biv(p, sub):
    """p(sub) for a univariate integer poly p and a bivariate mpoly ``sub``."""
    out = _XY.from_dict({})
    for c in reversed(p.coeffs()):
        out = out * sub + int(c)
    return out


def _to_fmpz_poly_x(m):
    d = {}
    for (i, j), c in zip(m.monoms(), m.coeffs()):
        assert j == 0
        d[i] = int(c)
    n = max(d) if d else -1
    return flint.fmpz_poly([d.get(i, 0) for i in range(n + 1)])


def _res_sum(p, q):
    x, y = _XY.gens()
    return _to_fmpz_poly_x(_biv(p, y).resultant(_biv(q, x - y), "y"))


def _res_prod(p, q):
    x, y = _XY.gens()
    dq = q.degree()
    hom = _XY.from_dict({})
    for i, c in enumerate(q.coeffs()):
        hom += int(c) * x**i * y ** (dq - i)
    return _to_fmpz_poly_x(_biv(p, y).resultant(hom, "y"))


# ---------------------------------------------------------------------------
# number fields


_TZ = flint.fmpq_mpoly_ctx.get(("t", "z"), "lex")


class NumberField:
    """Q(theta) with theta a root of the irreducible rational polynomial ``modulus``."""

    def __init__(self, modulus, name="t"):
        m = flint.fmpq_poly(modulus)
        if m.degree() < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        m = m / m.coeffs()[-1]
        _, factors = m.factor()
        if len(factors) != 1 or factors[0][1] != 1:
            raise ValueError("defining polynomial must be irreducible")
        self.modulus = m
        self.name = name
        self.degree = m.degree()

    _Q = None

    @classmethod
    def rationals(cls):
        if cls._Q is None:
            cls._Q = cls(flint.fmpq_poly([0, 1]))
        return cls._Q

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(str(self.modulus))

    def __repr__(self):
        return "NumberField(%s)" % self.modulus

    def __call__(self, value):
        if isinstance(value, NFElement):
            if value.field != self:
                if value.field.degree == 1:
                    return NFElement(self, flint.fmpq_poly([value.rational()]))
                raise ValueError("element lives in a different field")
            return value
        if isinstance(value, (list, tuple)):
            return NFElement(self, flint.fmpq_poly([_fmpq(c) for c in value]))
        if isinstance(value, flint.fmpq_poly):
            return NFElement(self, value)
        return NFElement(self, flint.fmpq_poly([_fmpq(value)]))

    def gen(self):
        return self([0, 1]) if self.degree > 1 else self(-self.modulus.coeffs()[0])

    def integer_modulus(self):
        return primitive_integer_poly(self.modulus)

    def embeddings(self, prec=64):
        """Balls for the images of the generator under every complex embedding."""
        return poly_roots(self.integer_modulus(), prec)

    def generator_as_algebraic(self, index=0, prec=64):
        return AlgebraicNumber(self.integer_modulus(), self.embeddings(prec)[index], prec, _checked=True)


class NFElement:
    __slots__ = ("field", "poly")

    def __init__(self, field: NumberField, poly):
        self.field = field
        self.poly = flint.fmpq_poly(poly) % field.modulus

    def _lift(self, other):
        if isinstance(other, NFElement):
            if other.field is self.field or other.field == self.field:
                return other
            if other.field.degree == 1:
                return self.field(other.rational())
            if self.field.degree == 1:
                raise ValueError("mixing fields")
            raise ValueError("elements from different number fields")
        return self.field(other)

    def __add__(self, other):
        return NFElement(self.field, self.poly + self._lift(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return NFElement(self.field, self.poly - self._lift(other).poly)

    def __rsub__(self, other):
        return NFElement(self.field, self._lift(other).poly - self.poly)

    def __neg__(self):
        return NFElement(self.field, -self.poly)

    def __mul__(self, other):
        return NFElement(self.field, self.poly * self._lift(other).poly)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = self.poly.xgcd(self.field.modulus)
        return NFElement(self.field, s / g)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self):
        return self.poly.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash((str(self.field.modulus), str(self.poly)))

    def is_rational(self):
        return self.poly.degree() <= 0

    def rational(self) -> flint.fmpq:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.poly.coeffs()[0] if self.poly.degree() == 0 else flint.fmpq(0)

    def to_fraction(self) -> Fraction:
        return to_fraction(self.rational())

    def coeffs(self):
        return [to_fraction(c) for c in self.poly.coeffs()]

    def embed(self, root: flint.acb) -> flint.acb:
        """Image under the embedding sending the generator to ``root``."""
        out = flint.acb(0)
        for c in reversed(self.poly.coeffs()):
            out = out * root + flint.acb(flint.arb(c))
        return out

    def charpoly(self) -> flint.fmpq_poly:
        t, z = _TZ.gens()
        m = _uni_to_tz(self.field.modulus, t)
        g = z - _uni_to_tz(self.poly, t)
        r = m.resultant(g, "t")
        return _tz_to_z(r)

    def minpoly(self) -> flint.fmpq_poly:
        _, factors = self.charpoly().factor()
        f = factors[0][0]
        return f / f.coeffs()[-1]

    def norm(self) -> Fraction:
        c = self.charpoly()
        d = c.degree()
        return to_fraction(c.coeffs()[0] * (-1) ** d / c.coeffs()[-1])

    def to_algebraic(self, embedding=0, prec=64) -> AlgebraicNumber:
        """This element as an AlgebraicNumber under a chosen embedding."""
        mp = primitive_integer_poly(self.minpoly())
        with _with_prec(prec):
            val = self.embed(self.field.embeddings(prec)[embedding])
        return AlgebraicNumber.nearest_root(mp, complex(float(val.real.mid()), float(val.imag.mid())), prec) \
            if mp.degree() > 1 else AlgebraicNumber(mp, flint.acb(val), prec, _checked=True)

    def sqrt(self):
        """A square root inside the field, or None when there is none."""
        if self.is_zero():
            return self
        if self.is_rational():
            q = self.rational()
            if q < 0:
                if self.field.degree == 1:
                    return None
            else:
                num, den = int(q.p), int(q.q)
                rn, rd = flint.fmpz(num).isqrt(), flint.fmpz(den).isqrt()
                if rn * rn == num and rd * rd == den:
                    return self.field(flint.fmpq(int(rn), int(rd)))
                if self.field.degree == 1:
                    return None
        # roots of Y^2 - a over the field
        poly = FPoly(self.field, [-self, self.field(0), self.field(1)])
        for f in poly.factor():
            if f.degree() == 1:
                return -f.coeffs[0] / f.coeffs[1]
        return None

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.to_fraction())
        return "(%s mod %s)" % (self.poly, self.field.modulus)


def _uni_to_tz(p, var):
    out = _TZ.from_dict({})
    for c in reversed(flint.fmpq_poly(p).coeffs()):
        out = out * var + c
    return out


def _tz_to_z(r):
    d = {}
    for (i, j), c in zip(r.monoms(), r.coeffs()):
        assert i == 0
        d[j] = c
    n = max(d) if d else -1
    return flint.fmpq_poly([d.get(k, 0) for k in range(n + 1)])


class FPoly:
    """Dense univariate polynomial over a NumberField (coefficients low to high)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        cs = [field(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def monic(self):
        inv = self.coeffs[-1].inverse()
        return FPoly(self.field, [c * inv for c in self.coeffs])

    def __call__(self, x):
        out = self.field(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lead_inv = other.coeffs[-1].inverse()
        dq = other.degree()
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * lead_inv
            if c.is_zero():
                continue
            q[k - dq] = c
            for i, oc in enumerate(other.coeffs):
                rem[k - dq + i] = rem[k - dq + i] - c * oc
        return FPoly(self.field, q), FPoly(self.field, rem[:dq] if dq > 0 else [])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return FPoly(self.field, [])
        out = [self.field(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return FPoly(self.field, out)

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def shift(self, k_theta):
        """p(z - c) for the field element c = k_theta."""
        out = FPoly(self.field, [])
        lin = FPoly(self.field, [-k_theta, 1])
        for c in reversed(self.coeffs):
            out = out * lin
            out = FPoly(self.field, [(out.coeffs[0] if out.coeffs else self.field(0)) + c] + out.coeffs[1:])
        return out

    def norm(self) -> flint.fmpq_poly:
        """N_{F/Q} of the polynomial: Res_t(m(t), p(t, z))."""
        t, z = _TZ.gens()
        m = _uni_to_tz(self.field.modulus, t)
        g = _TZ.from_dict({})
        for i, c in enumerate(self.coeffs):
            g += _uni_to_tz(c.poly, t) * z**i
        if self.field.degree == 1:
            return flint.fmpq_poly([c.rational() for c in self.coeffs])
        return _tz_to_z(m.resultant(g, "t"))

    def factor(self):
        """Irreducible monic factors over the field (squarefree input assumed).

        Trager's method: shift by a multiple of the generator until the norm
        is squarefree, factor the norm over Q, then pull each factor back by a
        gcd over the field.
        """
        if self.degree() <= 1:
            return [self.monic()] if self.degree() == 1 else []
        F = self.field
        if F.degree == 1:
            q = flint.fmpq_poly([c.rational() for c in self.coeffs])
            return [FPoly(F, list((f / f.coeffs()[-1]).coeffs())) for f, _ in q.factor()[1]]
        theta = F.gen()
        for k in range(0, 50):
            shifted = self.shift(-k * theta) if k else self
            n = shifted.norm()
            if n.gcd(n.derivative()).degree() > 0:
                continue
            out = []
            for g, _ in n.factor()[1]:
                h = shifted.gcd(FPoly(F, list(g.coeffs())))
                out.append(h.shift(k * theta) if k else h)
            return [f.monic() for f in out]
        raise ArithmeticError("no squarefree norm found")

    def __repr__(self):
        return "FPoly(%s)" % self.coeffs


def _matching_root(field, index, poly_coeffs, target: AlgebraicNumber, prec=64):
    """Root in ``field`` of the rational polynomial whose embedding is ``target``."""
    f = FPoly(field, [field(c) for c in poly_coeffs])
    for _ in range(6):
        root_ball = field.embeddings(prec)[index]
        t = target.refine(prec)
        hits = []
        for fac in f.factor():
            if fac.degree() == 1:
                r = -fac.coeffs[0] / fac.coeffs[1]
                with _with_prec(prec):
                    if _ball_overlaps(r.embed(root_ball), t.root):
                        hits.append(r)
        if len(hits) == 1:
            return hits[0]
        if not hits:
            return None
        prec *= 2
    raise ArithmeticError("could not pin the embedded root")


def common_field(numbers):
    """A number field containing every AlgebraicNumber in ``numbers``.

    Returns ``(field, embedding_index, elements)``; under the embedding with
    that index each element maps to the corresponding input number.
    """
    numbers = list(numbers)
    irrational = [a for a in numbers if not a.is_rational()]
    if not irrational:
        Q = NumberField.rationals()
        return Q, 0, [Q(flint.fmpq(a.to_fraction().numerator, a.to_fraction().denominator)) for a in numbers]
    gamma = irrational[0]
    field = NumberField(gamma.min_poly)
    index = field.embeddings(gamma.prec).index(
        next(r for r in field.embeddings(gamma.prec) if _ball_overlaps(r, gamma.root)))
    for b in irrational[1:]:
        if _matching_root(field, index, b.min_poly.coeffs(), b) is not None:
            continue
        for k in range(1, 64):
            c = gamma + b * k
            new = NumberField(c.min_poly)
            roots = new.embeddings(c.prec)
            idx = [i for i, r in enumerate(roots) if _ball_overlaps(r, c.root)]
            if len(idx) != 1:
                continue
            if _matching_root(new, idx[0], gamma.min_poly.coeffs(), gamma) is not None:
                field, index, gamma = new, idx[0], c
                break
        else:
            raise ArithmeticError("no primitive element found")
    elems = []
    for a in numbers:
        if a.is_rational():
            q = a.to_fraction()
            elems.append(field(flint.fmpq(q.numerator, q.denominator)))
        else:
            elems.append(_matching_root(field, index, a.min_poly.coeffs(), a))
    return field, index, elems
