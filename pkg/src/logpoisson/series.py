"""Exact Gaussian-rational scalars and sparse truncated Laurent polynomials.

Everything symbolic in the package sits on top of two value types:

``Scalar``
    ``a + b*i`` with ``a, b`` rationals (``gmpy2.mpq``), always normalised.

``LaurentPoly``
    a finite map from exponent tuples to non-zero ``Scalar`` coefficients,
    living in a :class:`Ring` that fixes the number of coordinates, which of
    them are logarithmic (may carry bounded poles), the total-degree
    truncation and the pole bound.

Both are immutable.  Multiplication is truncated: terms of total degree above
``ring.trunc`` are dropped, so the ring is the quotient by ``m^(trunc+1)``.
"""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from gmpy2 import mpq

from .errors import ParseError, PoleBudgetError, RingMismatchError

_Q0 = mpq(0)
_Q1 = mpq(1)

MultiIndex = tuple  # tuple[int, ...]; one exponent per coordinate


# ---------------------------------------------------------------------------
# Scalars


class Scalar:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __new__(cls, re=0, im=0):
        self = object.__new__(cls)
        self.re = _to_mpq(re)
        im = _to_mpq(im)
        self.im = _Q0 if im == 0 else im
        return self

    @classmethod
    def _make(cls, re, im):
        self = object.__new__(cls)
        self.re = re
        self.im = _Q0 if im == 0 else im
        return self

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        if type(o) is not Scalar:
            o = as_scalar(o)
        if self.im is _Q0 and o.im is _Q0:
            return _make_real(self.re + o.re)
        return Scalar._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if type(o) is not Scalar:
            o = as_scalar(o)
        if self.im is _Q0 and o.im is _Q0:
            return _make_real(self.re - o.re)
        return Scalar._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return as_scalar(o) - self

    def __neg__(self):
        return Scalar._make(-self.re, -self.im)

    def __mul__(self, o):
        if type(o) is not Scalar:
            o = as_scalar(o)
        if self.im is _Q0:
            if o.im is _Q0:
                return _make_real(self.re * o.re)
            return Scalar._make(self.re * o.re, self.re * o.im)
        if o.im is _Q0:
            return Scalar._make(self.re * o.re, self.im * o.re)
        return Scalar._make(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.im is _Q0:
            if self.re == 0:
                raise ZeroDivisionError("inverse of zero scalar")
            return _make_real(1 / self.re)
        n = self.re * self.re + self.im * self.im
        return Scalar._make(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * as_scalar(o).inverse()

    def __rtruediv__(self, o):
        return as_scalar(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    # predicates / conversion ------------------------------------------------
    def __bool__(self):
        return self.re != 0 or self.im is not _Q0

    def __eq__(self, o):
        if type(o) is not Scalar:
            try:
                o = as_scalar(o)
            except TypeError:
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return self.im is _Q0

    def is_integer(self) -> bool:
        return self.im is _Q0 and self.re.denominator == 1

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Scalar({format_scalar(self)})"

    __str__ = lambda self: format_scalar(self)


def _make_real(q):
    s = object.__new__(Scalar)
    s.re = q
    s.im = _Q0
    return s


def _to_mpq(x):
    if isinstance(x, float):
        raise TypeError("floating-point values are not exact scalars")
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


def as_scalar(x) -> Scalar:
    """Coerce ints, rationals (``Fraction``/``mpq``) and scalars to ``Scalar``."""
    if type(x) is Scalar:
        return x
    if isinstance(x, (bool, float, complex)):
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")
    try:
        return _make_real(mpq(x))
    except (TypeError, ValueError):
        raise TypeError(f"cannot convert {x!r} to an exact scalar") from None


ZERO = _make_real(_Q0)
ONE = _make_real(_Q1)
I_UNIT = Scalar._make(_Q0, _Q1)


def _fmt_q(q) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical text: ``a/b`` or ``a/b+c/d*i`` / ``a/b-c/d*i``."""
    if s.im is _Q0:
        return _fmt_q(s.re)
    sign = "-" if s.im < 0 else "+"
    return f"{_fmt_q(s.re)}{sign}{_fmt_q(abs(s.im))}*i"


# ---------------------------------------------------------------------------
# Rings


@dataclass(frozen=True)
class Ring:
    """Parameters shared by all polynomials that may be combined.

    ``log_coords`` lists the coordinates (0-based) allowed to carry poles of
    order up to ``pole_bound``; all other exponents must be non-negative.
    """

    n: int
    log_coords: tuple = ()
    trunc: int = 8
    pole_bound: int = 1
    labels: tuple = None
    min_exp: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "log_coords", tuple(sorted(set(self.log_coords))))
        if any(not 0 <= k < self.n for k in self.log_coords):
            raise ValueError("log coordinate index out of range")
        if self.pole_bound < 0:
            raise ValueError("pole_bound must be non-negative")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"z{k + 1}" for k in range(self.n)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise ValueError("labels must be n distinct names")
        object.__setattr__(self, "min_exp", tuple(
            -self.pole_bound if k in self.log_coords else 0 for k in range(self.n)))

    @property
    def r(self) -> int:
        return len(self.log_coords)

    def replace(self, **kw) -> "Ring":
        args = dict(n=self.n, log_coords=self.log_coords, trunc=self.trunc,
                    pole_bound=self.pole_bound, labels=self.labels)
        args.update(kw)
        return Ring(**args)

    def with_trunc(self, trunc: int) -> "Ring":
        return self if trunc == self.trunc else self.replace(trunc=trunc)

    def with_pole_bound(self, pb: int) -> "Ring":
        return self if pb == self.pole_bound else self.replace(pole_bound=pb)

    # convenience constructors
    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return LaurentPoly.constant(self, ONE)

    def var(self, k: int) -> "LaurentPoly":
        e = [0] * self.n
        e[k] = 1
        return LaurentPoly.monomial(self, tuple(e))

    def gens(self):
        return [self.var(k) for k in range(self.n)]


# ---------------------------------------------------------------------------
# Laurent polynomials

_add = operator.add


class LaurentPoly:
    """Sparse truncated multivariate Laurent polynomial over Q(i)."""

    __slots__ = ("ring", "terms", "_buckets", "_neg")

    def __init__(self, ring: Ring, terms: Mapping | None = None):
        clean = {}
        if terms:
            n, T, lo = ring.n, ring.trunc, ring.min_exp
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for n={n}")
                c = as_scalar(c)
                if not c:
                    continue
                if sum(e) > T:
                    continue
                _check_exponent(ring, e, lo)
                clean[e] = clean[e] + c if e in clean else c
            clean = {e: c for e, c in clean.items() if c}
        self.ring = ring
        self.terms = clean
        self._buckets = None
        self._neg = None

    @classmethod
    def _raw(cls, ring, terms):
        self = object.__new__(cls)
        self.ring = ring
        self.terms = terms
        self._buckets = None
        self._neg = None
        return self

    @classmethod
    def constant(cls, ring: Ring, c) -> "LaurentPoly":
        c = as_scalar(c)
        return cls._raw(ring, {(0,) * ring.n: c} if c else {})

    @classmethod
    def monomial(cls, ring: Ring, exp, c=ONE) -> "LaurentPoly":
        return cls(ring, {tuple(exp): c})

    # structure ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    __bool__ = lambda self: bool(self.terms)

    def coefficient(self, exp) -> Scalar:
        return self.terms.get(tuple(exp), ZERO)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.ring.n, ZERO)

    def has_negative(self) -> bool:
        if self._neg is None:
            self._neg = any(x < 0 for e in self.terms for x in e)
        return self._neg

    def degrees(self):
        return sorted({sum(e) for e in self.terms})

    def min_degree(self):
        return min((sum(e) for e in self.terms), default=None)

    def max_degree(self):
        return max((sum(e) for e in self.terms), default=None)

    def homogeneous_part(self, d: int) -> "LaurentPoly":
        return LaurentPoly._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def sorted_terms(self):
        """Terms in canonical order: descending lexicographic on exponents."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def in_ring(self, ring: Ring) -> "LaurentPoly":
        """Re-embed into another ring with the same ``n`` (truncating if needed)."""
        if ring is self.ring:
            return self
        if ring.n != self.ring.n:
            raise RingMismatchError("cannot move a polynomial between rings of different dimension")
        lo, T = ring.min_exp, ring.trunc
        out = {}
        for e, c in self.terms.items():
            if sum(e) > T:
                continue
            _check_exponent(ring, e, lo)
            out[e] = c
        return LaurentPoly._raw(ring, out)

    def _bucket(self):
        if self._buckets is None:
            b = {}
            for e, c in self.terms.items():
                b.setdefault(sum(e), []).append((e, c))
            self._buckets = sorted(b.items())
        return self._buckets

    # arithmetic -----------------------------------------------------------------
    def _coerce(self, o):
        if isinstance(o, LaurentPoly):
            if o.ring is not self.ring and o.ring != self.ring:
                raise RingMismatchError(f"incompatible rings {self.ring} vs {o.ring}")
            return o
        return LaurentPoly.constant(self.ring, as_scalar(o))

    def __add__(self, o):
        o = self._coerce(o)
        if not o.terms:
            return self
        if not self.terms:
            return o if o.ring is self.ring else LaurentPoly._raw(self.ring, o.terms)
        out = dict(self.terms)
        for e, c in o.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return LaurentPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def scale(self, c) -> "LaurentPoly":
        c = as_scalar(c)
        if not c:
            return LaurentPoly._raw(self.ring, {})
        if c == ONE:
            return self
        return LaurentPoly._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, LaurentPoly):
            return self.scale(o)
        o = self._coerce(o)
        if not self.terms or not o.terms:
            return LaurentPoly._raw(self.ring, {})
        if len(o.terms) == 1:
            (e, c), = o.terms.items()
            return self.mul_monomial(e, c)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return o.mul_monomial(e, c)
        ring = self.ring
        T = ring.trunc
        out = {}
        get = out.get
        for da, ta in self._bucket():
            lim = T - da
            for db, tb in o._bucket():
                if db > lim:
                    break
                for ea, ca in ta:
                    for eb, cb in tb:
                        e = tuple(map(_add, ea, eb))
                        prev = get(e)
                        out[e] = ca * cb if prev is None else prev + ca * cb
        out = {e: c for e, c in out.items() if c}
        if self.has_negative() or o.has_negative():
            lo = ring.min_exp
            for e in out:
                _check_exponent(ring, e, lo)
        return LaurentPoly._raw(ring, out)

    __rmul__ = __mul__

    def mul_monomial(self, exp, c=ONE) -> "LaurentPoly":
        """Multiply by ``c * z^exp`` (fast path, no full product)."""
        ring = self.ring
        T = ring.trunc
        d = sum(exp)
        c = as_scalar(c)
        if not c:
            return LaurentPoly._raw(ring, {})
        out = {}
        check = any(x < 0 for x in exp) or self.has_negative()
        lo = ring.min_exp
        one = c == ONE
        for e, v in self.terms.items():
            if sum(e) + d > T:
                continue
            ne = tuple(map(_add, e, exp))
            if check:
                _check_exponent(ring, ne, lo)
            out[ne] = v if one else v * c
        return LaurentPoly._raw(ring, out)

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers only for monomials")
            (e, c), = self.terms.items()
            return LaurentPoly(self.ring, {tuple(k * x for x in e): c ** k})
        out = LaurentPoly.constant(self.ring, ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def partial(self, k: int) -> "LaurentPoly":
        """Exact term-wise derivative along coordinate ``k``."""
        ring = self.ring
        if not 0 <= k < ring.n:
            raise IndexError(f"coordinate {k} out of range")
        lo = ring.min_exp[k]
        out = {}
        for e, c in self.terms.items():
            a = e[k]
            if a == 0:
                continue
            if a - 1 < lo:
                raise PoleBudgetError(
                    f"derivative of {ring.labels[k]}^{a} exceeds the pole bound {ring.pole_bound}")
            ne = e[:k] + (a - 1,) + e[k + 1:]
            out[ne] = c * a
        return LaurentPoly._raw(ring, out)

    def euler(self, k: int) -> "LaurentPoly":
        """``z_k * d/dz_k``: multiplies each term by its ``k``-th exponent."""
        return LaurentPoly._raw(self.ring, {e: c * e[k] for e, c in self.terms.items() if e[k]})

    def shift(self, k: int, s: int) -> "LaurentPoly":
        """Multiply by ``z_k^s`` (``s`` may be negative)."""
        e = [0] * self.ring.n
        e[k] = s
        return self.mul_monomial(tuple(e))

    def divisible_by(self, k: int) -> bool:
        return all(e[k] >= 1 for e in self.terms)

    def at_zero(self, k: int) -> "LaurentPoly":
        """Restriction to ``z_k = 0`` of the holomorphic-in-``z_k`` part.

        Terms with a negative power of ``z_k`` make the restriction undefined.
        """
        if any(e[k] < 0 for e in self.terms):
            raise PoleBudgetError(f"restriction to {self.ring.labels[k]}=0 of a polar expression")
        return LaurentPoly._raw(self.ring, {e: c for e, c in self.terms.items() if e[k] == 0})

    def evaluate(self, point) -> Scalar:
        point = [as_scalar(p) for p in point]
        if len(point) != self.ring.n:
            raise ValueError("point has wrong length")
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    if a < 0 and not x:
                        raise ZeroDivisionError("evaluation at a pole")
                    v = v * x ** a
            total = total + v
        return total

    def holomorphy_class(self, allowance: Mapping[int, int] | None = None) -> str:
        """``holomorphic`` / ``logarithmic_only`` / ``genuine_pole``.

        ``allowance`` maps a coordinate to the most negative exponent the
        caller's frame position tolerates (e.g. ``{0: -1}``).
        """
        allowance = allowance or {}
        holo = True
        for e in self.terms:
            for k, a in enumerate(e):
                if a < 0:
                    holo = False
                    if a < allowance.get(k, 0):
                        return "genuine_pole"
        return "holomorphic" if holo else "logarithmic_only"

    # comparison / text ----------------------------------------------------------
    def __eq__(self, o):
        if isinstance(o, LaurentPoly):
            return self.ring == o.ring and self.terms == o.terms
        try:
            return self.terms == LaurentPoly.constant(self.ring, as_scalar(o)).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r})"


def _check_exponent(ring, e, lo):
    for k, (a, m) in enumerate(zip(e, lo)):
        if a < m:
            if k in ring.log_coords:
                raise PoleBudgetError(
                    f"exponent {a} on {ring.labels[k]} exceeds the pole bound {ring.pole_bound}")
            raise PoleBudgetError(f"negative exponent on non-logarithmic coordinate {ring.labels[k]}")


def format_poly(p: LaurentPoly) -> str:
    """Canonical text ``coeff*z1^e1*...`` joined by ``+``; zero prints ``0``."""
    if not p.terms:
        return "0"
    labels = p.ring.labels
    parts = []
    for e, c in p.sorted_terms():
        cs = format_scalar(c)
        if not c.is_real:
            cs = f"({cs})"
        factors = [cs]
        for lab, a in zip(labels, e):
            if a == 1:
                factors.append(lab)
            elif a:
                factors.append(f"{lab}^{a}")
        parts.append("*".join(factors))
    return "+".join(parts)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+[eE][-+]?\d+)|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Lexer:
    def __init__(self, text, line=0, col0=1):
        self.toks = []
        for m in _TOKEN.finditer(text):
            col = col0 + m.start(m.lastindex)
            if m.group(1):
                raise ParseError(f"floating-point literal {m.group(1)!r} rejected; use an exact fraction like 1/2",
                                 line, col)
            if m.group(2):
                self.toks.append(("int", int(m.group(2)), col))
            elif m.group(3):
                self.toks.append(("name", m.group(3), col))
            elif m.group(4) and not m.group(4).isspace():
                self.toks.append(("op", m.group(4), col))
        self.i = 0
        self.line = line
        self.end_col = col0 + len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None, self.end_col)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])


def parse_poly(text: str, ring: Ring, *, line: int = 0, col: int = 1) -> LaurentPoly:
    """Parse an exact polynomial expression in the ring's labels.

    Accepts ``+ - * / ^``, parentheses, integers, ``i``; division only by a
    non-zero constant or a single monomial.  Floating-point literals and
    unknown names are rejected.
    """
    lx = _Lexer(text, line, col)
    if lx.peek()[0] == "eof":
        raise lx.error("empty expression")
    names = {lab: k for k, lab in enumerate(ring.labels)}
    val = _expr(lx, ring, names)
    if lx.peek()[0] != "eof":
        raise lx.error(f"unexpected {lx.peek()[1]!r}")
    return val


def parse_scalar(text: str, *, line: int = 0, col: int = 1) -> Scalar:
    """Parse an exact Gaussian-rational literal such as ``-3/4+1/2*i``."""
    p = parse_poly(text, _SCALAR_RING, line=line, col=col)
    return p.constant_term()


_SCALAR_RING = Ring(0, trunc=0, pole_bound=0)


def _expr(lx, ring, names):
    val = _term(lx, ring, names)
    while lx.peek()[:2] in (("op", "+"), ("op", "-")):
        op = lx.next()[1]
        rhs = _term(lx, ring, names)
        val = val + rhs if op == "+" else val - rhs
    return val


def _term(lx, ring, names):
    val = _unary(lx, ring, names)
    while lx.peek()[:2] in (("op", "*"), ("op", "/")):
        tok = lx.next()
        rhs = _unary(lx, ring, names)
        if tok[1] == "*":
            val = val * rhs
        else:
            if len(rhs.terms) != 1:
                raise lx.error("division only by a non-zero constant or a monomial", tok)
            val = val * (rhs ** -1)
    return val


def _unary(lx, ring, names):
    if lx.peek()[:2] == ("op", "-"):
        lx.next()
        return -_unary(lx, ring, names)
    if lx.peek()[:2] == ("op", "+"):
        lx.next()
        return _unary(lx, ring, names)
    return _power(lx, ring, names)


def _power(lx, ring, names):
    base = _atom(lx, ring, names)
    if lx.peek()[:2] == ("op", "^"):
        lx.next()
        sign = 1
        if lx.peek()[:2] == ("op", "-"):
            lx.next()
            sign = -1
        tok = lx.next()
        if tok[0] != "int":
            raise lx.error("integer exponent expected", tok)
        k = sign * tok[1]
        if k < 0 and len(base.terms) != 1:
            raise lx.error("negative exponent only allowed on a monomial", tok)
        try:
            return base ** k
        except PoleBudgetError as exc:
            raise lx.error(str(exc), tok) from None
    return base


def _atom(lx, ring, names):
    tok = lx.next()
    kind, val, _ = tok
    if kind == "int":
        return LaurentPoly.constant(ring, val)
    if kind == "name":
        if val == "i":
            return LaurentPoly.constant(ring, I_UNIT)
        if val in names:
            return ring.var(names[val])
        raise lx.error(f"unknown symbol {val!r} (irrational or undeclared names are rejected)", tok)
    if kind == "op" and val == "(":
        inner = _expr(lx, ring, names)
        close = lx.next()
        if close[:2] != ("op", ")"):
            raise lx.error("expected ')'", close)
        return inner
    raise lx.error(f"unexpected {val!r}" if kind != "eof" else "unexpected end of expression", tok)


def polys_equal_mod(a: LaurentPoly, b: LaurentPoly, degree: int) -> bool:
    """``a == b`` modulo terms of total degree >= ``degree``."""
    d = a - b
    return all(sum(e) >= degree for e in d.terms)


def poly_from_terms(ring: Ring, items: Iterable) -> LaurentPoly:
    return LaurentPoly(ring, dict(items))
