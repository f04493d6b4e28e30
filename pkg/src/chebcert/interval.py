"""Outward-rounded interval arithmetic.

Endpoints are IEEE doubles by default.  Rounding direction is obtained
without touching the FPU mode: sums and products are computed in round to
nearest and the exact rounding error is recovered with error-free
transformations (TwoSum, Dekker's product), which tells us whether the
rounded result must be nudged by one ulp.  Library transcendentals are
trusted to one ulp and widened by two.

A multiprecision mode is available through :func:`working_precision`; with
more than 53 bits every operation is delegated to mpmath's interval
context and endpoints become ``mpmath.mpf`` values.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import math
import re
import sys
import threading
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction

import mpmath
from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "Interval",
    "ComplexBox",
    "CONST",
    "Adjudication",
    "PrintedValue",
    "IntervalError",
    "DivisionByZeroInterval",
    "DomainError",
    "ParseError",
    "matches_printed",
    "parse_printed",
    "precision",
    "working_precision",
    "exp",
    "log",
    "sqrt",
    "cos",
    "sin",
    "atan",
    "sqr",
    "hull",
    "endpoint_to_str",
    "to_fraction",
]

INF = math.inf
_MAXF = sys.float_info.max
_TINY = 5e-324
_BITS = contextvars.ContextVar("chebcert_interval_bits", default=53)


class IntervalError(ArithmeticError):
    """Base class for interval failures."""


class DivisionByZeroInterval(IntervalError, ZeroDivisionError):
    """Raised when the divisor interval contains zero."""


class DomainError(IntervalError, ValueError):
    """Raised when an argument leaves the domain of a function."""


class ParseError(ValueError):
    """Raised for malformed decimal strings."""


def precision() -> int:
    """Mantissa bits currently used for interval endpoints."""
    return _BITS.get()


@contextlib.contextmanager
def working_precision(bits: int):
    """Temporarily switch interval endpoints to ``bits`` of mantissa."""
    bits = int(bits)
    if bits < 53:
        raise ValueError("precision below 53 bits is not supported")
    token = _BITS.set(bits)
    try:
        yield bits
    finally:
        _BITS.reset(token)


# ---------------------------------------------------------------------------
# directed rounding on doubles

def _down(x: float) -> float:
    return math.nextafter(x, -INF)


def _up(x: float) -> float:
    return math.nextafter(x, INF)


def _add_rd(a: float, b: float) -> float:
    s = a + b
    if math.isfinite(s):
        bb = s - a
        err = (a - (s - bb)) + (b - bb)
        return _down(s) if err < 0 else s
    if s != s:
        return -INF
    if s == INF and math.isfinite(a) and math.isfinite(b):
        return _MAXF
    return s


def _add_ru(a: float, b: float) -> float:
    s = a + b
    if math.isfinite(s):
        bb = s - a
        err = (a - (s - bb)) + (b - bb)
        return _up(s) if err > 0 else s
    if s != s:
        return INF
    if s == -INF and math.isfinite(a) and math.isfinite(b):
        return -_MAXF
    return s


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a: float):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _prod_err(a: float, b: float, p: float):
    """Exact value of a*b - p (Dekker), or None when the split is unsafe."""
    if not (1e-280 < abs(p) < 1e280 and abs(a) < 1e290 and abs(b) < 1e290):
        return None
    ah, al = _split(a)
    bh, bl = _split(b)
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _exact_product(a: float, b: float, p: float) -> bool:
    """Cheap sufficient test that the double product a*b is exact."""
    if not 1e-290 < abs(p) < 1e300:
        return False
    if math.frexp(a)[0] in (0.5, -0.5) or math.frexp(b)[0] in (0.5, -0.5):
        return True
    return a.is_integer() and b.is_integer() and abs(p) <= 9007199254740992.0


def _mul_rd(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b) or p < 0:
            return p
        return _MAXF
    if p == 0.0:
        return -_TINY if (a < 0) != (b < 0) else 0.0
    if _exact_product(a, b, p):
        return p
    return _down(p)


def _mul_ru(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b) or p > 0:
            return p
        return -_MAXF
    if p == 0.0:
        return _TINY if (a < 0) == (b < 0) else 0.0
    if _exact_product(a, b, p):
        return p
    return _up(p)


def _div_sign(a: float, b: float, q: float):
    """Sign of a/b - q, or None when it cannot be decided cheaply."""
    ph = q * b
    pl = _prod_err(q, b, ph)
    if pl is None:
        return None
    t = a - ph
    bb = t - a
    if (a - (t - bb)) + (-ph - bb) != 0:
        return None
    r = t - pl
    if r == 0:
        return 0
    return 1 if (r > 0) == (b > 0) else -1


def _div_rd(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    if math.isinf(b):
        return 0.0 if not math.isinf(a) else (-INF if (a < 0) != (b < 0) else _MAXF)
    q = a / b
    if math.isinf(q):
        return q if (q < 0 or math.isinf(a)) else _MAXF
    if q == 0.0:
        return -_TINY if (a < 0) != (b < 0) else 0.0
    s = _div_sign(a, b, q)
    if s is None:
        return _down(q)
    return _down(q) if s < 0 else q


def _div_ru(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    if math.isinf(b):
        return 0.0 if not math.isinf(a) else (INF if (a < 0) == (b < 0) else -_MAXF)
    q = a / b
    if math.isinf(q):
        return q if (q > 0 or math.isinf(a)) else -_MAXF
    if q == 0.0:
        return _TINY if (a < 0) == (b < 0) else 0.0
    s = _div_sign(a, b, q)
    if s is None:
        return _up(q)
    return _up(q) if s > 0 else q


_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _select(rd, ru, a, b, c, d, near):
    """Directed extremes of x op y over the four endpoint pairs.

    Rounding to nearest is monotone, so only the pairs whose rounded value
    ties for the extreme need the (costly) directed evaluation.
    """
    xs, ys = (a, b), (c, d)
    if near[0] != near[0] or near[1] != near[1] or near[2] != near[2] or near[3] != near[3]:
        lo = min(rd(xs[i], ys[j]) for i, j in _PAIRS)
        hi = max(ru(xs[i], ys[j]) for i, j in _PAIRS)
        return lo, hi
    m, M = min(near), max(near)
    lo = min(rd(xs[i], ys[j]) for k, (i, j) in enumerate(_PAIRS) if near[k] == m)
    hi = max(ru(xs[i], ys[j]) for k, (i, j) in enumerate(_PAIRS) if near[k] == M)
    return lo, hi


def _sqrt_rd(x: float) -> float:
    if x == 0.0 or x == INF:
        return x
    s = math.sqrt(x)
    e = _prod_err(s, s, s * s)
    if e is None:
        return _down(s)
    r = (x - s * s) - e
    return _down(s) if r < 0 else s


def _sqrt_ru(x: float) -> float:
    if x == 0.0 or x == INF:
        return x
    s = math.sqrt(x)
    e = _prod_err(s, s, s * s)
    if e is None:
        return _up(s)
    r = (x - s * s) - e
    return _up(s) if r > 0 else s


def _widen_down(x: float, n: int = 2) -> float:
    for _ in range(n):
        x = _down(x)
    return x


def _widen_up(x: float, n: int = 2) -> float:
    for _ in range(n):
        x = _up(x)
    return x


def _pow_rd(x: float, n: int) -> float:
    """Lower bound of x**n for x >= 0 and n >= 1."""
    result, base = 1.0, x
    while n:
        if n & 1:
            result = _mul_rd(result, base)
        n >>= 1
        if n:
            base = _mul_rd(base, base)
    return result


def _pow_ru(x: float, n: int) -> float:
    result, base = 1.0, x
    while n:
        if n & 1:
            result = _mul_ru(result, base)
        n >>= 1
        if n:
            base = _mul_ru(base, base)
    return result


# ---------------------------------------------------------------------------
# exact conversions

def to_fraction(x) -> Fraction:
    """Exact rational value of a finite endpoint (float, int or mpf)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        sign, man, exp, _ = x._mpf_
        if not man and exp:
            raise ValueError("non-finite endpoint")
        v = Fraction(int(man)) * (Fraction(2) ** exp)
        return -v if sign else v
    if isinstance(x, Decimal):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def _is_inf(x) -> bool:
    if isinstance(x, float):
        return math.isinf(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.isinf(x)
    return False


def _frac_rd(fr: Fraction) -> float:
    f = float(fr) if abs(fr) < Fraction(_MAXF) * 2 else (INF if fr > 0 else -INF)
    if math.isinf(f):
        return _MAXF if f > 0 else -INF
    return f if Fraction(f) <= fr else _down(f)


def _frac_ru(fr: Fraction) -> float:
    f = float(fr) if abs(fr) < Fraction(_MAXF) * 2 else (INF if fr > 0 else -INF)
    if math.isinf(f):
        return INF if f > 0 else -_MAXF
    return f if Fraction(f) >= fr else _up(f)


def _mpf_from_fraction(fr: Fraction, bits: int, rnd: str) -> mpmath.mpf:
    return mpmath.mp.make_mpf(libmp.from_rational(fr.numerator, fr.denominator, bits, rnd))


def _exact_mpf(fr: Fraction):
    """Exact mpf for a dyadic rational, else None."""
    d = fr.denominator
    if d & (d - 1):
        return None
    k = d.bit_length() - 1
    return mpmath.mp.make_mpf(libmp.from_man_exp(fr.numerator, -k))


def _float_bounds(lo, hi):
    """Round arbitrary endpoints outward to doubles."""
    if not isinstance(lo, float):
        if isinstance(lo, mpmath.mpf):
            lo = libmp.to_float(lo._mpf_, rnd="f")
            if lo == INF:
                lo = _MAXF
        else:
            lo = _frac_rd(to_fraction(lo))
    if not isinstance(hi, float):
        if isinstance(hi, mpmath.mpf):
            hi = libmp.to_float(hi._mpf_, rnd="c")
            if hi == -INF:
                hi = -_MAXF
        else:
            hi = _frac_ru(to_fraction(hi))
    return lo, hi


_DEC_RE = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$")
_FRAC_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


def _parse_exact(s: str):
    s = s.strip()
    low = s.lower()
    if low in ("inf", "+inf", "infinity"):
        return INF
    if low in ("-inf", "-infinity"):
        return -INF
    m = _FRAC_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {s!r}")
        return Fraction(int(m.group(1)), den)
    if not _DEC_RE.match(s):
        raise ParseError(f"not a decimal number: {s!r}")
    return Fraction(Decimal(s))


def _bounds_of(value):
    """Outward enclosure (lo, hi) of a scalar at the current precision."""
    bits = _BITS.get()
    if isinstance(value, Interval):
        return value.lo, value.hi
    if isinstance(value, float):
        if value != value:
            raise DomainError("NaN is not a valid endpoint")
        return value, value
    if isinstance(value, mpmath.mpf):
        if mpmath.isnan(value):
            raise DomainError("NaN is not a valid endpoint")
        return value, value
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        if abs(value) <= 2**53:
            f = float(value)
            return f, f
        value = Fraction(value)
    if isinstance(value, str):
        value = _parse_exact(value)
        if isinstance(value, float):
            return value, value
    if isinstance(value, Decimal):
        value = Fraction(value)
    if isinstance(value, Fraction):
        if bits > 53:
            m = _exact_mpf(value)
            if m is not None:
                return m, m
            return _mpf_from_fraction(value, bits, "f"), _mpf_from_fraction(value, bits, "c")
        return _frac_rd(value), _frac_ru(value)
    raise TypeError(f"cannot build an interval from {type(value).__name__}")


# ---------------------------------------------------------------------------
# multiprecision backend

_tls = threading.local()


def _ivctx() -> MPIntervalContext:
    ctx = getattr(_tls, "ctx", None)
    if ctx is None:
        ctx = _tls.ctx = MPIntervalContext()
    ctx.prec = _BITS.get()
    return ctx


def _to_raw(x):
    if isinstance(x, mpmath.mpf):
        return x._mpf_
    if isinstance(x, float):
        return libmp.from_float(x)
    fr = to_fraction(x)
    return libmp.from_rational(fr.numerator, fr.denominator, _BITS.get() + 20, "n")


def _to_iv(x: "Interval"):
    return _ivctx().make_mpf((_to_raw(x.lo), _to_raw(x.hi)))


def _from_iv(v) -> "Interval":
    a, b = v._mpi_
    return _new(mpmath.mp.make_mpf(a), mpmath.mp.make_mpf(b))


def _mp_directed(fn, x, bits):
    """Outward bounds of a monotone libmp function at a point endpoint."""
    raw = _to_raw(x)
    lo = fn(raw, bits + 10, "f")
    hi = fn(raw, bits + 10, "c")
    lo = libmp.mpf_sub(lo, libmp.mpf_shift(libmp.mpf_abs(lo), -(bits + 5)), bits, "f")
    hi = libmp.mpf_add(hi, libmp.mpf_shift(libmp.mpf_abs(hi), -(bits + 5)), bits, "c")
    return mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)


# ---------------------------------------------------------------------------

def _new(lo, hi) -> "Interval":
    obj = object.__new__(Interval)
    object.__setattr__(obj, "lo", lo)
    object.__setattr__(obj, "hi", hi)
    return obj


def _coerce(x) -> "Interval":
    return x if isinstance(x, Interval) else Interval(x)


class Interval:
    """Closed interval [lo, hi] of extended reals, outward rounded.

    ``Interval(x)`` encloses a number or decimal string; ``Interval(a, b)``
    builds the hull of the two enclosures.  Instances are immutable.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            a, b = _bounds_of(lo)
        else:
            a = _bounds_of(lo)[0]
            b = _bounds_of(hi)[1]
        if not a <= b:
            raise ValueError(f"invalid interval endpoints {a!r} > {b!r}")
        object.__setattr__(self, "lo", a)
        object.__setattr__(self, "hi", b)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    def __reduce__(self):
        return (_new, (self.lo, self.hi))

    # -- basic queries -----------------------------------------------------
    def _fb(self):
        lo, hi = self.lo, self.hi
        if type(lo) is float and type(hi) is float:
            return lo, hi
        return _float_bounds(lo, hi)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def width(self) -> float:
        """Upper bound of hi - lo as a double."""
        lo, hi = self._fb()
        return _add_ru(hi, -lo)

    def mid(self) -> float:
        """A double inside the interval, close to its midpoint."""
        lo, hi = self._fb()
        if lo == -INF and hi == INF:
            return 0.0
        if lo == -INF:
            return -_MAXF if hi > -_MAXF else hi
        if hi == INF:
            return _MAXF if lo < _MAXF else lo
        m = 0.5 * lo + 0.5 * hi
        return min(max(m, lo), hi)

    def rad(self) -> float:
        lo, hi = self._fb()
        return _add_ru(hi, -lo) * 0.5 if math.isfinite(hi - lo) else INF

    def mag(self):
        """Largest absolute value in the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self):
        """Smallest absolute value in the interval."""
        if self.lo <= 0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        """Exact membership test for numbers, strings or intervals."""
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, str):
            x = _parse_exact(x)
        if isinstance(x, Fraction):
            lo_ok = _is_inf(self.lo) and self.lo < 0 or to_fraction(self.lo) <= x
            hi_ok = _is_inf(self.hi) and self.hi > 0 or x <= to_fraction(self.hi)
            return lo_ok and hi_ok
        return self.lo <= x <= self.hi

    __contains__ = contains

    def subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def strictly_inside(self, other: "Interval") -> bool:
        return other.lo < self.lo and self.hi < other.hi

    def overlaps(self, other: "Interval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def intersect(self, other: "Interval"):
        """Intersection, or None when disjoint."""
        other = _coerce(other)
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return _new(lo, hi)

    def hull(self, other) -> "Interval":
        other = _coerce(other)
        return _new(min(self.lo, other.lo), max(self.hi, other.hi))

    def bisect(self):
        m = self.mid()
        return _new(self.lo, m), _new(m, self.hi)

    def split(self, n: int):
        """Split into n adjacent pieces with double breakpoints."""
        lo, hi = self._fb()
        pts = [lo] + [lo + (hi - lo) * k / n for k in range(1, n)] + [hi]
        return [_new(pts[i], pts[i + 1]) for i in range(n) if pts[i] <= pts[i + 1]]

    # -- arithmetic ----------------------------------------------------------
    def __neg__(self):
        return _new(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Interval):
            if _is_generic(other):
                return NotImplemented
            other = Interval(other)
        if _BITS.get() > 53:
            return _from_iv(_to_iv(self) + _to_iv(other))
        a, b = self._fb()
        c, d = other._fb()
        return _new(_add_rd(a, c), _add_ru(b, d))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Interval):
            if _is_generic(other):
                return NotImplemented
            other = Interval(other)
        if _BITS.get() > 53:
            return _from_iv(_to_iv(self) - _to_iv(other))
        a, b = self._fb()
        c, d = other._fb()
        return _new(_add_rd(a, -d), _add_ru(b, -c))

    def __rsub__(self, other):
        return Interval(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            if _is_generic(other):
                return NotImplemented
            other = Interval(other)
        if _BITS.get() > 53:
            return _from_iv(_to_iv(self) * _to_iv(other))
        a, b = self._fb()
        c, d = other._fb()
        if a >= 0 and c >= 0:
            return _new(_mul_rd(a, c), _mul_ru(b, d))
        if b <= 0 and d <= 0:
            return _new(_mul_rd(b, d), _mul_ru(a, c))
        return _new(*_select(_mul_rd, _mul_ru, a, b, c, d, (a * c, a * d, b * c, b * d)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Interval):
            if _is_generic(other):
                return NotImplemented
            other = Interval(other)
        if other.lo <= 0 <= other.hi:
            raise DivisionByZeroInterval(f"divisor {other} contains zero")
        if _BITS.get() > 53:
            return _from_iv(_to_iv(self) / _to_iv(other))
        a, b = self._fb()
        c, d = other._fb()
        return _new(*_select(_div_rd, _div_ru, a, b, c, d, (a / c, a / d, b / c, b / d)))

    def __rtruediv__(self, other):
        return Interval(other) / self

    def inv(self) -> "Interval":
        return Interval(1.0) / self

    def __pow__(self, k):
        if isinstance(k, int) and not isinstance(k, bool):
            return self.ipow(k)
        if isinstance(k, Fraction) and k.denominator == 1:
            return self.ipow(int(k))
        return (self.log() * _coerce(k)).exp()

    def __rpow__(self, base):
        """base ** self for a positive scalar base."""
        return (self * Interval(base).log()).exp()

    def ipow(self, n: int) -> "Interval":
        if n == 0:
            return Interval(1.0)
        if n < 0:
            return Interval(1.0) / self.ipow(-n)
        if n == 1:
            return self
        if _BITS.get() > 53:
            return _from_iv(_to_iv(self) ** n)
        a, b = self._fb()
        if n % 2 == 0:
            if a >= 0:
                m, M = a, b
            elif b <= 0:
                m, M = -b, -a
            else:
                m, M = 0.0, max(-a, b)
            return _new(_pow_rd(m, n), _pow_ru(M, n))
        lo = _pow_rd(a, n) if a >= 0 else -_pow_ru(-a, n)
        hi = _pow_ru(b, n) if b >= 0 else -_pow_rd(-b, n)
        return _new(lo, hi)

    def sqr(self) -> "Interval":
        return self.ipow(2)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return _new(0.0 if isinstance(self.lo, float) else mpmath.mpf(0), max(-self.lo, self.hi))

    # -- elementary functions ----------------------------------------------
    def exp(self) -> "Interval":
        if _BITS.get() > 53:
            return _from_iv(_ivctx().exp(_to_iv(self)))
        a, b = self._fb()
        return _new(_exp_rd(a), _exp_ru(b))

    def log(self) -> "Interval":
        if not self.lo > 0:
            raise DomainError(f"log of {self} which touches or crosses zero")
        if _BITS.get() > 53:
            return _from_iv(_ivctx().log(_to_iv(self)))
        a, b = self._fb()
        return _new(_log_rd(a), _log_ru(b))

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise DomainError(f"sqrt of {self} which has negative part")
        if _BITS.get() > 53:
            return _from_iv(_ivctx().sqrt(_to_iv(self)))
        a, b = self._fb()
        return _new(_sqrt_rd(a), _sqrt_ru(b))

    def cos(self) -> "Interval":
        if _BITS.get() > 53:
            return _from_iv(_ivctx().cos(_to_iv(self)))
        return _new(*_trig_bounds(*self._fb(), phase=0.0))

    def sin(self) -> "Interval":
        if _BITS.get() > 53:
            return _from_iv(_ivctx().sin(_to_iv(self)))
        return _new(*_trig_bounds(*self._fb(), phase=0.5))

    def atan(self) -> "Interval":
        bits = _BITS.get()
        if bits > 53:
            lo = _mp_directed(libmp.mpf_atan, self.lo, bits)[0]
            hi = _mp_directed(libmp.mpf_atan, self.hi, bits)[1]
            return _new(lo, hi)
        a, b = self._fb()
        lo = 0.0 if a == 0 else _widen_down(math.atan(a))
        hi = 0.0 if b == 0 else _widen_up(math.atan(b))
        return _new(lo, hi)

    # -- comparisons and display -------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((to_fraction(self.lo) if not _is_inf(self.lo) else self.lo,
                     to_fraction(self.hi) if not _is_inf(self.hi) else self.hi))

    def __repr__(self):
        return f"Interval({_short(self.lo, 'f')}, {_short(self.hi, 'c')})"

    def __str__(self):
        return f"[{_short(self.lo, 'f', 10)}, {_short(self.hi, 'c', 10)}]"

    def __float__(self):
        return self.mid()


def _is_generic(x) -> bool:
    """True for objects (jets, complex boxes) that handle interval operands."""
    return hasattr(x, "__jet__") or isinstance(x, ComplexBox)


def _exp_rd(x: float) -> float:
    if x == 0.0:
        return 1.0
    if x == -INF:
        return 0.0
    try:
        v = math.exp(x)
    except OverflowError:
        return _MAXF
    if v == INF:
        return _MAXF
    return max(_widen_down(v), 0.0)


def _exp_ru(x: float) -> float:
    if x == 0.0:
        return 1.0
    if x == -INF:
        return 0.0
    try:
        v = math.exp(x)
    except OverflowError:
        return INF
    return _widen_up(v)


def _log_rd(x: float) -> float:
    if x == 1.0:
        return 0.0
    if x == INF:
        return _MAXF
    return _widen_down(math.log(x))


def _log_ru(x: float) -> float:
    if x == 1.0:
        return 0.0
    if x == INF:
        return INF
    return _widen_up(math.log(x))


_PI_LO = 3.141592653589793
_PI_HI = 3.1415926535897936


def _trig_bounds(lo: float, hi: float, phase: float):
    """Bounds of cos(x - phase*pi) over [lo, hi]; phase 0.5 gives sin."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi - lo >= 6.3:
        return -1.0, 1.0
    if max(abs(lo), abs(hi)) > 1e8:
        return -1.0, 1.0
    f = math.sin if phase else math.cos
    if lo == hi == 0.0:
        return (0.0, 0.0) if phase else (1.0, 1.0)
    va, vb = f(lo), f(hi)
    low = _widen_down(min(va, vb))
    high = _widen_up(max(va, vb))
    # extrema of cos(x - phase*pi) sit at x = (k + phase) * pi
    k0 = math.floor(lo / _PI_HI - phase) - 1
    k1 = math.ceil(hi / _PI_LO - phase) + 1
    for k in range(k0, k1 + 1):
        c = k + phase
        p_lo = min(_mul_rd(c, _PI_LO), _mul_rd(c, _PI_HI))
        p_hi = max(_mul_ru(c, _PI_LO), _mul_ru(c, _PI_HI))
        if p_hi >= lo and p_lo <= hi:
            if k % 2 == 0:
                high = 1.0
            else:
                low = -1.0
    return max(low, -1.0), min(high, 1.0)


# ---------------------------------------------------------------------------
# generic dispatch: works for Interval, jets and plain numbers

def _lift(x):
    if isinstance(x, (int, float, Fraction, str, Decimal, mpmath.mpf)):
        return Interval(x)
    return x


def exp(x):
    return _lift(x).exp()


def log(x):
    return _lift(x).log()


def sqrt(x):
    return _lift(x).sqrt()


def cos(x):
    return _lift(x).cos()


def sin(x):
    return _lift(x).sin()


def atan(x):
    return _lift(x).atan()


def sqr(x):
    return _lift(x).sqr()


def hull(*xs) -> Interval:
    out = _coerce(xs[0])
    for x in xs[1:]:
        out = out.hull(x)
    return out


def imin(a, b) -> Interval:
    """Interval extension of min(x, y)."""
    a, b = _coerce(a), _coerce(b)
    return _new(min(a.lo, b.lo), min(a.hi, b.hi))


def imax(a, b) -> Interval:
    """Interval extension of max(x, y)."""
    a, b = _coerce(a), _coerce(b)
    return _new(max(a.lo, b.lo), max(a.hi, b.hi))


# ---------------------------------------------------------------------------
# decimal output

def endpoint_to_str(x) -> str:
    """Exact decimal expansion of an endpoint (never rounded)."""
    if _is_inf(x):
        return "inf" if x > 0 else "-inf"
    fr = to_fraction(x)
    num, den = fr.numerator, fr.denominator
    k = den.bit_length() - 1
    if den != 1 << k:
        raise ValueError("endpoint is not dyadic")
    digits = num * 5**k
    d = Decimal(digits).scaleb(-k, Context(prec=len(str(abs(digits))) + 2))
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s if s not in ("", "-0") else "0"


def _short(x, rnd: str, digits: int = 17) -> str:
    """Directed decimal rounding to a few significant digits, for display."""
    if _is_inf(x):
        return "inf" if x > 0 else "-inf"
    fr = to_fraction(x)
    if fr == 0:
        return "0"
    e = math.floor(math.log10(abs(float(fr)))) if float(fr) != 0 else 0
    scale = Fraction(10) ** (digits - 1 - e)
    n = fr * scale
    q = math.floor(n) if rnd == "f" else math.ceil(n)
    d = Decimal(q).scaleb(-(digits - 1 - e))
    s = format(d.normalize(), "g") if abs(e) < 12 else format(d.normalize(), "E")
    return s


# ---------------------------------------------------------------------------
# named constants

_CONST_SRC = {
    "pi": lambda c: c.pi,
    "e": lambda c: c.e,
    "log2": lambda c: c.log(2),
    "log3": lambda c: c.log(3),
    "log5": lambda c: c.log(5),
    "log10": lambda c: c.log(10),
    "sqrt5": lambda c: c.sqrt(5),
    "sqrt17": lambda c: c.sqrt(17),
    "sqrt_pi": lambda c: c.sqrt(c.pi),
    "logpi": lambda c: c.log(c.pi),
    "euler_gamma": lambda c: c.euler,
}
_const_cache: dict = {}
_const_lock = threading.Lock()


def _constant(name: str) -> Interval:
    bits = _BITS.get()
    key = (name, bits)
    hit = _const_cache.get(key)
    if hit is not None:
        return hit
    ctx = MPIntervalContext()
    ctx.prec = max(bits, 53) + 64
    v = _CONST_SRC[name](ctx)
    a, b = v._mpi_
    lo, hi = mpmath.mp.make_mpf(a), mpmath.mp.make_mpf(b)
    if bits <= 53:
        iv = _new(*_float_bounds(lo, hi))
    else:
        iv = _new(mpmath.mp.make_mpf(libmp.mpf_pos(a, bits, "f")),
                  mpmath.mp.make_mpf(libmp.mpf_pos(b, bits, "c")))
    with _const_lock:
        _const_cache[key] = iv
    return iv


class _Constants:
    """Rigorous enclosures of common constants at the working precision."""

    def __getattr__(self, name):
        if name in _CONST_SRC:
            return _constant(name)
        raise AttributeError(name)

    def names(self):
        return sorted(_CONST_SRC)


CONST = _Constants()


# ---------------------------------------------------------------------------
# complex boxes

class ComplexBox:
    """Rectangular enclosure re + i*im of a set of complex numbers."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0.0):
        object.__setattr__(self, "re", _coerce(re))
        object.__setattr__(self, "im", _coerce(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexBox is immutable")

    @staticmethod
    def _of(z) -> "ComplexBox":
        if isinstance(z, ComplexBox):
            return z
        if isinstance(z, complex):
            return ComplexBox(z.real, z.imag)
        return ComplexBox(z, 0.0)

    def contains(self, z) -> bool:
        z = complex(z) if not isinstance(z, ComplexBox) else z
        if isinstance(z, ComplexBox):
            return self.re.contains(z.re) and self.im.contains(z.im)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def __add__(self, o):
        o = ComplexBox._of(o)
        return ComplexBox(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = ComplexBox._of(o)
        return ComplexBox(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return ComplexBox._of(o) - self

    def __neg__(self):
        return ComplexBox(-self.re, -self.im)

    def __mul__(self, o):
        o = ComplexBox._of(o)
        return ComplexBox(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    def abs2(self) -> Interval:
        return self.re.sqr() + self.im.sqr()

    def abs(self) -> Interval:
        return self.abs2().sqrt()

    def __abs__(self):
        return self.abs()

    def __truediv__(self, o):
        o = ComplexBox._of(o)
        d = o.abs2()
        if d.lo <= 0:
            raise DivisionByZeroInterval(f"complex divisor {o} may vanish")
        n = self * o.conj()
        return ComplexBox(n.re / d, n.im / d)

    def __rtruediv__(self, o):
        return ComplexBox._of(o) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers of complex boxes are supported")
        if n < 0:
            return ComplexBox(1.0) / (self ** (-n))
        out, base = ComplexBox(1.0), self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def exp(self) -> "ComplexBox":
        r = self.re.exp()
        return ComplexBox(r * self.im.cos(), r * self.im.sin())

    def log_abs(self) -> Interval:
        """Enclosure of log|z|."""
        return self.abs2().log() * 0.5

    def __repr__(self):
        return f"ComplexBox({self.re!r}, {self.im!r})"

    def __str__(self):
        return f"{self.re} + i{self.im}"


# ---------------------------------------------------------------------------
# adjudication against printed decimals

class Adjudication(str, enum.Enum):
    CONFIRMS = "CONFIRMS"
    TIGHTER = "TIGHTER"
    CONTRADICTS = "CONTRADICTS"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PrintedValue:
    """A parsed printed number.

    ``kind`` is "approx" (decimal with last-digit slack), "exact" (a rational
    that must be contained), "upper" (a bound the true value may not exceed)
    or "lower".
    """

    text: str
    kind: str
    value: Fraction
    unit: Fraction


_PRINTED_RE = re.compile(
    r"^([+-]?)(\d+)(?:\.(\d*))?\s*(?:⋯|…|\.\.\.|\\cdots)?\s*"
    r"(?:(?:[eE]|[x×]\s*10\^?)\s*\(?([+-−]?\d+)\)?)?$"
)


def parse_printed(text: str) -> PrintedValue:
    """Parse strings like "36.759⋯", "6.7934⋯e-4", "1/92" or "<=1.1"."""
    s = text.strip()
    kind = "approx"
    for prefix, k in (("<=", "upper"), ("≤", "upper"), (">=", "lower"), ("≥", "lower"), ("=", "exact")):
        if s.startswith(prefix):
            kind, s = k, s[len(prefix):].strip()
            break
    m = _FRAC_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        v = Fraction(int(m.group(1)), den)
        return PrintedValue(text, "exact" if kind == "approx" else kind, v, Fraction(0))
    m = _PRINTED_RE.match(s)
    if not m:
        raise ParseError(f"cannot parse printed value {text!r}")
    sign, ipart, fpart, expo = m.groups()
    fpart = fpart or ""
    v = Fraction(int(ipart + fpart), 10 ** len(fpart))
    e = int(expo.replace("−", "-")) if expo else 0
    scale = Fraction(10) ** e
    v *= scale
    if sign == "-":
        v = -v
    unit = scale / 10 ** len(fpart)
    return PrintedValue(text, kind, v, unit)


def matches_printed(a: Interval, printed) -> Adjudication:
    """Compare an enclosure with a printed number.

    Decimals get one unit of slack in the last printed digit on each side.
    Rationals must be contained exactly; bounds ("<=v", ">=v") are confirmed
    when the whole enclosure satisfies them.
    """
    p = printed if isinstance(printed, PrintedValue) else parse_printed(printed)
    lo = to_fraction(a.lo) if not _is_inf(a.lo) else None
    hi = to_fraction(a.hi) if not _is_inf(a.hi) else None
    if p.kind == "upper":
        if hi is not None and hi <= p.value:
            return Adjudication.CONFIRMS
        if lo is not None and lo > p.value:
            return Adjudication.CONTRADICTS
        return Adjudication.INCONCLUSIVE
    if p.kind == "lower":
        if lo is not None and lo >= p.value:
            return Adjudication.CONFIRMS
        if hi is not None and hi < p.value:
            return Adjudication.CONTRADICTS
        return Adjudication.INCONCLUSIVE
    if p.kind == "exact" and p.unit == 0:
        if (lo is None or lo <= p.value) and (hi is None or p.value <= hi):
            return Adjudication.CONFIRMS
        return Adjudication.CONTRADICTS
    left, right = p.value - p.unit, p.value + p.unit
    if (hi is not None and hi < left) or (lo is not None and lo > right):
        return Adjudication.CONTRADICTS
    if lo is None or hi is None:
        return Adjudication.INCONCLUSIVE
    if left < lo and hi < right and (hi - lo) < p.unit / 100:
        return Adjudication.TIGHTER
    if left <= lo and hi <= right:
        return Adjudication.CONFIRMS
    return Adjudication.INCONCLUSIVE
