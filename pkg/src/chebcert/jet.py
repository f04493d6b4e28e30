"""Truncated Taylor arithmetic with interval coefficients.

A :class:`Jet` stores ``c[k] = f^(k)(x0) / k!`` for k = 0..n.  Seeding the
independent variable with an interval box ``X`` (rather than a point) makes
every coefficient an enclosure of the normalised derivative over all of
``X``, which is what remainder bounds and monotonicity proofs need.
"""

from __future__ import annotations

from .interval import Interval

__all__ = ["Jet", "derivative_enclosure", "taylor_coefficients"]


def _iv(x) -> Interval:
    return x if isinstance(x, Interval) else Interval(x)


class Jet:
    __slots__ = ("c",)
    __jet__ = True

    def __init__(self, coeffs):
        self.c = [_iv(v) for v in coeffs]

    @classmethod
    def variable(cls, x0, order: int) -> "Jet":
        x0 = _iv(x0)
        coeffs = [x0]
        if order >= 1:
            coeffs.append(Interval(1.0))
        coeffs.extend(Interval(0.0) for _ in range(order - 1))
        return cls(coeffs)

    @classmethod
    def constant(cls, v, order: int) -> "Jet":
        return cls([_iv(v)] + [Interval(0.0)] * order)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self) -> Interval:
        return self.c[0]

    def deriv(self, k: int = 1) -> Interval:
        """Enclosure of the k-th derivative (not normalised)."""
        f = 1
        for j in range(2, k + 1):
            f *= j
        return self.c[k] * f

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet([a + b for a, b in zip(self.c, other.c)])
        return Jet([self.c[0] + _iv(other)] + self.c[1:])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet([a - b for a, b in zip(self.c, other.c)])
        return Jet([self.c[0] - _iv(other)] + self.c[1:])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            o = _iv(other)
            return Jet([a * o for a in self.c])
        a, b = self.c, other.c
        n = len(a)
        out = []
        for k in range(n):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out.append(acc)
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            o = _iv(other)
            return Jet([a / o for a in self.c])
        a, b = self.c, other.c
        q = []
        for k in range(len(a)):
            acc = a[k]
            for j in range(1, k + 1):
                acc = acc - b[j] * q[k - j]
            q.append(acc / b[0])
        return Jet(q)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def sqr(self) -> "Jet":
        return self * self

    def ipow(self, n: int) -> "Jet":
        if n < 0:
            return Jet.constant(1.0, self.order) / self.ipow(-n)
        out = Jet.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __pow__(self, k):
        if isinstance(k, int):
            return self.ipow(k)
        return (self.log() * k).exp()

    def __rpow__(self, base):
        return (self * _iv(base).log()).exp()

    # -- elementary functions ----------------------------------------------
    def exp(self) -> "Jet":
        a = self.c
        e = [a[0].exp()]
        for k in range(1, len(a)):
            acc = a[1] * e[k - 1]
            for j in range(2, k + 1):
                acc = acc + a[j] * e[k - j] * j
            e.append(acc / k)
        return Jet(e)

    def log(self) -> "Jet":
        a = self.c
        out = [a[0].log()]
        for k in range(1, len(a)):
            acc = a[k] * k
            for j in range(1, k):
                acc = acc - out[j] * a[k - j] * j
            out.append(acc / (a[0] * k))
        return Jet(out)

    def sqrt(self) -> "Jet":
        a = self.c
        s = [a[0].sqrt()]
        for k in range(1, len(a)):
            acc = a[k]
            for j in range(1, k):
                acc = acc - s[j] * s[k - j]
            s.append(acc / (s[0] * 2))
        return Jet(s)

    def _sincos(self):
        a = self.c
        s = [a[0].sin()]
        c = [a[0].cos()]
        for k in range(1, len(a)):
            acc_s = a[1] * c[k - 1]
            acc_c = a[1] * s[k - 1]
            for j in range(2, k + 1):
                acc_s = acc_s + a[j] * c[k - j] * j
                acc_c = acc_c + a[j] * s[k - j] * j
            s.append(acc_s / k)
            c.append(-acc_c / k)
        return Jet(s), Jet(c)

    def sin(self) -> "Jet":
        return self._sincos()[0]

    def cos(self) -> "Jet":
        return self._sincos()[1]

    def atan(self) -> "Jet":
        n = self.order
        if n == 0:
            return Jet([self.c[0].atan()])
        # derivative of the argument, as a jet of order n-1
        da = Jet([self.c[k] * k for k in range(1, n + 1)])
        base = Jet(self.c[:n])
        g = da / (base.sqr() + 1.0)
        return Jet([self.c[0].atan()] + [g.c[k - 1] / k for k in range(1, n + 1)])

    def compose(self, derivs) -> "Jet":
        """Apply a scalar function given enclosures of g^(k)(c0)/k!, k=0..n."""
        n = self.order
        if len(derivs) < n + 1:
            raise ValueError("not enough derivative enclosures for this order")
        h = Jet([Interval(0.0)] + self.c[1:])
        out = Jet.constant(derivs[0], n)
        power = Jet.constant(1.0, n)
        for k in range(1, n + 1):
            power = power * h
            out = out + power * derivs[k]
        return out

    def __repr__(self):
        return f"Jet({self.c!r})"


def taylor_coefficients(f, x0, order: int):
    """Normalised Taylor coefficients of f at (or over) x0."""
    out = f(Jet.variable(x0, order))
    if not isinstance(out, Jet):
        out = Jet.constant(out, order)
    return out.c


def derivative_enclosure(f, box: Interval) -> Interval:
    """Enclosure of f' over the interval ``box``."""
    return taylor_coefficients(f, box, 1)[1]
