"""Named real functions of the constant chain, as interval extensions.

Most definitions are written once and work for :class:`Interval`,
:class:`~chebcert.jet.Jet` and plain numbers alike, so the same code gives
values, derivative enclosures and quadrature integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import analysis
from .interval import CONST, ComplexBox, DomainError, Interval, imin
from .jet import Jet

__all__ = [
    "FunctionDef",
    "PowerExpTerm",
    "FUNCTIONS",
    "eval_function",
    "kappa",
    "alpha6",
    "alpha7",
    "alpha9",
    "sigma1",
    "epsilon_terms",
    "sup_over_halfline",
]


def _iv(x):
    return x if isinstance(x, (Interval, Jet)) else Interval(x)


# -- fixed constants -----------------------------------------------------

def kappa() -> Interval:
    """Stechkin weight 1/sqrt(5)."""
    return 1 / CONST.sqrt5


def alpha6() -> Interval:
    return Interval("1.08")


def alpha7() -> Interval:
    """4/3 + log 5."""
    return Interval(Fraction(4, 3)) + CONST.log5


def alpha9() -> Interval:
    """(sqrt(5) - 1)/2."""
    return (CONST.sqrt5 - 1) / 2


def sigma1(sigma):
    """(1 + sqrt(1 + 4 sigma^2))/2."""
    sigma = _iv(sigma)
    return ((sigma * sigma * 4 + 1).sqrt() + 1) / 2


def _positive_part(sigma, bound=1.0):
    if isinstance(sigma, Interval) and not sigma.lo > bound:
        raise DomainError(f"argument {sigma} must exceed {bound}")


# -- density functions ---------------------------------------------------

def _ratio(u):
    return u / (u * u + 1)


def f0(sigma):
    """Half the sum of two pairwise minima of u/(u^2+1) at shifts of sigma."""
    sigma = _iv(sigma)
    _positive_part(sigma)
    a = _ratio(sigma - 1)
    b = _ratio(sigma - 0.5)
    c = _ratio(sigma)
    return (imin(a, b) + imin(b, c)) / 2


def f1(sigma):
    """-zeta'/zeta on the real axis."""
    return analysis.neg_zeta_log_deriv(_iv(sigma))


def _log_ratio_term(sigma):
    return (sigma + 5).log() / CONST.log2 - 1


def f2(sigma):
    sigma = _iv(sigma)
    return alpha6() / 2 * _log_ratio_term(sigma)


def f3(sigma):
    """1/sigma - kappa (1/(sigma1 - 1) + 1/sigma1)."""
    sigma = _iv(sigma)
    s1 = sigma1(sigma)
    return 1 / sigma - kappa() * (1 / (s1 - 1) + 1 / s1)


def f4(sigma):
    sigma = _iv(sigma)
    return (alpha6() - kappa()) / 2 * _log_ratio_term(sigma)


def f5(sigma0, t0, j: int, v):
    """Re[((sigma0 - 1) + i t0)^(-2j) - ((sigma0 - v) + i t0)^(-2j)]."""
    sigma0, t0, v = Interval(sigma0), Interval(t0), Interval(v)
    a = ComplexBox(sigma0 - 1, t0) ** (-2 * j)
    b = ComplexBox(sigma0 - v, t0) ** (-2 * j)
    return (a - b).re


# -- digamma comparison functions ----------------------------------------

def phi1(v):
    v = _iv(v)
    return alpha6() * (v + 2).log() - v.log() - Interval(Fraction(1, 3))


def phi2(v):
    v = _iv(v)
    return v.log() - Interval(Fraction(4, 3)) - (v + 2).log() + alpha7()


def phi4(v):
    return _iv(v) + 2


def phi5(sigma, v):
    sigma, v = _iv(sigma), _iv(v)
    w = (sigma + 1) * (sigma + 1) + v * v
    return w.sqrt() / 2 + 2


def phi3(sigma, v):
    return phi5(sigma, v) / phi4(v)


def _decay_quotient(v):
    """(e^-v - e^-2v)/v."""
    return ((-v).exp() - (-2 * v).exp()) / v


def phi6(v):
    v = _iv(v)
    q = _decay_quotient(v)
    return 1 - q * q


def phi7(v):
    v = _iv(v)
    return 1 - (v * -2.5).exp()


# -- zero-free region functions --------------------------------------------

def G(w1, w2, w3, v):
    """kappa (w1/(w1^2+v^2) + w2/(w2^2+v^2)) - w3/(w3^2+v^2)."""
    w1, w2, w3, v = _iv(w1), _iv(w2), _iv(w3), _iv(v)
    v2 = v.sqr() if isinstance(v, Interval) else v * v
    return kappa() * (w1 / (w1 * w1 + v2) + w2 / (w2 * w2 + v2)) - w3 / (w3 * w3 + v2)


def G_reduced(v):
    """Closed form of G(alpha9, 1/alpha9, 1; v) = -v^2 / ((1+v^2)(alpha9^2+v^2)(alpha9^-2+v^2)).

    Follows from alpha9 * alpha9^-1 = 1, kappa (alpha9 + alpha9^-1) = 1 and
    alpha9^2 + alpha9^-2 = 3.
    """
    v = _iv(v)
    v2 = v.sqr() if isinstance(v, Interval) else v * v
    a = alpha9()
    return -v2 / ((v2 + 1) * (v2 + a * a) * (v2 + 1 / (a * a)))


def F_stechkin(s, z):
    """Re{1/(s - z) + 1/(s - (1 - conj z))}."""
    s, z = ComplexBox._of(s), ComplexBox._of(z)
    return (1 / (s - z) + 1 / (s - (1 - z.conj()))).re


def Gamma_a(a, s):
    """psi((s + a)/2) - kappa psi((s1 + a)/2) on the real axis."""
    s = _iv(s)
    return analysis.digamma((s + a) / 2) - kappa() * analysis.digamma((sigma1(s) + a) / 2)


# -- feasibility error terms -------------------------------------------------

@dataclass(frozen=True)
class PowerExpTerm:
    """coef * L**power * exp(-rate * L), a nonnegative term in L = log d."""

    coef: Interval
    power: Interval
    rate: Interval
    label: str = ""

    def __call__(self, L):
        L = _iv(L)
        out = self.coef * (-(self.rate * L)).exp()
        if not (self.power.lo == 0 and self.power.hi == 0):
            out = out * (self.power * L.log()).exp()
        return out

    def critical_point(self):
        """Stationary point p/a of the term, or None when it has none."""
        if self.rate.lo <= 0:
            return None
        return self.power / self.rate

    def sup(self, L0: Interval):
        """Rigorous sup over [L0, inf) and the kind of argument used.

        Returns (bound, how) where ``how`` is "monotone" (derivative sign
        p - a L <= 0 certified on the whole half-line, so the sup is at L0),
        "critical" (the unique interior maximum at L = p/a, value
        coef (p/(a e))^p), or "unbounded".
        """
        slope = self.power - self.rate * L0
        if self.rate.lo >= 0 and slope.hi <= 0:
            return self(L0), "monotone"
        if self.rate.lo > 0:
            crit = self.power / self.rate
            top = self.coef * (self.power * (crit.log() - 1)).exp()
            return top.hull(self(L0)), "critical"
        if self.power.hi <= 0 and self.rate.lo >= 0:
            return self(L0), "monotone"
        return Interval(0.0, math.inf), "unbounded"


def sup_over_halfline(terms, L0: Interval):
    """Upper bound of a sum of power-exp terms over [L0, inf), with a trace."""
    total = Interval(0.0)
    trace = []
    for t in terms:
        s, how = t.sup(L0)
        total = total + s
        trace.append((t.label, how, s))
    return total, trace


def epsilon_terms(k: int, c: dict):
    """Error terms of the feasibility checks as PowerExpTerm lists.

    ``c`` supplies the required constants by node id (``c_13``, ``c_15``,
    ``c_16``, ``alpha_3`` for k = 1, 2; ``c_20``, ``c_15p``, ``c_23``,
    ``alpha_4``, ``c_19``, ``c_21``, ``c_7``, ``c_10`` for k = 3, 4).
    """
    log3 = CONST.log3
    zero, one = Interval(0.0), Interval(1.0)
    if k == 1:
        c16 = c["c_16"]
        return [
            PowerExpTerm(c["c_13"], -one, zero, "c13/L"),
            PowerExpTerm(c["c_15"], -one, 2 * c16, "c15 d^-2c16 / L"),
            PowerExpTerm(2 * c["alpha_3"] * c16 / log3, one, c16, "2 alpha3 c16 L d^-c16 / log 3"),
        ]
    if k == 2:
        c16 = c["c_16"]
        scale = (3 / c["c_7"]).sqr()
        return [
            PowerExpTerm(scale * c["c_15"], zero, 2 * c16, "(3/c7)^2 c15 d^-2c16"),
            PowerExpTerm(scale * 2 * c["alpha_3"] * c16 / log3, Interval(2.0), c16,
                         "(3/c7)^2 (2 alpha3 c16/log 3) L^2 d^-c16"),
        ]
    c23 = c["c_23"]
    K = 2 * c["alpha_4"] * c23.sqrt() / log3
    if k == 3:
        return [
            PowerExpTerm(c["c_20"], one, c23, "c20 L d^-c23"),
            PowerExpTerm(c["c_15p"], one, 2 * c23, "c15' L d^-2c23"),
            PowerExpTerm(K, Interval(2.5), c23, "K L^(5/2) d^-c23"),
        ]
    if k == 4:
        g = 4 * c["c_19"] * c23
        return [
            PowerExpTerm(c["c_20"], zero, c23 - c["c_10"], "c20 d^-(c23-c10)"),
            PowerExpTerm(c["c_21"] * (c["c_7"].log() * (g - 2)).exp(), 2 - g, zero,
                         "c21 c7^(4c19c23-2) L^(2-4c19c23)"),
            PowerExpTerm(c["c_15p"], zero, 2 * c23 - c["c_10"], "c15' d^-(2c23-c10)"),
            PowerExpTerm(K, Interval(1.5), c23 - c["c_10"], "K L^(3/2) d^-(c23-c10)"),
        ]
    raise ValueError(f"no error term with index {k}")


def _epsilon(k):
    def fn(L, consts):
        L = _iv(L)
        out = Interval(0.0)
        for t in epsilon_terms(k, consts):
            out = out + t(L)
        return out
    fn.__name__ = f"epsilon{k}"
    return fn


# -- registry ------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionDef:
    id: str
    arity: int
    fn: Callable
    domain: str
    description: str = ""
    aliases: tuple = field(default=())

    def __call__(self, *args, **kw):
        if len(args) != self.arity:
            raise TypeError(f"{self.id} takes {self.arity} arguments, got {len(args)}")
        return self.fn(*args, **kw)


_DEFS = [
    FunctionDef("f0", 1, f0, "sigma > 1", "zero-counting density weight"),
    FunctionDef("f1", 1, f1, "sigma > 1", "-zeta'/zeta(sigma)"),
    FunctionDef("f2", 1, f2, "sigma > 1", "(alpha6/2)(log(sigma+5)/log 2 - 1)"),
    FunctionDef("f3", 1, f3, "sigma > 1", "1/sigma - kappa(1/(sigma1-1) + 1/sigma1)",
                aliases=("f_3zfr",)),
    FunctionDef("f4", 1, f4, "sigma > 1", "((alpha6-kappa)/2)(log(sigma+5)/log 2 - 1)",
                aliases=("f_4zfr",)),
    FunctionDef("f5", 4, f5, "sigma0 > 1, j >= 1, 0 < v <= 1", "power-sum boundary term"),
    FunctionDef("phi1", 1, phi1, "v > 1/2", "alpha6 log(v+2) - log v - 1/3"),
    FunctionDef("phi2", 1, phi2, "v > 1/2", "log v - 4/3 - log(v+2) + alpha7"),
    FunctionDef("phi3", 2, phi3, "v >= 0", "phi5/phi4"),
    FunctionDef("phi4", 1, phi4, "v >= 0", "v + 2"),
    FunctionDef("phi5", 2, phi5, "v >= 0", "2 + sqrt((sigma+1)^2 + v^2)/2"),
    FunctionDef("phi6", 1, phi6, "v > 0", "1 - ((e^-v - e^-2v)/v)^2"),
    FunctionDef("phi7", 1, phi7, "v > 0", "1 - e^(-5v/2)"),
    FunctionDef("G", 4, G, "w1, w2, w3 > 0", "Stechkin-Kadiri comparison function"),
    FunctionDef("F_stechkin", 2, F_stechkin, "s != z", "Re{1/(s-z) + 1/(s-(1-conj z))}"),
    FunctionDef("Gamma_a", 2, Gamma_a, "s > 0", "psi((s+a)/2) - kappa psi((s1+a)/2)"),
    FunctionDef("v", 1, analysis.v_winckler, "real t", "smoothing weight log term"),
    FunctionDef("v1", 1, analysis.v1, "real t", "Cauchy weight"),
    FunctionDef("v2", 1, analysis.v2, "real t", "Gaussian weight"),
    FunctionDef("epsilon1", 2, _epsilon(1), "L >= log 3", "first k1 feasibility error"),
    FunctionDef("epsilon2", 2, _epsilon(2), "L >= log 3", "second k1 feasibility error"),
    FunctionDef("epsilon3", 2, _epsilon(3), "L >= log 3", "first k2 feasibility error"),
    FunctionDef("epsilon4", 2, _epsilon(4), "L >= log 3", "second k2 feasibility error"),
]

FUNCTIONS: dict = {}
for _d in _DEFS:
    FUNCTIONS[_d.id] = _d
    for _a in _d.aliases:
        FUNCTIONS[_a] = _d


def eval_function(fid: str, *args, **kw):
    """Evaluate a registered function by id."""
    try:
        d = FUNCTIONS[fid]
    except KeyError:
        raise KeyError(f"unknown function id {fid!r}") from None
    return d(*args, **kw)
