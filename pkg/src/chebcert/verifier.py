"""Rigorous checks of universal inequalities and feasibility thresholds.

Bounded regions are handled by interval branch and bound.  Unbounded ones
must come with a :class:`TailCertificate`, a closed-form argument for the
part of the domain outside the compact core; nothing is silently truncated.
"""

from __future__ import annotations

import contextlib
import contextvars
import functools
import heapq
import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import functions as fn
from .interval import CONST, Adjudication, Interval, matches_printed
from .jet import derivative_enclosure, taylor_coefficients
from .params import ParamSet
from .primes import prime_flags, prime_powers_up_to, primes_up_to
from .records import Verdict, VerdictRecord

__all__ = [
    "Region",
    "TailCertificate",
    "DepthExceeded",
    "branch_depth",
    "verify_nonneg",
    "verify_monotone",
    "verify_piecewise_lower",
    "locate_G0",
    "locate_G0_details",
    "verify_Q",
    "verify_G_nonpositive",
    "verify_zfr",
    "verify_lemma84",
    "verify_lemma86",
    "verify_cor75",
    "verify_density_conditions",
    "sandbox_check_lemma32",
    "monotone_suite",
    "run_suite",
    "SELECTORS",
]

DEFAULT_DEPTH = 60
_DEPTH = contextvars.ContextVar("bnb_depth", default=DEFAULT_DEPTH)


@contextlib.contextmanager
def branch_depth(depth: int):
    """Temporarily change the default bisection depth per variable."""
    if depth < 1:
        raise ValueError("branch-and-bound depth must be positive")
    token = _DEPTH.set(int(depth))
    try:
        yield
    finally:
        _DEPTH.reset(token)


class DepthExceeded(RuntimeError):
    """Branch and bound hit its depth or box budget."""


@dataclass(frozen=True)
class Region:
    """Axis-aligned box; ``periodic`` names variables covering a full period."""

    bounds: tuple
    names: tuple = ()
    periodic: frozenset = frozenset()

    def __post_init__(self):
        b = tuple(x if isinstance(x, Interval) else Interval(*x) for x in self.bounds)
        if not b:
            raise ValueError("region needs at least one variable")
        for x in b:
            if not (math.isfinite(x.lo) and math.isfinite(x.hi)):
                raise ValueError("region must be compact; register a tail certificate instead")
        object.__setattr__(self, "bounds", b)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(len(b))))

    @classmethod
    def interval(cls, lo, hi, name="x", periodic=False):
        return cls((Interval(lo, hi),), (name,), frozenset({name}) if periodic else frozenset())

    def describe(self) -> str:
        return ", ".join(f"{n} in [{b.lo:.6g}, {b.hi:.6g}]" for n, b in zip(self.names, self.bounds))


@dataclass(frozen=True)
class TailCertificate:
    """Closed-form argument for the part of an unbounded domain outside the core.

    ``prove()`` returns (ok, explanation).
    """

    window: str
    prove: Callable
    description: str = ""

    def run(self):
        try:
            ok, why = self.prove()
        except Exception as exc:  # a failed proof is reported, not raised
            return False, f"{type(exc).__name__}: {exc}"
        return bool(ok), why


# ---------------------------------------------------------------------------
# branch and bound core

def _enclose(f, box, centered):
    natural = f(*box)
    if not centered or len(box) != 1:
        return natural
    x = box[0]
    if x.is_point:
        return natural
    m = Interval(x.mid())
    try:
        mv = f(m) + derivative_enclosure(f, x) * (x - m)
    except (ArithmeticError, ValueError):
        return natural
    return natural.intersect(mv) or natural


def _split(box):
    widths = [b.width() for b in box]
    k = max(range(len(box)), key=lambda i: (widths[i], -i))
    left, right = box[k].bisect()
    return box[:k] + (left,) + box[k + 1:], box[:k] + (right,) + box[k + 1:]


def verify_nonneg(f, region: Region, strict: bool = False, *, claim: str = "nonneg",
                  tails=(), centered: bool = False, max_depth: int | None = None,
                  max_boxes: int = 200_000) -> VerdictRecord:
    """Prove f >= 0 (or > 0 when ``strict``) on ``region`` plus certified tails."""
    t0 = time.perf_counter()
    max_depth = _DEPTH.get() if max_depth is None else max_depth
    dim = len(region.bounds)
    counter = itertools.count()
    heap = [(0.0, next(counter), 0, region.bounds)]
    lowest = math.inf
    best_point = math.inf
    witness = None
    undecided = None
    boxes = 0

    def bad(value):
        return value.hi <= 0 if strict else value.hi < 0

    def good(value):
        return value.lo > 0 if strict else value.lo >= 0

    while heap:
        _, _, depth, box = heapq.heappop(heap)
        boxes += 1
        val = _enclose(f, box, centered)
        mids = tuple(Interval(b.mid()) for b in box)
        pv = f(*mids)
        if pv.hi < best_point:
            best_point = pv.hi
        if bad(pv):
            witness = tuple(float(m.lo) for m in mids)
            lowest = min(lowest, val.lo)
            break
        if good(val):
            lowest = min(lowest, val.lo)
            continue
        if depth >= max_depth * dim or boxes >= max_boxes:
            undecided = box
            lowest = min(lowest, val.lo)
            break
        for child in _split(box):
            heapq.heappush(heap, (boxes, next(counter), depth + 1, child))

    for _, _, _, box in heap:
        lowest = min(lowest, f(*box).lo)
    margin = Interval(min(lowest, best_point), best_point) if math.isfinite(best_point) \
        else Interval(lowest, math.inf)

    tail_notes, tail_ok = [], True
    for tc in tails:
        ok, why = tc.run()
        tail_notes.append(f"tail {tc.window}: {'certified' if ok else 'NOT certified'} ({why})")
        tail_ok = tail_ok and ok

    if witness is not None:
        verdict = Verdict.REFUTED
    elif undecided is not None or not tail_ok:
        verdict = Verdict.UNDECIDED
    else:
        verdict = Verdict.PROVED
    rec = VerdictRecord(claim, verdict, margin, boxes_explored=boxes, tail_handled=bool(tails) and tail_ok,
                        strict=strict, tail_window="; ".join(tc.window for tc in tails), witness=witness,
                        notes=[f"region {region.describe()}"] + tail_notes,
                        seconds=time.perf_counter() - t0)
    if undecided is not None:
        rec.details["worst_box"] = tuple((b.lo, b.hi) for b in undecided)
    return rec


def verify_monotone(f, interval, direction: str = "increasing", *, claim: str = "monotone",
                    strict: bool = True, tails=(), max_depth: int | None = None) -> VerdictRecord:
    """Certify the sign of f' on ``interval`` (f must accept Jet arguments)."""
    if direction not in ("increasing", "decreasing"):
        raise ValueError("direction must be 'increasing' or 'decreasing'")
    sign = 1 if direction == "increasing" else -1
    lo, hi = (interval.lo, interval.hi) if isinstance(interval, Interval) else interval

    def slope(x):
        return derivative_enclosure(f, x) * sign

    rec = verify_nonneg(slope, Region.interval(lo, hi), strict=strict, claim=claim, tails=tails,
                        max_depth=max_depth)
    rec.details["direction"] = direction
    return rec


# ---------------------------------------------------------------------------
# periodic Q and the G function

def verify_Q(a="0.51") -> VerdictRecord:
    """Q(phi) = 4(1 + cos phi)(a + cos phi)^2 >= 0 over a period.

    The factored form is certified box by box; the cosine series from
    :func:`~chebcert.graph.expand_Q` is cross-checked against it.
    """
    from .graph import expand_Q

    a_iv = a if isinstance(a, Interval) else Interval(str(a))
    poly = expand_Q(a_iv)

    def factored(phi):
        c = phi.cos()
        return 4 * (1 + c) * (a_iv + c).sqr()

    rec = verify_nonneg(factored, Region.interval(0.0, 2 * math.pi, "phi", periodic=True),
                        strict=False, claim="Q_nonneg")
    disagreements = 0
    for k in range(1000):
        phi = Interval(2 * math.pi * k / 1000)
        if not factored(phi).overlaps(poly(phi)):
            disagreements += 1
    rec.details["series_mismatches"] = disagreements
    rec.details["coefficients"] = poly.coeffs
    q_pi = factored(CONST.pi)
    rec.notes.append(f"Q(pi) encloses {q_pi}; the claim is non-strict")
    if disagreements:
        rec.verdict = Verdict.UNDECIDED
        rec.notes.append("cosine series disagrees with the factored form")
    return rec


def _alpha9_identities():
    a = fn.alpha9()
    checks = {
        "alpha9 * alpha9^-1 = 1": a * (1 / a),
        "kappa (alpha9 + alpha9^-1) = 1": fn.kappa() * (a + 1 / a),
        "alpha9^2 + alpha9^-2 = 3": a * a + 1 / (a * a),
    }
    target = {"alpha9 * alpha9^-1 = 1": 1, "kappa (alpha9 + alpha9^-1) = 1": 1, "alpha9^2 + alpha9^-2 = 3": 3}
    return {k: v.contains(target[k]) for k, v in checks.items()}


def verify_G_nonpositive(window: float = 50.0) -> VerdictRecord:
    """G(alpha9, 1/alpha9, 1; v) <= 0 for all real v.

    The reduced rational form is valid by three exact identities of alpha9;
    on the core [0, window] it is certified by branch and bound, beyond it
    by sign structure.  Negative v follow by evenness.
    """
    a = fn.alpha9()

    def neg_g(v):
        return -fn.G_reduced(v)

    def tail():
        v = Interval(window, math.inf)
        v2 = v.sqr()
        num, den = v2, (v2 + 1) * (v2 + a * a) * (v2 + 1 / (a * a))
        return num.lo >= 0 and den.lo > 0, f"-G = v^2 / (positive cubic in v^2) on [{window}, inf)"

    rec = verify_nonneg(neg_g, Region.interval(0.0, window, "v"), strict=False, claim="G_nonpositive",
                        tails=(TailCertificate(f"|v| >= {window}", tail),))
    ids = _alpha9_identities()
    rec.details["identities"] = ids
    mismatches = sum(not fn.G(a, 1 / a, 1, Interval(v)).overlaps(fn.G_reduced(Interval(v)))
                     for v in np.linspace(0, 20, 401))
    rec.details["general_form_mismatches"] = int(mismatches)
    if not all(ids.values()) or mismatches:
        rec.verdict = Verdict.UNDECIDED
    rec.notes.append("evenness in v covers v < 0")
    return rec


# ---------------------------------------------------------------------------
# the infimum of G

@functools.lru_cache(maxsize=8)
def locate_G0_details(tol: float = 1e-10, w_max: float = 100.0):
    """Branch-and-bound minimisation of G(alpha9, 1/alpha9, 1; v) in w = v^2.

    Returns (enclosure of the infimum, window of minimising v, boxes).  The
    function of w is -w/((w+1)(w+alpha9^2)(w+alpha9^-2)); for w >= w_max its
    modulus is below 1/w^2, which excludes the tail once an upper bound
    below -1/w_max^2 is known.
    """
    a = fn.alpha9()
    a2, ia2 = a * a, 1 / (a * a)

    def h(w):
        return -w / ((w + 1) * (w + a2) * (w + ia2))

    def enclose(box):
        m = Interval(box.mid())
        c = taylor_coefficients(h, m, 1)
        c2 = taylor_coefficients(h, box, 2)[2]
        d = box - m
        form = c[0] + c[1] * d + c2 * d.sqr()
        nat = h(box)
        return nat.intersect(form) or nat

    upper = math.inf
    counter = itertools.count()
    root = Interval(0.0, w_max)
    heap = [(enclose(root).lo, next(counter), root)]
    boxes = 0
    while heap:
        lo, _, box = heap[0]
        if upper - lo <= tol:
            break
        heapq.heappop(heap)
        boxes += 1
        if boxes > 200_000:
            raise DepthExceeded("locate_G0 exceeded its box budget")
        for child in box.bisect():
            pv = h(Interval(child.mid())).hi
            upper = min(upper, pv)
            e = enclose(child)
            if e.lo <= upper:
                heapq.heappush(heap, (e.lo, next(counter), child))
    tail_bound = -1.0 / (w_max * w_max)
    if not upper < tail_bound:
        raise DepthExceeded("tail w >= w_max could not be excluded")
    lower = min(b[0] for b in heap)
    window = heap[0][2]
    for _, _, b in heap:
        window = window.hull(b)
    v_window = (window.sqrt().lo, window.sqrt().hi)
    return Interval(lower, upper), v_window, boxes


def locate_G0(tol: float = 1e-10) -> Interval:
    """Enclosure of inf_v G(alpha9, 1/alpha9, 1; v)."""
    if tol > 1e-8:
        raise ValueError("locate_G0 needs tol <= 1e-8")
    return locate_G0_details(tol)[0]


# ---------------------------------------------------------------------------
# monotonicity claims

def _positive_on_ray(start, *factors):
    """Every factor has a positive lower bound on [start, inf)."""
    def prove():
        v = Interval(start, math.inf)
        lows = [f(v).lo for f in factors]
        return all(x > 0 for x in lows), "factor lower bounds " + ", ".join(f"{x:.3g}" for x in lows)
    return prove


def monotone_suite(window: float = 200.0) -> list:
    """The monotonicity and positivity claims used by the density and zero-free bounds."""
    out = []
    a6 = fn.alpha6()

    rec = verify_monotone(fn.f3, (1.0, 1.75), "increasing", claim="f3_increasing_1_1.75")
    out.append(rec)

    # phi2' = 2/(v(v+2)); phi2(1/2) = 0 exactly, so increasing gives phi2 >= 0
    tail2 = TailCertificate(f"v >= {window}", _positive_on_ray(window, lambda v: v, lambda v: v + 2),
                            "phi2'(v) = 2/(v(v+2))")
    rec = verify_monotone(fn.phi2, (0.5, window), "increasing", claim="phi2_increasing", tails=(tail2,))
    at_half = fn.phi2(Interval(0.5))
    rec.details["phi2_at_half"] = at_half
    if not at_half.contains(0):
        rec.verdict = Verdict.UNDECIDED
        rec.notes.append(f"phi2(1/2) = {at_half} does not contain 0")
    out.append(rec)

    # phi1: minimum at 2/(alpha6 - 1); beyond the window phi1 increases
    def phi1_tail():
        v = Interval(window, math.inf)
        slope_num = (a6 - 1) * v - 2
        start = fn.phi1(Interval(window))
        return slope_num.lo > 0 and start.lo > 0, \
            f"phi1'(v) = ((alpha6-1)v - 2)/(v(v+2)) > 0 and phi1({window}) >= {start.lo:.4g}"

    rec = verify_nonneg(fn.phi1, Region.interval(0.5, window, "v"), strict=True, claim="phi1_positive",
                        tails=(TailCertificate(f"v >= {window}", phi1_tail),), centered=True)
    rec.details["phi1_at_critical"] = fn.phi1(2 / (a6 - 1))
    out.append(rec)

    for a in (0, 1):
        rec = verify_monotone(lambda s, a=a: fn.Gamma_a(a, s), (1.0, 2.0), "increasing",
                              claim=f"Gamma_{a}_increasing_1_2")
        out.append(rec)
    rec = verify_nonneg(lambda s: fn.Gamma_a(1, s) - fn.Gamma_a(0, s), Region.interval(1.0, 2.0, "s"),
                        strict=True, claim="Gamma_1_above_Gamma_0")
    out.append(rec)
    return out


# ---------------------------------------------------------------------------
# piecewise lower bounds

_PIECEWISE = {
    # name: (function, near-zero lower bound of phi(v)/v valid for 0 < v <= eta,
    #        lower bound of phi(v) valid for v >= V, description)
    # phi6: e^-v - e^-2v <= e^-v (1 - e^-v)... gives phi6 >= 1 - e^-2v; then 1 - e^-x >= x - x^2/2
    "phi6": (fn.phi6, lambda v: 2 - 2 * v, lambda V: 1 - (-2 * V).exp() / V.sqr(),
             "phi6(v)/v >= 2 - 2v near 0; phi6(v) >= 1 - e^(-2v)/v^2 for large v"),
    "phi7": (fn.phi7, lambda v: Interval(2.5) - Interval(3.125) * v, lambda V: 1 - (-2.5 * V).exp(),
             "phi7(v)/v >= 5/2 - 25v/8 near 0; phi7 increasing"),
}


def verify_piecewise_lower(phi: str, eta: float = 0.25, window: float = 20.0) -> VerdictRecord:
    """phi(v) >= phi(1) min(1, v) for all v > 0, for phi in {phi6, phi7}.

    On (0, eta] a closed-form lower bound of phi(v)/v is used; on [eta, 1]
    phi(v)/v is certified decreasing, so it stays above its value phi(1) at
    v = 1; on [1, window] phi is certified increasing, and a closed-form
    bound covers v >= window.
    """
    f, near, far, desc = _PIECEWISE[phi]
    t0 = time.perf_counter()
    at1 = f(Interval(1.0))
    recs = []

    near_val = near(Interval(0.0, eta))
    near_ok = near_val.lo > at1.hi
    ratio = verify_monotone(lambda v: f(v) / v, (eta, 1.0), "decreasing", claim=f"{phi}_ratio_decreasing")
    recs.append(ratio)

    far_val = far(Interval(window))
    tail = TailCertificate(f"v >= {window}", lambda: (far_val.lo > at1.hi,
                                                      f"lower bound {far_val.lo:.6g} vs phi(1) {at1.hi:.6g}"))
    grow = verify_monotone(f, (1.0, window), "increasing", claim=f"{phi}_increasing_beyond_1", tails=(tail,))
    recs.append(grow)

    ok = near_ok and all(r.proved for r in recs)
    undecided = any(r.verdict is Verdict.UNDECIDED for r in recs) or not near_ok
    verdict = Verdict.PROVED if ok else (Verdict.REFUTED if not undecided else Verdict.UNDECIDED)
    margin = Interval(min(near_val.lo - at1.hi, ratio.margin.lo, grow.margin.lo),
                      max(ratio.margin.hi, grow.margin.hi))
    printed = {"phi6": "0.94592⋯", "phi7": "0.91791⋯"}[phi]
    rec = VerdictRecord(f"{phi}_piecewise_lower", verdict, margin,
                        boxes_explored=sum(r.boxes_explored for r in recs), tail_handled=grow.tail_handled,
                        strict=False, tail_window=f"v in (0, {eta}] and v >= {window}",
                        notes=[desc], seconds=time.perf_counter() - t0)
    rec.details.update({"phi_at_1": at1, "printed": printed,
                        "adjudication": matches_printed(at1, printed),
                        "parts": recs, "near_zero_bound": near_val})
    if rec.details["adjudication"] not in (Adjudication.CONFIRMS, Adjudication.TIGHTER):
        rec.verdict = Verdict.UNDECIDED if rec.verdict is Verdict.PROVED else rec.verdict
    return rec


# ---------------------------------------------------------------------------
# chain-level checks

def _graph(params, graph):
    if graph is not None:
        return graph
    from .graph import derive_all
    return derive_all(params or ParamSet())


def _need(graph, *ids):
    missing = [k for k in ids if k not in graph or graph[k].enclosure is None]
    if missing:
        raise KeyError("graph lacks values for " + ", ".join(missing))
    return [graph.value(k) for k in ids]


def verify_zfr(params: ParamSet | None = None, graph=None, B13=None) -> VerdictRecord:
    """b_1/(b_0 b + B_13) - 1/b >= 1/(rounded zero-free constant).

    ``B13`` overrides the computed B_13 (for stress tests).  Without a
    rounding the claim is that the gap is positive at all.
    """
    params = params or ParamSet()
    t0 = time.perf_counter()
    try:
        g = _graph(params, graph)
        b0, b1, b, b13 = _need(g, "b_0", "b_1", "b_zfr", "B_13")
    except (KeyError, ArithmeticError, ValueError) as exc:
        return VerdictRecord("zfr", Verdict.UNDECIDED, Interval(-math.inf, math.inf), notes=[str(exc)])
    if B13 is not None:
        b13 = B13 if isinstance(B13, Interval) else Interval(B13)
    gap = b1 / (b0 * b + b13) - 1 / b
    target = params.rounding("zfr_round")
    margin = gap if target is None else gap - 1 / target
    strict = target is None
    if (margin.lo > 0) or (not strict and margin.lo >= 0):
        verdict = Verdict.PROVED
    elif margin.hi < 0 or (strict and margin.hi <= 0):
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.UNDECIDED
    rec = VerdictRecord("zfr", verdict, margin, strict=strict, seconds=time.perf_counter() - t0)
    rec.details.update({"gap": gap, "target": target, "B_13": b13})
    if gap.lo > 0:
        rec.details["constant"] = 1 / gap
    return rec


def _term_witness(lhs, terms, extra, L_candidates):
    """Points where lhs - (extra + sum of terms at L) is certainly negative."""
    for L in L_candidates:
        L = Interval(L) if not isinstance(L, Interval) else L
        total = extra
        for t in terms:
            total = total + t(L)
        m = lhs - total
        if m.hi < 0:
            return float(L.mid()), m
    return None, None


def _feasibility(claim, lhs, extra, terms, L0):
    """Check lhs > extra + sup_{L >= L0} sum(terms)."""
    sup, trace = fn.sup_over_halfline(terms, L0)
    margin = lhs - extra - sup
    cands = [L0] + [t.critical_point() for t in terms if t.critical_point() is not None]
    cands = [c for c in cands if Interval(c).lo >= L0.lo]
    witness, wm = None, None
    if margin.lo > 0:
        verdict = Verdict.PROVED
    else:
        # unbounded terms: walk outward to find an explicit violation
        grid = cands + [L0 * (2.0 ** k) for k in range(1, 200)]
        witness, wm = _term_witness(lhs, terms, extra, grid)
        verdict = Verdict.REFUTED if witness is not None else Verdict.UNDECIDED
    rec = VerdictRecord(claim, verdict, margin if witness is None else wm, tail_handled=True,
                        strict=True, tail_window="log d_L in [log 3, inf)",
                        witness=None if witness is None else (witness, math.exp(witness)))
    rec.details["trace"] = [(lab, how, str(v)) for lab, how, v in trace]
    rec.details["lhs"] = lhs
    rec.details["relative_margin"] = margin / lhs if witness is None else None
    return rec


def verify_lemma84(params: ParamSet | None = None, graph=None, c16=None) -> VerdictRecord:
    """Both feasibility inequalities of the k1 positivity argument.

    Case (i):  0.9 c16^2 > c14 2^(-2 c12 c16) + sup eps1.
    Case (ii): 0.9 c16^3 > c14 2^(1 - 2 c12 c16) + c13 (3/c7)^2 + sup eps2.
    The sups run over L = log d_L >= log 3 via PowerExpTerm.
    """
    params = params or ParamSet()
    t0 = time.perf_counter()
    g = _graph(params, graph)
    c12, c13, c14, c15, a3, c7 = _need(g, "c_12", "c_13", "c_14", "c_15", "alpha_3", "c_7")
    c16 = Interval(c16) if c16 is not None else params.value("c16")
    consts = {"c_13": c13, "c_15": c15, "c_16": c16, "alpha_3": a3, "c_7": c7}
    L0 = CONST.log3
    half = Interval(0.5)
    decay = (2 * c12 * c16 * half.log()).exp()

    case1 = _feasibility("lemma84_case_i", Interval("0.9") * c16.sqr(), c14 * decay,
                         fn.epsilon_terms(1, consts), L0)
    case2 = _feasibility("lemma84_case_ii", Interval("0.9") * c16.ipow(3),
                         c14 * decay / half + c13 * (3 / c7).sqr(), fn.epsilon_terms(2, consts), L0)
    verdicts = {case1.verdict, case2.verdict}
    if verdicts == {Verdict.PROVED}:
        verdict = Verdict.PROVED
    elif Verdict.REFUTED in verdicts:
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.UNDECIDED
    rel = [r.details["relative_margin"] for r in (case1, case2) if r.details["relative_margin"] is not None]
    margin = rel[0] if len(rel) == 1 else (Interval(min(r.lo for r in rel), min(r.hi for r in rel))
                                          if rel else Interval(-math.inf, 0.0))
    rec = VerdictRecord("lemma84", verdict, margin, tail_handled=True, strict=True,
                        tail_window="log d_L in [log 3, inf)", seconds=time.perf_counter() - t0,
                        witness=case1.witness or case2.witness)
    rec.details.update({"case_i": case1, "case_ii": case2, "c16": c16})
    rec.notes.append("margin is the smaller relative margin of the two cases")
    if c16 is not None and params.c16 == ParamSet().c16:
        small = Interval(1261)
        consts_small = dict(consts, c_16=small)
        d_small = (2 * c12 * small * half.log()).exp()
        alt = _feasibility("lemma84_case_ii_at_1261", Interval("0.9") * small.ipow(3),
                           c14 * d_small / half + c13 * (3 / c7).sqr(), fn.epsilon_terms(2, consts_small), L0)
        rec.details["case_ii_at_1261"] = alt
        rec.notes.append(f"case (ii) at c16 = 1261: {alt.verdict}")
    return rec


def verify_lemma86(params: ParamSet | None = None, graph=None, c23=None) -> VerdictRecord:
    """Feasibility of the k2 positivity argument at x = d_L^c23.

    Case (i) is asserted.  Case (ii) is reported along two routes with
    ``asserted=False``: the eps4 shortcut, and the direct chain that keeps
    1 - beta0 as a variable bounded below by d_L^-c10.
    """
    params = params or ParamSet()
    t0 = time.perf_counter()
    g = _graph(params, graph)
    c7, c10, c19, c20, c21, c15p, a4 = _need(g, "c_7", "c_10", "c_19", "c_20", "c_21", "c_15p", "alpha_4")
    c23 = Interval(c23) if c23 is not None else params.value("c23")
    consts = {"c_7": c7, "c_10": c10, "c_19": c19, "c_20": c20, "c_21": c21, "c_15p": c15p,
              "alpha_4": a4, "c_23": c23}
    L0 = CONST.log3
    gexp = 4 * c19 * c23
    expo = 2 * c19 * c23 - 1

    # case (i): 0.9 > c21 c7^g L^(1-g) + sup eps3
    lead = fn.PowerExpTerm(c21 * (c7.log() * gexp).exp(), 1 - gexp, Interval(0.0), "c21 c7^g L^(1-g)")
    case1 = _feasibility("lemma86_case_i", Interval("0.9"), Interval(0.0),
                         [lead] + fn.epsilon_terms(3, consts), L0)

    # case (ii), shortcut: 0.9 c23 > sup eps4
    short = _feasibility("lemma86_case_ii_shortcut", Interval("0.9") * c23, Interval(0.0),
                         fn.epsilon_terms(4, consts), L0)
    short.asserted = False
    short.notes.append(f"exponent 2 c19 c23 - 1 = {expo}; substituting an upper bound for 1 - beta0 "
                       f"into a negative power is not monotone-safe")

    # case (ii), direct: every term decreases in u = 1 - beta0, so the inf of u = d^-c10 is worst
    K = 2 * a4 * c23.sqrt() / CONST.log3
    direct_terms = [
        fn.PowerExpTerm(c20, Interval(0.0), c23 - c10, "c20 d^(c10-c23)"),
        fn.PowerExpTerm(c21, Interval(0.0), c10 * expo, "c21 d^(c10 (1 - 2 c19 c23))"),
        fn.PowerExpTerm(c15p, Interval(0.0), 2 * c23 - c10, "c15' d^(c10-2c23)"),
        fn.PowerExpTerm(K, Interval(1.5), c23 - c10, "K L^(3/2) d^(c10-c23)"),
    ]
    direct = _feasibility("lemma86_case_ii_direct", Interval("0.9") * c23, Interval(0.0), direct_terms, L0)
    direct.asserted = False
    direct.notes.append("u = 1 - beta0 ranges over [d^-c10, min(1/(c23 L), c7^2 (3L)^-2)]; "
                        "all terms are nonincreasing in u")
    if expo.hi < 0:
        direct.notes.append("the c21 term grows like d^(c10 (1 - 2 c19 c23)) at the smallest admissible u")

    verdict = case1.verdict
    rec = VerdictRecord("lemma86", verdict, case1.margin, tail_handled=True, strict=True,
                        tail_window="log d_L in [log 3, inf)", seconds=time.perf_counter() - t0,
                        witness=case1.witness)
    rec.details.update({"case_i": case1, "case_ii_shortcut": short, "case_ii_direct": direct,
                        "exponent_2c19c23_minus_1": expo, "c23": c23})
    rec.notes.append(f"case (ii) shortcut: {short.verdict}; direct chain: {direct.verdict} (reported only)")
    return rec


def verify_cor75(params: ParamSet | None = None, graph=None) -> Interval:
    """c_10 recomputed from the cor75 parameter set (c_check_cor75, sigma0_cor75)."""
    g = _graph(params, graph)
    return g.value("c_10")


def _cor75_record(params, graph) -> VerdictRecord:
    t0 = time.perf_counter()
    g = _graph(params, graph)
    rec_notes, ok = [], True
    for key in ("c_8_cor75", "c_7_cor75", "c_10"):
        n = g[key]
        rec_notes.append(f"{key} = {n.enclosure} vs {n.printed}: {n.adjudication}")
        ok = ok and n.adjudication in (Adjudication.CONFIRMS, Adjudication.TIGHTER)
    c10 = verify_cor75(params, g)
    bad = any(g[k].adjudication is Adjudication.CONTRADICTS for k in ("c_8_cor75", "c_7_cor75", "c_10"))
    verdict = Verdict.PROVED if ok else (Verdict.REFUTED if bad else Verdict.UNDECIDED)
    rec = VerdictRecord("cor75", verdict, c10, notes=rec_notes, seconds=time.perf_counter() - t0)
    rec.notes.append("imaginary quadratic branch uses the imported bound (axiom)")
    return rec


def verify_density_conditions(params: ParamSet | None = None, graph=None) -> VerdictRecord:
    """Sign conditions and printed bounds of the zero-counting estimates."""
    t0 = time.perf_counter()
    g = _graph(params, graph)
    keys = ["a_density_1_long", "a_density_2_long", "a_density_3_long", "a_density_4_long",
            "a_density_3_short", "B_1", "B_2", "density_constant", "density_used",
            "density_short_radius_slack"]
    failed = [k for k in keys if g[k].status in ("FAILED", "UNEVALUATED")]
    a3 = g.value("a_density_3_short")
    s = 2 * a3 + g.value("a_density_4_short")
    margin = Interval(min(-a3.hi, s.lo), min(-a3.lo, s.hi))
    verdict = Verdict.PROVED if not failed and margin.lo > 0 else \
        (Verdict.REFUTED if any(g[k].status == "FAILED" for k in keys) else Verdict.UNDECIDED)
    rec = VerdictRecord("density_conditions", verdict, margin, seconds=time.perf_counter() - t0)
    rec.notes.append("margin: min(-a_3, 2 a_3 + a_4) at the short sigma")
    if failed:
        rec.notes.append("failed nodes: " + ", ".join(failed))
    return rec


# ---------------------------------------------------------------------------
# prime sieve checks

_U = 2.0 ** -53


def sandbox_check_lemma32(x_max: int = 10**6, tail_points=(101, 150, 1000, 10**4, 10**5)) -> VerdictRecord:
    """Exact-sieve checks of the prime-counting inputs.

    (i)   pi(x) < alpha0 x/log x at every integer 2 <= x <= x_max (between
          integers pi is constant and x/log x increases for x >= e);
    (ii)  S(x) <= (2 alpha0/log 2) sqrt(x) at every integer x <= x_max;
    (iii) sum over primes of p^-h_p/(1 - 1/p) <= 4.02 alpha0/(x log x) at the
          sample points, using primes up to x_max and sum_{n > x_max} 1/(n(n-1)) = 1/x_max.
    """
    if x_max > 10**8:
        raise ValueError("x_max beyond desk scale (10^8)")
    if x_max < 2:
        raise ValueError("x_max must be at least 2")
    t0 = time.perf_counter()
    alpha0 = ParamSet().value("alpha0")
    a0_hi = float(alpha0.hi)
    flags = prime_flags(x_max)
    pi = np.cumsum(flags, dtype=np.int64)
    xs = np.arange(2, x_max + 1, dtype=np.float64)
    rhs = a0_hi * xs / np.log(xs)
    lhs = pi[2:].astype(np.float64)
    rel = (rhs - lhs) / rhs
    # the closest few points are rechecked with interval arithmetic
    tight = np.argsort(rel, kind="stable")[:32]
    ok_i = bool(np.all(rel > 1e-12))
    worst_i = None
    for k in tight.tolist():
        x = k + 2
        margin = alpha0 * x / Interval(x).log() - int(pi[x])
        ok_i = ok_i and margin.lo > 0
        if worst_i is None or margin.lo < worst_i[1]:
            worst_i = (x, float(margin.lo))

    powers = np.array(prime_powers_up_to(x_max), dtype=np.int64)
    S = np.searchsorted(powers, np.arange(0, x_max + 1), side="right")
    coef = 2 * a0_hi / math.log(2) * (1 + 1e-12)
    s_rhs = coef * np.sqrt(np.arange(0, x_max + 1, dtype=np.float64))
    slack = s_rhs[2:] - S[2:]
    ok_ii = bool(np.all(slack > 0))
    k = int(np.argmin(slack))
    # recheck the tightest point rigorously
    x_w = k + 2
    m_ii = 2 * alpha0 / CONST.log2 * Interval(x_w).sqrt() - int(S[x_w])
    ok_ii = ok_ii and m_ii.lo >= 0
    worst_ii = (x_w, float(m_ii.lo))

    primes = primes_up_to(x_max).tolist()
    tail_rows = []
    ok_iii = True
    for x in tail_points:
        if x < 101 or x > x_max:
            continue
        x2 = x * x
        terms = []
        for p in primes:
            h = 2
            q = p * p
            while q < x2:
                q *= p
                h += 1
            terms.append(1.0 / (float(q) * (1.0 - 1.0 / p)))
        partial = math.fsum(terms)
        # each term carries at most 4 roundings; fsum is correctly rounded
        # primes beyond the sieve have h_p = 2 and sum_{n > N} 1/(n(n-1)) = 1/N
        upper = (partial + 1.0 / x_max) * (1 + 8 * _U)
        bound = Interval("4.02") * alpha0 / (Interval(x) * Interval(x).log())
        ok = upper < bound.lo
        ok_iii = ok_iii and ok
        tail_rows.append({"x": x, "sum_upper": upper, "bound": float(bound.lo), "ok": ok})

    verdict = Verdict.PROVED if (ok_i and ok_ii and ok_iii) else Verdict.REFUTED
    margin = Interval(min(worst_i[1], worst_ii[1]))
    rec = VerdictRecord("lemma32_sandbox", verdict, margin, boxes_explored=x_max - 1,
                        seconds=time.perf_counter() - t0)
    rec.details.update({
        "x_max": x_max,
        "pi_x_max": int(pi[x_max]),
        "S_100": int(S[100]) if x_max >= 100 else None,
        "rosser_ok": ok_i, "rosser_tightest": worst_i,
        "prime_power_ok": ok_ii, "prime_power_tightest": worst_ii,
        "tail_ok": ok_iii, "tail_rows": tail_rows,
    })
    return rec


# ---------------------------------------------------------------------------
# suite

SELECTORS = ("all", "Q", "G0", "monotone", "lemma84", "lemma86", "zfr", "cor75", "density")


def run_suite(selector: str = "all", params: ParamSet | None = None, graph=None) -> list:
    """Run the selected checks; returns VerdictRecords in a fixed order."""
    if selector not in SELECTORS:
        raise ValueError(f"unknown selector {selector!r}; choose from {', '.join(SELECTORS)}")
    params = params or ParamSet()
    want = (lambda s: True) if selector == "all" else (lambda s: s == selector)
    needs_graph = selector in ("all", "lemma84", "lemma86", "zfr", "cor75", "density")
    g = _graph(params, graph) if needs_graph else None
    out = []
    if want("Q"):
        out.append(verify_Q(params.q_shape_a))
    if want("G0"):
        out.append(verify_G_nonpositive())
        t0 = time.perf_counter()
        enc, window, boxes = locate_G0_details(1e-10)
        axiom = params.value("G0_axiom")
        margin = enc - axiom
        ok = enc.width() <= 2e-8 and margin.lo >= 0
        rec = VerdictRecord("G0_located", Verdict.PROVED if ok else Verdict.UNDECIDED, margin,
                            boxes_explored=boxes, strict=False, tail_handled=True, tail_window="v^2 >= 100",
                            seconds=time.perf_counter() - t0)
        rec.details.update({"enclosure": enc, "v_window": window,
                            "adjudication": matches_printed(enc, str(params.G0_axiom))})
        rec.notes.append("margin: located infimum minus the imported value (must be >= 0)")
        out.append(rec)
    if want("monotone"):
        out.extend(monotone_suite())
        out.append(verify_piecewise_lower("phi6"))
        out.append(verify_piecewise_lower("phi7"))
    if want("density"):
        out.append(verify_density_conditions(params, g))
    if want("zfr"):
        out.append(verify_zfr(params, g))
    if want("cor75"):
        out.append(_cor75_record(params, g))
    if want("lemma84"):
        rec = verify_lemma84(params, g)
        out.extend([rec, rec.details["case_i"], rec.details["case_ii"]])
        out[-2].asserted = out[-1].asserted = False  # already covered by the combined record
    if want("lemma86"):
        rec = verify_lemma86(params, g)
        out.extend([rec, rec.details["case_ii_shortcut"], rec.details["case_ii_direct"]])
    return out
