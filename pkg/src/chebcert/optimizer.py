"""Parameter sweeps and local refinement with the rigorous chain as oracle.

Every grid point is a full recomputation of the constants the objective
depends on, followed by the verifier claims that consume them.  A point is
feasible only when all of those claims are PROVED; objective values are
reported as enclosures.
"""

from __future__ import annotations

import concurrent.futures
import contextvars
import itertools
import math
from dataclasses import dataclass, field
from decimal import Decimal

from .graph import NodeStatus, build_graph
from .interval import Interval
from .params import ParamError, ParamSet
from .records import Verdict

__all__ = [
    "OBJECTIVES",
    "Objective",
    "SweepSpec",
    "SweepRow",
    "NoImprovement",
    "InfeasibleSeed",
    "evaluate_point",
    "sweep",
    "refine",
    "best_row",
    "rows_to_csv",
]


class NoImprovement(Exception):
    """Refinement found nothing better than the seed; ``.seed`` holds it."""

    def __init__(self, seed, message="no feasible improvement found"):
        super().__init__(message)
        self.seed = seed


class InfeasibleSeed(ValueError):
    """The starting point of a refinement does not pass the verifier."""


def _claims_zfr(params, graph):
    from .verifier import verify_Q
    gap = graph.value("zfr_gap")
    rec = verify_Q(params.q_shape_a)
    return [("Q_nonneg", rec.verdict), ("zfr_gap_positive", Verdict.PROVED if gap.lo > 0 else Verdict.REFUTED)]


def _claims_positive(node):
    def claims(params, graph):
        v = graph.value(node)
        return [(f"{node}_positive", Verdict.PROVED if v.lo > 0 else Verdict.REFUTED)]
    return claims


def _claims_lemma84(params, graph):
    from .verifier import verify_lemma84
    return [("lemma84", verify_lemma84(params, graph).verdict)]


def _claims_lemma86(params, graph):
    from .verifier import verify_lemma86
    return [("lemma86_case_i", verify_lemma86(params, graph).verdict)]


def _claims_final(params, graph):
    return _claims_lemma84(params, graph) + _claims_lemma86(params, graph)


def _claims_none(params, graph):
    return []


@dataclass(frozen=True)
class Objective:
    name: str
    node: str
    sense: int          # +1 minimise, -1 maximise
    targets: tuple      # nodes whose subgraph must evaluate cleanly
    claims: object      # (params, graph) -> [(claim, Verdict)]
    default_params: tuple

    def score(self, enclosure: Interval) -> float:
        """Conservative scalar for comparisons: the worst end of the enclosure."""
        return enclosure.hi if self.sense > 0 else -enclosure.lo


_LEMMA84_NODES = ("c_12", "c_13", "c_14", "c_15", "alpha_3", "c_7", "c_16")
_LEMMA86_NODES = ("c_7", "c_10", "c_19", "c_20", "c_21", "c_15p", "alpha_4", "c_23")

OBJECTIVES = {o.name: o for o in (
    Objective("minimize_zfr_constant", "zfr_constant", 1, ("zfr_constant", "zfr_gap"), _claims_zfr,
              ("b_zfr", "delta_zfr", "eta_zfr")),
    Objective("maximize_c8", "c_8_generic_raw", -1, ("c_8_generic_raw", "c_7_generic"),
              _claims_positive("c_7_generic"), ("sigma0_generic", "c_check")),
    Objective("minimize_c10", "c_10", 1, ("c_10",), _claims_positive("c_10"),
              ("sigma0_cor75", "c_check_cor75")),
    Objective("minimize_c16", "c_16", 1, _LEMMA84_NODES, _claims_lemma84, ("c16",)),
    Objective("minimize_c23", "c_23", 1, _LEMMA86_NODES, _claims_lemma86, ("c23",)),
    Objective("minimize_A1", "A_1", 1, ("A_1",) + _LEMMA84_NODES + _LEMMA86_NODES, _claims_final,
              ("c16", "c23")),
    Objective("minimize_density_constant", "density_constant", 1,
              ("density_constant", "density_used", "density_short_radius_slack"), _claims_none,
              ("sigma_density_short",)),
)}

# parameters whose change invalidates a fixed rounding downstream
_ROUNDINGS = {
    "sigma0_generic": ("c8_generic_round",),
    "sigma0_imagquad": ("c8_imagquad_round",),
    "sigma0_nontrivial": ("c8_nontrivial_round",),
    "c_check": ("c8_generic_round", "c8_imagquad_round", "c8_nontrivial_round"),
    "delta_dh": ("c8_generic_round", "c8_imagquad_round", "c8_nontrivial_round"),
    "eta_dh": ("c8_generic_round", "c8_imagquad_round", "c8_nontrivial_round"),
    "q_shape_a": ("zfr_round",),
    "b_zfr": ("zfr_round",),
    "delta_zfr": ("zfr_round",),
    "eta_zfr": ("zfr_round",),
    "sigma_density_short": ("density_round",),
}


def _release_roundings(params: ParamSet, varied) -> ParamSet:
    drop = {r for p in varied for r in _ROUNDINGS.get(p, ())}
    return params.replace(**{r: "" for r in sorted(drop)}) if drop else params


@dataclass
class SweepSpec:
    """Grid over one or more parameters.

    ``grid`` maps a parameter name to a list of values (text or numbers);
    the sweep visits the Cartesian product in row-major order.
    """

    grid: dict
    objective: str
    base: ParamSet = field(default_factory=ParamSet)
    oracle: str = "chain"

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}; choose from {', '.join(OBJECTIVES)}")
        known = set(self.base.to_dict())
        bad = [k for k in self.grid if k not in known]
        if bad:
            raise ParamError("unknown parameter(s) in sweep: " + ", ".join(bad))
        self.grid = {k: [_text(v) for v in vals] for k, vals in self.grid.items()}

    @classmethod
    def from_range(cls, name, lo, hi, step, objective, base=None):
        """Decimal grid lo, lo+step, ..., hi computed exactly."""
        lo, hi, step = Decimal(str(lo)), Decimal(str(hi)), Decimal(str(step))
        if step <= 0:
            raise ValueError("step must be positive")
        n = int((hi - lo) / step)
        vals = [str(lo + k * step) for k in range(n + 1)]
        return cls({name: vals}, objective, base or ParamSet())

    @classmethod
    def from_dict(cls, d: dict):
        base = ParamSet().replace(**d.get("base", {}))
        grid = dict(d.get("grid", {}))
        for name, r in d.get("ranges", {}).items():
            lo, hi, step = (Decimal(str(x)) for x in (r["lo"], r["hi"], r["step"]))
            grid[name] = [str(lo + k * step) for k in range(int((hi - lo) / step) + 1)]
        return cls(grid, d.get("objective", "minimize_A1"), base, d.get("oracle", "chain"))

    def points(self):
        names = list(self.grid)
        if not names or any(len(v) == 0 for v in self.grid.values()):
            return []
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.grid[n] for n in names))]


def _text(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class SweepRow:
    index: int
    assignment: dict
    params: ParamSet | None
    objective: Interval | None
    feasible: bool
    claims: list
    error: str = ""

    def score(self, objective: Objective) -> float:
        if not self.feasible or self.objective is None:
            return math.inf
        return objective.score(self.objective)


def evaluate_point(params: ParamSet, objective: str, varied=()) -> SweepRow:
    """Objective enclosure and feasibility at one ParamSet."""
    obj = OBJECTIVES[objective]
    try:
        p = _release_roundings(params, varied)
        g = build_graph(p, {"compare_printed": False}).evaluate(targets=obj.targets)
        scope = set(obj.targets).union(*(g.ancestors(k) for k in obj.targets))
        broken = sorted(f"{a}: {g[a].error}" for a in scope
                        if g[a].status in (NodeStatus.FAILED, NodeStatus.UNEVALUATED))
        if broken:
            return SweepRow(-1, {}, p, g[obj.node].enclosure, False, [], "; ".join(broken))
        claims = obj.claims(p, g)
        ok = all(v is Verdict.PROVED for _, v in claims)
        return SweepRow(-1, {}, p, g.value(obj.node), ok, [(c, v.value) for c, v in claims])
    except (ParamError, ArithmeticError, ValueError, KeyError) as exc:
        return SweepRow(-1, {}, None, None, False, [], f"{type(exc).__name__}: {exc}")


def sweep(spec: SweepSpec, threads: int = 1) -> list:
    """Evaluate every grid point; rows come back in grid order."""
    pts = spec.points()
    varied = tuple(spec.grid)

    def one(i, assignment):
        try:
            p = spec.base.replace(**assignment)
        except ParamError as exc:
            return SweepRow(i, assignment, None, None, False, [], str(exc))
        row = evaluate_point(p, spec.objective, varied)
        row.index, row.assignment = i, assignment
        return row

    if threads <= 1 or len(pts) <= 1:
        return [one(i, a) for i, a in enumerate(pts)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(contextvars.copy_context().run, one, i, a) for i, a in enumerate(pts)]
        return [f.result() for f in futs]


def best_row(rows, objective: str):
    obj = OBJECTIVES[objective]
    feas = [r for r in rows if r.feasible]
    if not feas:
        return None
    return min(feas, key=lambda r: (r.score(obj), r.index))


_GOLD = (math.sqrt(5) - 1) / 2


def _golden(f, lo, hi, iters):
    """Golden-section search of f on [lo, hi]; f may return inf."""
    a, b = lo, hi
    c, d = b - _GOLD * (b - a), a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def refine(seed: ParamSet, objective: str, max_iters: int = 3, params=None, *,
           span: float = 0.1, section_iters: int = 20, digits: int = 6, strict: bool = False):
    """Coordinate descent from a feasible seed.

    Each coordinate is searched by golden section over
    [x (1 - span), x (1 + span)]; candidates are rounded to ``digits``
    significant digits and every accepted step is a fully re-verified
    point.  Returns (ParamSet, SweepRow).  With ``strict`` a run that
    cannot improve raises :class:`NoImprovement` (carrying the seed).
    """
    obj = OBJECTIVES[objective]
    names = tuple(params or obj.default_params)
    start = evaluate_point(seed, objective, names)
    if not start.feasible:
        raise InfeasibleSeed(f"seed is not feasible for {objective}: {start.error or start.claims}")
    best, best_row_ = seed, start
    best_score = start.score(obj)
    cache = {}

    def trial(base, name, x):
        text = f"{x:.{digits}g}"
        key = (base, name, text)
        if key not in cache:
            try:
                p = base.replace(**{name: text})
            except ParamError:
                cache[key] = (math.inf, None, None)
                return cache[key]
            row = evaluate_point(p, objective, names)
            cache[key] = (row.score(obj), p, row)
        return cache[key]

    for _ in range(max_iters):
        improved = False
        for name in names:
            x0 = float(best.value(name).mid())
            lo, hi = x0 * (1 - span), x0 * (1 + span)
            x, _ = _golden(lambda x: trial(best, name, x)[0], lo, hi, section_iters)
            score, p, row = trial(best, name, x)
            if p is not None and score < best_score:
                best, best_row_, best_score = p, row, score
                improved = True
        if not improved:
            break
    if best is seed and strict:
        raise NoImprovement(seed)
    return best, best_row_


def rows_to_csv(rows, objective: str) -> str:
    """CSV text of a sweep table with decimal endpoint strings."""
    import csv
    import io

    from .interval import endpoint_to_str

    names = sorted({k for r in rows for k in r.assignment})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index"] + names + [f"{objective}_lo", f"{objective}_hi", "feasible", "claims", "error"])
    for r in rows:
        lo = endpoint_to_str(r.objective.lo) if r.objective is not None else ""
        hi = endpoint_to_str(r.objective.hi) if r.objective is not None else ""
        claims = ";".join(f"{c}={v}" for c, v in r.claims)
        w.writerow([r.index] + [r.assignment.get(n, "") for n in names] + [lo, hi, r.feasible, claims, r.error])
    return buf.getvalue()
