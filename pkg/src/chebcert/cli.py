"""Command-line front end.

Exit codes: 0 everything verified, 1 a contradiction or refutation,
2 tool error (bad config, bad input, I/O), 3 something undecided.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .certificate import Certificate, jsonable, write_atomic
from .interval import CONST, Interval, working_precision
from .params import ParamError, load_config
from .records import Verdict

EXIT_OK, EXIT_REFUTED, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2, 3

SIEVE_LIMIT = 10**8
MODULUS_LIMIT = 10**4


class RangeError(ValueError):
    """Sandbox request beyond desk scale."""


@dataclass
class SandboxResult:
    check: str
    quantities: dict = field(default_factory=dict)
    comparisons: list = field(default_factory=list)
    passed: bool = True

    def to_json(self) -> str:
        return json.dumps(jsonable(asdict(self)), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# shared plumbing

def _params(args):
    return load_config(getattr(args, "config", None))


@contextlib.contextmanager
def _precision(args):
    bits = getattr(args, "precision", None)
    if bits and bits > 53:
        with working_precision(bits):
            yield
    else:
        yield


@contextlib.contextmanager
def _depth(args):
    from .verifier import branch_depth

    d = getattr(args, "bnb_depth", None)
    if d:
        with branch_depth(d):
            yield
    else:
        yield


def _derive(args, params):
    from .graph import derive_all

    return derive_all(params, quad_tol=args.quad_tol, threads=args.threads)


def _claims_exit(records) -> int:
    asserted = [r for r in records if r.asserted]
    if any(r.verdict is Verdict.REFUTED for r in asserted):
        return EXIT_REFUTED
    if any(r.verdict is Verdict.UNDECIDED for r in asserted):
        return EXIT_UNDECIDED
    return EXIT_OK


def _fmt_margin(m) -> str:
    if m is None:
        return "-"
    if isinstance(m, Interval):
        return f"[{m.lo:.6g}, {m.hi:.6g}]"
    return str(m)


def format_table(records) -> str:
    rows = [("claim", "verdict", "margin", "boxes", "seconds")]
    for r in records:
        tag = r.verdict.value + ("" if r.asserted else " (report)")
        rows.append((r.claim, tag, _fmt_margin(r.margin), str(r.boxes_explored), f"{r.seconds:.2f}"))
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def cmd_derive(args) -> int:
    from .verifier import run_suite

    params = _params(args)
    timings = {}
    t0 = time.perf_counter()
    with _precision(args), _depth(args):
        g = _derive(args, params)
        timings["derive"] = time.perf_counter() - t0
        records = []
        if not args.no_claims:
            t1 = time.perf_counter()
            records = run_suite("all", params, g)
            timings["verify"] = time.perf_counter() - t1
    options = {"precision": args.precision or 53, "quad_tol": args.quad_tol, "bnb_depth": args.bnb_depth}
    cert = Certificate.from_graph(g, records, timings, options)
    cert.write(args.out)
    a1 = g["A_1"]
    print(f"A_1 = {a1.enclosure}  ({a1.status.value})")
    bad = cert.contradictions()
    if bad:
        print("contradicted or failed nodes: " + ", ".join(bad))
    print(f"certificate written to {args.out}")
    return cert.exit_code()


def cmd_ineq(args) -> int:
    from .verifier import run_suite

    params = _params(args)
    with _precision(args), _depth(args):
        needs_graph = args.selector in ("all", "lemma84", "lemma86", "zfr", "cor75", "density")
        g = _derive(args, params) if needs_graph else None
        records = run_suite(args.selector, params, g)
    sys.stdout.write(format_table(records))
    for r in records:
        for note in r.notes:
            if "exponent" in note or "case (ii)" in note:
                print(f"note [{r.claim}]: {note}")
    if args.out:
        cert = Certificate(params=params.to_dict(), claims=[jsonable(r) for r in records])
        cert.write(args.out)
    return _claims_exit(records)


def cmd_dag(args) -> int:
    from .graph import to_dot

    if args.empty:
        text = to_dot(None)
    else:
        params = _params(args)
        with _precision(args):
            g = _derive(args, params)
        text = to_dot(g)
    if args.out:
        write_atomic(args.out, text)
        print(f"DOT written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def sandbox(sub: str, x_max: int = 10**6, x: int = 100, q: int = 4, tail_points=None) -> SandboxResult:
    """Exact sieve checks; integers never pass through floating point."""
    from . import primes
    from .params import ParamSet
    from .verifier import sandbox_check_lemma32

    if sub in ("pi", "tail") and not 2 <= x_max <= SIEVE_LIMIT:
        raise RangeError(f"sieve limit must lie in [2, {SIEVE_LIMIT}], got {x_max}")
    if sub == "S" and not 0 <= x <= SIEVE_LIMIT:
        raise RangeError(f"x must lie in [0, {SIEVE_LIMIT}], got {x}")
    if sub == "ap" and not 1 <= q <= MODULUS_LIMIT:
        raise RangeError(f"modulus must lie in [1, {MODULUS_LIMIT}], got {q}")

    if sub == "pi":
        rec = sandbox_check_lemma32(x_max, tail_points=())
        d = rec.details
        return SandboxResult("pi", {"x_max": x_max, "pi": d["pi_x_max"]},
                             [{"bound": "pi(x) < alpha0 x / log x", "tightest_x": d["rosser_tightest"][0],
                               "margin_lower": d["rosser_tightest"][1], "ok": d["rosser_ok"]}],
                             d["rosser_ok"])
    if sub == "S":
        s = primes.prime_power_count(x)
        alpha0 = ParamSet().value("alpha0")
        rhs = 2 * alpha0 / CONST.log2 * Interval(x).sqrt()
        ok = rhs.lo >= s
        return SandboxResult("S", {"x": x, "S": s},
                             [{"bound": "S(x) <= (2 alpha0 / log 2) sqrt(x)", "rhs_lower": rhs.lo, "ok": ok}], ok)
    if sub == "tail":
        # the 1/x_max remainder swamps the bound unless x is well below the sieve limit
        pts = tuple(tail_points) if tail_points else tuple(p for p in (101, 150, 1000, 10**4, 10**5)
                                                            if 10 * p <= x_max)
        rec = sandbox_check_lemma32(x_max, tail_points=pts)
        rows = rec.details["tail_rows"]
        ok = rec.details["tail_ok"]
        return SandboxResult("tail", {"x_max": x_max, "points": list(pts)}, rows, ok)
    if sub == "ap":
        least = primes.least_primes_in_progressions(q)
        disc = primes.cyclotomic_discriminant(q)
        rows = []
        for a, p in least.items():
            ratio = None if disc <= 1 else math.log(p) / math.log(disc)
            rows.append({"residue": a, "least_prime": p, "log_p_over_log_d": ratio,
                         "below_12577": ratio is None or ratio < 12577})
        return SandboxResult("ap", {"q": q, "discriminant": str(disc), "residues": len(least)}, rows,
                             all(r["below_12577"] for r in rows))
    raise ValueError(f"unknown sandbox check {sub!r}")


def cmd_sandbox(args) -> int:
    res = sandbox(args.sub, x_max=args.x_max, x=args.x, q=args.q)
    text = res.to_json()
    if args.out:
        write_atomic(args.out, text)
    sys.stdout.write(text)
    return EXIT_OK if res.passed else EXIT_REFUTED


def load_sweep_spec(path):
    from .optimizer import SweepSpec

    text = Path(path).read_text(encoding="utf-8") if path else ""
    data = json.loads(text) if text.strip() else {}
    if not isinstance(data, dict):
        raise ValueError("sweep spec must be a JSON object")
    return SweepSpec.from_dict(data), data


def cmd_optimize(args) -> int:
    from .graph import build_graph
    from .optimizer import best_row, refine, rows_to_csv, sweep

    spec, raw = load_sweep_spec(args.spec)
    with _precision(args):
        rows = sweep(spec, threads=args.threads)
    out = Path(args.out)
    write_atomic(out, rows_to_csv(rows, spec.objective))
    print(f"{len(rows)} rows written to {out}")
    best = best_row(rows, spec.objective)
    if raw.get("refine") and best is not None:
        _, best = refine(best.params, spec.objective, int(raw.get("max_iters", 3)))
    if best is not None:
        print(f"best row {best.index}: {best.assignment} -> {best.objective}")
        g = build_graph(best.params, {"compare_printed": False, "quad_tol": args.quad_tol})
        g.evaluate(threads=args.threads)
        cert_path = out.with_suffix(".best.json")
        Certificate.from_graph(g, (), {}, {"objective": spec.objective}).write(cert_path)
        print(f"best-point certificate written to {cert_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value parameter file")
    common.add_argument("--precision", type=int, metavar="BITS", default=None,
                        help="working precision in bits (default: double)")
    common.add_argument("--quad-tol", type=float, default=1e-9, metavar="T",
                        help="target enclosure width of the integral constants")
    common.add_argument("--bnb-depth", type=_positive_int, default=None, metavar="D",
                        help="bisection depth per variable in branch and bound")
    common.add_argument("--threads", type=_positive_int, default=1, metavar="N",
                        help="worker threads (affects speed only)")

    ap = argparse.ArgumentParser(prog="chebcert", description="Rigorous constant chain and inequality checks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="evaluate every constant and write a certificate")
    p.add_argument("--out", default="certificate.json", metavar="PATH")
    p.add_argument("--no-claims", action="store_true", help="skip the inequality suite")
    p.set_defaults(func=cmd_derive)

    from .verifier import SELECTORS
    p = sub.add_parser("ineq", parents=[common], help="run inequality checks")
    p.add_argument("selector", nargs="?", default="all", choices=SELECTORS)
    p.add_argument("--out", default=None, metavar="PATH", help="also write the records as JSON")
    p.set_defaults(func=cmd_ineq)

    p = sub.add_parser("dag", parents=[common], help="export the constant graph as DOT")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--empty", action="store_true", help="emit the header of an empty graph")
    p.set_defaults(func=cmd_dag)

    p = sub.add_parser("sandbox", parents=[common], help="exact sieve checks")
    p.add_argument("sub", choices=("pi", "S", "tail", "ap"))
    p.add_argument("--x-max", type=int, default=10**6, help="sieve limit for pi and tail")
    p.add_argument("--x", type=int, default=100, help="argument of S")
    p.add_argument("--q", type=int, default=4, help="modulus for ap")
    p.add_argument("--out", default=None, metavar="PATH")
    p.set_defaults(func=cmd_sandbox)

    p = sub.add_parser("optimize", parents=[common], help="parameter sweep from a JSON spec")
    p.add_argument("spec", nargs="?", default=None, help="JSON sweep spec (empty file: empty table)")
    p.add_argument("--out", default="sweep.csv", metavar="PATH")
    p.set_defaults(func=cmd_optimize)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "precision", None) is not None and args.precision < 53:
        print("error: --precision must be at least 53", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (ParamError, RangeError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # anything unexpected is a tool error, not a verdict
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
