"""Versioned JSON certificates.

Enclosure endpoints are written as exact decimal expansions of the binary
endpoints, so reading a certificate back gives the same intervals bit for
bit.  Everything stored in a :class:`Certificate` is already plain JSON
data, which makes the round trip an identity.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .interval import Interval, endpoint_to_str
from .records import Verdict, VerdictRecord

__all__ = [
    "SCHEMA_VERSION",
    "Certificate",
    "CertificateError",
    "jsonable",
    "interval_from_json",
    "record_to_json",
    "write_atomic",
]

SCHEMA_VERSION = 1

# fixed choices that affect enclosures, echoed into every certificate
CONVENTIONS = {
    "digamma_remainder": "|R(z)| <= 1/(12 (Re z)^2); the smaller constant 1/24 is not relied on",
    "A_1_rounding": "ceiling of max(4 c16, 5 c23)",
}


class CertificateError(ValueError):
    """Malformed or incompatible certificate."""


def _tool_version() -> str:
    from . import __version__
    return __version__


def jsonable(obj):
    """Convert intervals, records, enums and containers to JSON data."""
    if isinstance(obj, Interval):
        return {"lo": endpoint_to_str(obj.lo), "hi": endpoint_to_str(obj.hi)}
    if isinstance(obj, VerdictRecord):
        return record_to_json(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, float):
        return obj if obj == obj and abs(obj) != float("inf") else str(obj)
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    if hasattr(obj, "item"):  # numpy scalars
        return jsonable(obj.item())
    return str(obj)


def interval_from_json(d) -> Interval | None:
    if d is None:
        return None
    return Interval(d["lo"], d["hi"])


def record_to_json(rec: VerdictRecord, with_time: bool = True) -> dict:
    out = {
        "claim": rec.claim,
        "verdict": rec.verdict.value,
        "margin": jsonable(rec.margin),
        "boxes_explored": rec.boxes_explored,
        "tail_handled": rec.tail_handled,
        "strict": rec.strict,
        "tail_window": rec.tail_window,
        "witness": jsonable(rec.witness),
        "asserted": rec.asserted,
        "notes": [str(n) for n in rec.notes],
        "details": jsonable(rec.details),
    }
    if with_time:
        out["seconds"] = rec.seconds
    return out


def _strip_seconds(obj):
    if isinstance(obj, dict):
        return {k: _strip_seconds(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_seconds(v) for v in obj]
    return obj


def _node_to_json(n) -> dict:
    return {
        "id": n.id,
        "kind": n.kind.value,
        "deps": list(n.deps),
        "enclosure": jsonable(n.enclosure),
        "printed": n.printed,
        "adjudication": None if n.adjudication is None else n.adjudication.value,
        "status": n.status.value,
        "description": n.description,
        "notes": list(n.notes),
        "error": n.error or "",
    }


@dataclass
class Certificate:
    """Everything a run establishes, in JSON-ready form."""

    params: dict
    nodes: list = field(default_factory=list)
    claims: list = field(default_factory=list)
    axioms: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    tool_version: str = field(default_factory=_tool_version)
    schema_version: int = SCHEMA_VERSION
    options: dict = field(default_factory=dict)

    @classmethod
    def from_graph(cls, graph, records=(), timings=None, options=None) -> "Certificate":
        from .graph import list_axioms

        nodes = [_node_to_json(graph.nodes[k]) for k in sorted(graph.nodes)]
        return cls(
            params=graph.params.to_dict(),
            nodes=nodes,
            claims=[record_to_json(r) for r in records],
            axioms=jsonable(list_axioms(graph)),
            timings=jsonable(dict(timings or {})),
            options=jsonable({**CONVENTIONS, **dict(options or {})}),
        )

    # -- views ----------------------------------------------------------------
    def node(self, key) -> dict:
        for n in self.nodes:
            if n["id"] == key:
                return n
        raise KeyError(key)

    def enclosure(self, key) -> Interval | None:
        return interval_from_json(self.node(key)["enclosure"])

    def verdicts(self) -> dict:
        return {c["claim"]: c["verdict"] for c in self.claims}

    def contradictions(self) -> list:
        return [n["id"] for n in self.nodes
                if n["adjudication"] == "CONTRADICTS" or n["status"] == "FAILED"]

    def exit_code(self) -> int:
        """0 all verified, 1 any contradiction or refutation, 3 undecided."""
        asserted = [c for c in self.claims if c.get("asserted", True)]
        if self.contradictions() or any(c["verdict"] == Verdict.REFUTED.value for c in asserted):
            return 1
        inconclusive = any(n["status"] in ("INCONCLUSIVE", "UNEVALUATED") for n in self.nodes)
        if inconclusive or any(c["verdict"] == Verdict.UNDECIDED.value for c in asserted):
            return 3
        return 0

    # -- serialisation --------------------------------------------------------
    def to_dict(self, with_timings: bool = True) -> dict:
        d = {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "params": self.params,
            "options": self.options,
            "nodes": self.nodes,
            "claims": self.claims,
            "axioms": self.axioms,
        }
        if with_timings:
            d["timings"] = self.timings
        else:
            d["claims"] = _strip_seconds(self.claims)
        return d

    def to_json(self, with_timings: bool = True) -> str:
        return json.dumps(self.to_dict(with_timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def canonical(self) -> str:
        """Serialisation without wall-clock fields, for reproducibility checks."""
        return self.to_json(with_timings=False)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        if not isinstance(d, dict):
            raise CertificateError("certificate must be a JSON object")
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise CertificateError(f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})")
        try:
            return cls(params=d["params"], nodes=d["nodes"], claims=d["claims"], axioms=d["axioms"],
                       timings=d.get("timings", {}), tool_version=d["tool_version"],
                       schema_version=version, options=d.get("options", {}))
        except KeyError as exc:
            raise CertificateError(f"certificate lacks field {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CertificateError(f"not JSON: {exc}") from None

    def write(self, path) -> Path:
        return write_atomic(path, self.to_json())

    @classmethod
    def read(cls, path) -> "Certificate":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def write_atomic(path, text: str) -> Path:
    """Write via a temporary file in the same directory and rename over."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path
