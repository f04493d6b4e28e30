"""The free parameters of the constant chain and their config-file format.

Values are kept as text (decimal, ``p/q`` or a small arithmetic expression
such as ``(3+sqrt(17))/4``) so that a certificate can echo them exactly;
:meth:`ParamSet.value` turns them into rigorous enclosures.
"""

from __future__ import annotations

import ast
import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .interval import CONST, Interval, ParseError

__all__ = ["ParamSet", "ParamError", "parse_expression", "parse_config_text", "load_config"]


class ParamError(ValueError):
    """A parameter value is malformed or violates the ParamSet invariants."""


_FUNCS = {"sqrt": lambda x: x.sqrt(), "log": lambda x: x.log(), "exp": lambda x: x.exp()}
_NAMES = {"pi": lambda: CONST.pi, "e": lambda: CONST.e}


def parse_expression(text: str) -> Interval:
    """Rigorous enclosure of a small arithmetic expression.

    Supports decimal literals (taken exactly), + - * / **, parentheses,
    sqrt/log/exp and the names pi and e.
    """
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise ParamError(f"cannot parse {text!r}: {exc.msg}") from None
    src = str(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            # take the literal text so 0.1 means one tenth, not the nearest double
            seg = ast.get_source_segment(src.strip(), node)
            return Interval(seg if seg is not None else node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            if isinstance(node.op, ast.Pow):
                if b.is_point and float(b.lo).is_integer():
                    return a.ipow(int(b.lo))
                return a ** b
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _FUNCS and len(node.args) == 1:
            return _FUNCS[node.func.id](ev(node.args[0]))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]()
        raise ParamError(f"unsupported syntax in {text!r}")

    try:
        return ev(tree)
    except ParseError as exc:
        raise ParamError(str(exc)) from None


@dataclass(frozen=True)
class ParamSet:
    """Free parameters, one record.  Defaults reproduce A_1 = 12577."""

    # density bounds
    sigma_density_long: str = "(3+sqrt(17))/4"
    sigma_density_short: str = "2.45"
    # zero-free region: Q(phi) = 4(1+cos phi)(a+cos phi)^2, b, delta, eta
    q_shape_a: str = "0.51"
    b_zfr: str = "8.7"
    delta_zfr: str = "0.66"
    eta_zfr: str = "0.26"
    # repulsion constants: power-sum parameter and sigma0 per variant
    c_check: str = "24"
    c_check_cor75: str = "12.1"
    sigma0_generic: str = "7.79"
    sigma0_imagquad: str = "12.21"
    sigma0_nontrivial: str = "5.42"
    sigma0_cor75: str = "7.79"
    delta_dh: str = "1"
    eta_dh: str = "1"
    # least-prime assembly
    c16: str = "3144.25"
    c23: str = "179"
    # imported values
    alpha0: str = "1.25506"
    G0_axiom: str = "-0.121585107"
    # fixed roundings used downstream; empty string means "use the computed enclosure"
    zfr_round: str = "29.57"
    density_round: str = "2.72"
    c8_generic_round: str = "1/92"
    c8_imagquad_round: str = "1/112"
    c8_nontrivial_round: str = "1/77"

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, str):
                object.__setattr__(self, f.name, _canonical(v))
        self.validate()

    # -- access -------------------------------------------------------------
    def value(self, name: str) -> Interval:
        text = getattr(self, name)
        if text == "":
            raise ParamError(f"parameter {name} is unset")
        return parse_expression(text)

    def rounding(self, name: str):
        """Enclosure of a fixed rounding, or None when disabled."""
        text = getattr(self, name)
        return None if text == "" else parse_expression(text)

    def replace(self, **kw) -> "ParamSet":
        unknown = set(kw) - {f.name for f in fields(self)}
        if unknown:
            raise ParamError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **{k: _canonical(v) for k, v in kw.items()})

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamSet":
        return cls().replace(**d)

    # -- invariants -----------------------------------------------------------
    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ParamError(msg)

        v = self.value
        need(v("b_zfr").lo >= 4, f"b_zfr must be >= 4, got {self.b_zfr}")
        for name in ("c_check", "c_check_cor75"):
            need(v(name).lo > 12, f"{name} must exceed 12, got {getattr(self, name)}")
        for name in ("sigma_density_long", "sigma_density_short", "sigma0_generic",
                     "sigma0_imagquad", "sigma0_nontrivial", "sigma0_cor75"):
            need(v(name).lo > 1, f"{name} must exceed 1, got {getattr(self, name)}")
        for name in ("delta_zfr", "eta_zfr", "delta_dh", "eta_dh"):
            x = v(name)
            need(x.lo >= 0 and x.hi <= 1, f"{name} must lie in [0, 1], got {getattr(self, name)}")
        need(v("q_shape_a").lo > 0, f"q_shape_a must be positive, got {self.q_shape_a}")
        need(v("c16").lo > 0 and v("c23").lo > 0, "c16 and c23 must be positive")
        need(v("alpha0").lo > 0, "alpha0 must be positive")
        for name in ("zfr_round", "density_round", "c8_generic_round",
                     "c8_imagquad_round", "c8_nontrivial_round"):
            r = self.rounding(name)
            need(r is None or r.lo > 0, f"{name} must be positive or empty")


def _canonical(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v).strip()


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (p.strip() for p in line.split("=", 1))
        if not key:
            raise ParamError(f"line {lineno}: empty key")
        out[key] = val
    return out


def load_config(path, **overrides) -> ParamSet:
    """ParamSet from a key-value file, with keyword overrides applied last."""
    data = parse_config_text(Path(path).read_text()) if path else {}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ParamSet().replace(**data)
