"""JSON formats, parsing diagnostics and run configuration.

Rationals are written as ``"p/q"`` strings in lowest terms (plain ``"p"``
when ``q = 1``); float64 values are JSON numbers.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .composition import CurveCoefficients, JetOfMap
from .convergence import GermFamily
from .multilinear import SymForm
from .seq_spaces import WeightedElement
from .series import FLOAT64, FLOAT_RTOL, RATIONAL, TruncatedSeries

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240601
SEED_ENV = "ANALYTICA_SEED"


class ParseError(ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source


# scalars ----------------------------------------------------------------------


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x)


def parse_rational(text) -> Fraction:
    """``"p/q"``, ``"p"`` or an integer; rejects floats and zero denominators."""
    if isinstance(text, bool):
        raise ParseError(f"bad rational literal {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"bad rational literal {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"bad rational literal {text!r}") from None
    if q == 0:
        raise ParseError(f"zero denominator in rational literal {text!r}")
    return Fraction(p, q)


def parse_scalar(value, kind: str):
    if kind == RATIONAL:
        return parse_rational(value)
    if kind == FLOAT64:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ParseError(f"bad float64 literal {value!r}")
        try:
            return float(value) if not isinstance(value, str) else float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad float64 literal {value!r}") from None
    raise ParseError(f"unknown scalar kind {kind!r}")


def format_scalar(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    return x


def _kind_for(values) -> str:
    return FLOAT64 if any(isinstance(v, float) for v in values) else RATIONAL


# text helpers -------------------------------------------------------------------


def _line_of(text: str | None, needle: str) -> int | None:
    """1-based line of the first occurrence of ``needle`` in ``text``."""
    if text is None:
        return None
    idx = text.find(needle)
    if idx < 0:
        return None
    return text.count("\n", 0, idx) + 1


def _loads(text: str, source: str | None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno, source) from None


def _with_line(fn, text, source):
    """Run ``fn`` and attach a line number to a :class:`ParseError` when possible."""
    try:
        return fn()
    except ParseError as exc:
        if exc.line is not None:
            raise
        line = None
        msg = str(exc)
        start = msg.find("'")
        if start >= 0:
            end = msg.find("'", start + 1)
            if end > start:
                line = _line_of(text, '"' + msg[start + 1 : end] + '"')
        raise ParseError(msg, line, source) from None


def _read(path) -> tuple[str, str]:
    p = Path(path)
    try:
        return p.read_text(), str(p)
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror}") from None


def _require(obj, key, source, what):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{what} needs field {key!r}", None, source)
    return obj[key]


# series -------------------------------------------------------------------------


def series_to_obj(a: TruncatedSeries) -> dict:
    return {"kind": a.kind, "order": a.order, "coeffs": [format_scalar(c) for c in a.coeffs]}


def series_from_obj(obj, source: str | None = None, text: str | None = None) -> TruncatedSeries:
    kind = _require(obj, "kind", source, "series")
    order = _require(obj, "order", source, "series")
    coeffs = _require(obj, "coeffs", source, "series")
    if kind not in (RATIONAL, FLOAT64):
        raise ParseError(f"unknown kind {kind!r}", _line_of(text, '"kind"'), source)
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise ParseError(f"order must be a nonnegative integer, got {order!r}", _line_of(text, '"order"'), source)
    if not isinstance(coeffs, list) or len(coeffs) != order + 1:
        n = len(coeffs) if isinstance(coeffs, list) else "non-list"
        raise ParseError(f"order {order} needs {order + 1} coefficients, got {n}", _line_of(text, '"coeffs"'), source)
    values = _with_line(lambda: tuple(parse_scalar(c, kind) for c in coeffs), text, source)
    return TruncatedSeries(values, kind)


def parse_series_text(text: str, source: str | None = None) -> TruncatedSeries:
    return series_from_obj(_loads(text, source), source, text)


def parse_series_file(path) -> TruncatedSeries:
    text, source = _read(path)
    return parse_series_text(text, source)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def serialize_series(a: TruncatedSeries) -> str:
    return dumps(series_to_obj(a))


# forms, jets, curves ------------------------------------------------------------


def form_to_obj(f: SymForm) -> dict:
    coeffs = {",".join(map(str, a)): format_scalar(c) for a, c in sorted(f.coeffs.items(), reverse=True)}
    return {"degree": f.degree, "dim": f.dim, "coeffs": coeffs}


def form_from_obj(obj, source=None, text=None) -> SymForm:
    degree = _require(obj, "degree", source, "form")
    dim = _require(obj, "dim", source, "form")
    raw = _require(obj, "coeffs", source, "form")
    if not isinstance(raw, dict):
        raise ParseError("form coeffs must be an object keyed by multi-index", _line_of(text, '"coeffs"'), source)
    kind = RATIONAL if all(not isinstance(v, float) for v in raw.values()) else FLOAT64
    coeffs = {}
    for key, v in raw.items():
        try:
            alpha = tuple(int(x) for x in key.split(",")) if key.strip() else ()
        except ValueError:
            raise ParseError(f"bad multi-index {key!r}", _line_of(text, '"' + key + '"'), source) from None
        coeffs[alpha] = _with_line(lambda v=v: parse_scalar(v, kind), text, source)
    try:
        return SymForm(degree, dim, coeffs)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_form_file(path) -> SymForm:
    text, source = _read(path)
    return form_from_obj(_loads(text, source), source, text)


def jet_to_obj(j: JetOfMap) -> dict:
    return {"dim": j.dim, "forms": [form_to_obj(f) for f in j.forms]}


def jet_from_obj(obj, source=None, text=None) -> JetOfMap:
    dim = _require(obj, "dim", source, "jet")
    forms = [form_from_obj(f, source, text) for f in _require(obj, "forms", source, "jet")]
    try:
        return JetOfMap(dim, tuple(forms))
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_jet_file(path) -> JetOfMap:
    text, source = _read(path)
    return jet_from_obj(_loads(text, source), source, text)


def _vector(v, source, text):
    if not isinstance(v, list):
        raise ParseError(f"expected a vector, got {v!r}", None, source)
    kind = _kind_for(v)
    return tuple(_with_line(lambda: [parse_scalar(x, kind) for x in v], text, source))


def curve_to_obj(c: CurveCoefficients) -> dict:
    return {"dim": c.dim, "coeffs": [[format_scalar(x) for x in v] for v in c.coeffs]}


def curve_from_obj(obj, source=None, text=None) -> CurveCoefficients:
    dim = _require(obj, "dim", source, "curve")
    vecs = [_vector(v, source, text) for v in _require(obj, "coeffs", source, "curve")]
    try:
        return CurveCoefficients(dim, tuple(vecs))
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_curve_file(path) -> CurveCoefficients:
    text, source = _read(path)
    return curve_from_obj(_loads(text, source), source, text)


def family_to_obj(fam: GermFamily) -> dict:
    return {"members": [[format_rational(x) for x in m] for m in fam.members]}


def family_from_obj(obj, source=None, text=None) -> GermFamily:
    members = _require(obj, "members", source, "family")
    rows = [tuple(_with_line(lambda m=m: [parse_rational(x) for x in m], text, source)) for m in members]
    try:
        return GermFamily(tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_family_file(path) -> GermFamily:
    text, source = _read(path)
    return family_from_obj(_loads(text, source), source, text)


def element_to_obj(x: WeightedElement) -> dict:
    return {
        "n": x.n,
        "support": {",".join(map(str, a)): format_scalar(v) for a, v in sorted(x.support.items())},
    }


def element_from_obj(obj, source=None, text=None) -> WeightedElement:
    n = _require(obj, "n", source, "element")
    raw = _require(obj, "support", source, "element")
    kind = _kind_for(raw.values())
    support = {}
    for key, v in raw.items():
        try:
            alpha = tuple(int(t) for t in key.split(","))
        except ValueError:
            raise ParseError(f"bad multi-index {key!r}", _line_of(text, '"' + key + '"'), source) from None
        support[alpha] = _with_line(lambda v=v: parse_scalar(v, kind), text, source)
    try:
        return WeightedElement(n, support)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_element_file(path) -> WeightedElement:
    text, source = _read(path)
    return element_from_obj(_loads(text, source), source, text)


def parse_args_file(path) -> dict:
    """Polarization arguments: ``{"x0": v, "args": [v, ...]}`` or ``{"a": v, "x": v}``."""
    text, source = _read(path)
    obj = _loads(text, source)
    if not isinstance(obj, dict):
        raise ParseError("arguments file must hold an object", None, source)
    out = {}
    for key in ("x0", "a", "x"):
        if key in obj:
            out[key] = _vector(obj[key], source, text)
    if "args" in obj:
        out["args"] = [_vector(v, source, text) for v in obj["args"]]
    return out


def parse_radius(text: str) -> tuple:
    try:
        parts = tuple(parse_rational(t) for t in text.split(","))
    except ParseError as exc:
        raise ParseError(f"radius {text!r}: {exc}") from None
    return parts


# configuration ------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    kind: str = RATIONAL
    tolerance: float = FLOAT_RTOL
    k_max: int = 40
    order: int = 64
    seed: int = DEFAULT_SEED
    output: str = "text"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.output not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output!r}")
        if self.kind not in (RATIONAL, FLOAT64):
            raise ValueError(f"unknown scalar kind {self.kind!r}")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "RunConfig":
        env = os.environ if environ is None else environ
        seed = DEFAULT_SEED
        if env.get(SEED_ENV):
            try:
                seed = int(env[SEED_ENV])
            except ValueError:
                raise ParseError(f"{SEED_ENV} must be an integer, got {env[SEED_ENV]!r}") from None
        fields = {"seed": seed}
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**fields)
