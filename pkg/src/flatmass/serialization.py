"""Metric spec files, report JSON and sweep CSV.

Floats are written with 17 significant digits so every double survives a
write/read cycle.  Non-finite values use the ``Infinity``/``NaN`` tokens
that Python's :mod:`json` reads back.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable

from .bounds import BoundReport, SweepRow
from .errors import SpecError
from .families import WellSpec, ads_schwarzschild, gravity_well, hyperbolic
from .geometry import DEFAULT_R_MAX, MetricProfile, SampledProfile

__all__ = [
    "KINDS",
    "parse_metric_spec",
    "load_metric_spec",
    "profile_to_spec",
    "format_float",
    "dumps",
    "report_to_json",
    "report_from_json",
    "SWEEP_COLUMNS",
    "sweep_csv",
]

KINDS = ("hyperbolic", "ads_schwarzschild", "gravity_well", "sampled")


def _number(data: dict, key: str, default: Any = None) -> float:
    if key not in data:
        if default is None:
            raise SpecError(f"metric spec is missing {key!r}")
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{key!r} must be a number, got {value!r}")
    return float(value)


def parse_metric_spec(data: dict) -> MetricProfile:
    """Build a profile from a decoded spec.

    Raises
    ------
    SpecError
        Unknown kind, missing keys or wrongly typed values.  Values that are
        well formed but outside a constructor's domain raise that
        constructor's error instead.
    """
    if not isinstance(data, dict):
        raise SpecError("metric spec must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {', '.join(KINDS)}; got {kind!r}")
    dim = data.get("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise SpecError(f"dimension must be an integer, got {dim!r}")
    r_max = _number(data, "r_max", DEFAULT_R_MAX)
    if kind == "hyperbolic":
        return hyperbolic(dim, r_max)
    if kind == "ads_schwarzschild":
        return ads_schwarzschild(dim, _number(data, "mass"), r_max)
    if kind == "gravity_well":
        width = data.get("blend_width")
        if width is not None:
            width = _number(data, "blend_width")
        spec = WellSpec(dim, _number(data, "mass"), _number(data, "q_peak"), width)
        return gravity_well(spec, r_max)
    samples = data.get("samples")
    if not isinstance(samples, list) or not samples:
        raise SpecError("sampled spec needs a non-empty 'samples' list of [r, m_H] pairs")
    try:
        radii = [float(r) for r, _ in samples]
        masses = [float(v) for _, v in samples]
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad sample pair: {exc}") from exc
    return SampledProfile(dim, radii, masses)


def load_metric_spec(path: str | Path) -> MetricProfile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_metric_spec(data)


def profile_to_spec(profile: MetricProfile) -> dict:
    """Inverse of :func:`parse_metric_spec`."""
    out = {"dimension": profile.dim.m, "kind": profile.kind}
    out.update(profile.params())
    return out


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits."""
    return _encode(obj, indent, 0)


def report_to_json(report: BoundReport) -> str:
    return dumps(report.to_dict())


def report_from_json(text: str) -> BoundReport:
    try:
        return BoundReport.from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SpecError(f"not a bound report: {exc}") from exc


SWEEP_COLUMNS = (
    "mass", "delta_used", "r_eps", "Q", "C", "S",
    "vol_A0", "vol_A1", "vol_A2", "vol_A31", "vol_A32", "vol_A33", "vol_B1", "vol_B2",
    "total_bound", "vol_upper", "vol_lower", "certified", "error",
)


def _row(row: SweepRow) -> list[str]:
    rep = row.report
    if rep is None:
        return [format_float(row.mass)] + [""] * (len(SWEEP_COLUMNS) - 3) + ["", row.error or ""]
    vols = [format_float(rep.region(n).numeric_volume)
            for n in ("A0", "A1", "A2", "A31", "A32", "A33", "B1", "B2")]
    head = [rep.mass, rep.delta_used, rep.r_eps, rep.Q, rep.C, rep.S]
    tail = [rep.total_flat_bound, rep.volume_upper, rep.volume_lower]
    return ([format_float(row.mass)] + [format_float(x) for x in head[1:]] + vols
            + [format_float(x) for x in tail] + [str(rep.certified).lower(), ""])


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(_row(row))
    return buf.getvalue()
