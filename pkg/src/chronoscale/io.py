"""File formats: time-scale JSON, signal CSV, rational/system JSON, kernel CSV.

Numbers are written with 17 significant digits so every double round-trips
exactly through the decimal text.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .calculus import Signal, as_signal
from .errors import FileFormatError, ScaleMismatch
from .fractional import FractionalKernel
from .rational import Pole, RationalTransform
from .timescale import TimeScale, build_time_scale, round_key

FLOAT_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), FLOAT_FMT)


def load_time_scale(path: str | Path) -> TimeScale:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read time-scale file {path}: {exc}") from exc
    if not isinstance(data, dict) or "instants" not in data or "t0_index" not in data:
        raise FileFormatError(
            f"{path}: expected an object with 'instants' and 't0_index'"
        )
    instants = data["instants"]
    if not isinstance(instants, list) or not all(
        isinstance(v, (int, float)) for v in instants
    ):
        raise FileFormatError(f"{path}: 'instants' must be an array of numbers")
    if not isinstance(data["t0_index"], int):
        raise FileFormatError(f"{path}: 't0_index' must be an integer")
    return build_time_scale(instants, data["t0_index"])


def save_time_scale(ts: TimeScale, path: str | Path) -> None:
    payload = {"instants": [float(t) for t in ts.instants], "t0_index": ts.t0_index}
    Path(path).write_text(json.dumps(payload) + "\n")


def load_signal(path: str | Path, scale: TimeScale) -> Signal:
    """Read a `t,re,im` CSV; instants must match the scale to 12 sig. digits."""
    try:
        rows = list(csv.reader(Path(path).read_text().splitlines()))
    except OSError as exc:
        raise FileFormatError(f"cannot read signal file {path}: {exc}") from exc
    rows = [r for r in rows if r and not r[0].lstrip().startswith("#")]
    if not rows or [c.strip() for c in rows[0]] != ["t", "re", "im"]:
        raise FileFormatError(f"{path}: first row must be the header 't,re,im'")
    body = rows[1:]
    if len(body) != len(scale):
        raise ScaleMismatch(
            f"{path}: {len(body)} rows but the scale window holds {len(scale)}"
        )
    values = np.zeros(len(scale), dtype=complex)
    for i, row in enumerate(body):
        if len(row) != 3:
            raise FileFormatError(f"{path}: row {i + 2} needs exactly t,re,im")
        try:
            t, re, im = (float(c) for c in row)
        except ValueError as exc:
            raise FileFormatError(f"{path}: row {i + 2}: {exc}") from exc
        if round_key(t) != round_key(float(scale.instants[i])):
            raise ScaleMismatch(
                f"{path}: row {i + 2} instant {t!r} does not match the scale "
                f"instant {float(scale.instants[i])!r}"
            )
        values[i] = complex(re, im)
    return as_signal(scale, values)


def save_signal(f: Signal, path: str | Path) -> None:
    lines = ["t,re,im"]
    for t, v in zip(f.scale.instants, f.values):
        lines.append(f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def _coeff(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise FileFormatError(f"coefficient must be a number or [re, im], got {value!r}")


def load_rational(path: str | Path, default_roc: str | None = None) -> RationalTransform:
    """Read `{"num": [...], "den": [...], "poles": [...]}`.

    The leading denominator coefficient must be 1.  When "poles" is absent
    they are computed from the denominator and tagged with ``default_roc``.
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read rational file {path}: {exc}") from exc
    if not isinstance(data, dict) or "num" not in data or "den" not in data:
        raise FileFormatError(f"{path}: expected an object with 'num' and 'den'")
    num = np.array([_coeff(v) for v in data["num"]], dtype=complex)
    den = np.array([_coeff(v) for v in data["den"]], dtype=complex)
    if den.size == 0 or den[-1] != 1.0:
        raise FileFormatError(f"{path}: the leading 'den' coefficient must be 1")
    if "poles" in data:
        poles = []
        for entry in data["poles"]:
            if not isinstance(entry, dict):
                raise FileFormatError(f"{path}: each pole must be an object")
            try:
                loc = complex(float(entry["re"]), float(entry["im"]))
                mult = int(entry.get("mult", 1))
            except (KeyError, TypeError, ValueError) as exc:
                raise FileFormatError(f"{path}: bad pole entry {entry!r}") from exc
            roc = entry.get("roc", default_roc)
            if roc not in ("causal", "anticausal", None):
                raise FileFormatError(f"{path}: bad roc tag {roc!r}")
            poles.append(Pole(loc, mult, roc))
        try:
            return RationalTransform(num, den, tuple(poles))
        except ValueError as exc:
            raise FileFormatError(f"{path}: {exc}") from exc
    from .systems import transfer_function

    rt = transfer_function(den, num)
    if default_roc is not None:
        rt = rt.retagged(default_roc)
    return rt


def load_system(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read `{"a": [...], "b": [...]}` equation coefficients."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read system file {path}: {exc}") from exc
    if not isinstance(data, dict) or "a" not in data or "b" not in data:
        raise FileFormatError(f"{path}: expected an object with 'a' and 'b'")
    a = np.array([_coeff(v) for v in data["a"]], dtype=complex)
    b = np.array([_coeff(v) for v in data["b"]], dtype=complex)
    return a, b


def save_kernel(kernel: FractionalKernel, path: str | Path) -> None:
    lines = [
        f"# alpha={_fmt(kernel.alpha)}, method={kernel.method}",
        "t,re,im",
    ]
    for t, w in zip(kernel.scale.instants, kernel.weights):
        lines.append(f"{_fmt(t)},{_fmt(w.real)},{_fmt(w.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")
