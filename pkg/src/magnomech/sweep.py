"""Declarative parameter sweeps with deterministic CSV/JSON output.

Configuration documents are flat ``name = value`` text.  A parameter file
defines one ``SystemParams``; a sweep spec adds one or two axes
(``sweep.axis1.name`` / ``.min`` / ``.max`` / ``.count``), the requested
output quantities, and optional parameter overrides.  Grid points are
independent pure computations, so results are identical for any worker
count; per-point failures are recorded as explicit sentinels and never
abort the grid.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .params import (
    ParameterError,
    SCALED_FIELDS,
    SystemParams,
    TUNABLE_FIELDS,
    common_period,
    drive_amplitude_from_power,
    retuned,
)
from .pipeline import VALUE_COLUMNS, evaluate_point

ABSOLUTE_KEYS = ("omega_b", "omega_a", "omega_s", "omega_d", "omega_c")
PLAIN_KEYS = ("theta_c", "theta_m", "temperature")
DEFAULT_OUTPUTS = VALUE_COLUMNS
FLAG_COLUMNS = ("status", "rh_stable", "floquet_stable", "physical")


class SpecError(ParameterError):
    """Malformed parameter file or sweep specification."""


def parse_keyvalue(text: str) -> dict:
    """Parse a flat ``name = value`` document; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected 'name = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise SpecError(f"line {lineno}: empty name or value in {raw!r}")
        if key in out:
            raise SpecError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _float(key, value):
    try:
        return float(value)
    except ValueError:
        raise SpecError(f"value for {key!r} is not a number: {value!r}") from None


def build_params(doc: dict) -> SystemParams:
    """Build SystemParams from parsed key-value pairs.

    Scaled fields are given as ``<name>_over_omega_b``; alternatively a bare
    ``<name>`` in rad/s is divided by omega_b.  ``lambda`` is accepted for
    the coupling (trailing underscore avoided in files).  ``drive_power``
    (watts) may replace the drive amplitude, using omega_d and kappa_a.
    """
    doc = dict(doc)
    kwargs: dict = {}
    for key in ABSOLUTE_KEYS:
        if key in doc:
            kwargs[key] = _float(key, doc.pop(key))
    if "omega_b" not in kwargs:
        raise SpecError("parameter file must set omega_b (rad/s)")
    omega_b = kwargs["omega_b"]
    for key in PLAIN_KEYS:
        if key in doc:
            kwargs[key] = _float(key, doc.pop(key))
    si_pending = {}
    for name in SCALED_FIELDS:
        alias = "lambda" if name == "lambda_" else name
        scaled_key = f"{alias}_over_omega_b"
        if scaled_key in doc:
            kwargs[name] = _float(scaled_key, doc.pop(scaled_key))
        if alias in doc:
            if name in kwargs:
                raise SpecError(f"both {alias!r} and {scaled_key!r} given")
            si_pending[name] = _float(alias, doc.pop(alias))
    for name, value in si_pending.items():
        kwargs[name] = value / omega_b
    if "drive_power" in doc:
        if "epsilon_d" in kwargs:
            raise SpecError("give either drive_power or epsilon_d, not both")
        power = _float("drive_power", doc.pop("drive_power"))
        omega_d = kwargs.get("omega_d")
        if omega_d is None and "omega_a" in kwargs and "delta_a" in kwargs:
            omega_d = kwargs["omega_a"] - kwargs["delta_a"] * omega_b
        if omega_d is None:
            raise SpecError("drive_power needs omega_d (or omega_a plus delta_a)")
        kappa_a = kwargs.get("kappa_a")
        if kappa_a is None:
            raise SpecError("drive_power needs kappa_a")
        kwargs["epsilon_d"] = drive_amplitude_from_power(power, kappa_a * omega_b, omega_d) / omega_b
    if doc:
        raise SpecError(f"unknown parameter key(s): {sorted(doc)}")
    try:
        return SystemParams(**kwargs)
    except TypeError as err:
        raise SpecError(f"incomplete parameter set: {err}") from None


def load_params(path) -> SystemParams:
    with open(path, "r", encoding="utf-8") as fh:
        return build_params(parse_keyvalue(fh.read()))


@dataclass(frozen=True)
class SweepAxis:
    name: str
    min: float
    max: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)


@dataclass
class SweepSpec:
    """A validated sweep: base configuration, axes, requested outputs."""

    base: SystemParams
    axes: list
    outputs: tuple = DEFAULT_OUTPUTS
    samples_per_period: int = 256
    source_text: str = ""

    def grid(self):
        """Yield (index, coords, params) in row-major axis order."""
        value_lists = [axis.values() for axis in self.axes]
        shape = tuple(len(v) for v in value_lists)
        for flat in range(int(np.prod(shape))):
            idx = np.unravel_index(flat, shape)
            coords = tuple(float(value_lists[d][i]) for d, i in enumerate(idx))
            overrides = {axis.name: c for axis, c in zip(self.axes, coords)}
            yield flat, coords, retuned(self.base, **overrides)


_AXIS_ALIASES = {"lambda": "lambda_"}


def parse_spec(text: str, base: SystemParams) -> SweepSpec:
    """Parse and validate a sweep specification against base parameters.

    Unknown keys are errors.  Keys other than ``sweep.*``, ``outputs`` and
    ``samples_per_period`` are treated as overrides of tunable base fields
    (values in omega_b units).  Both modulation frequencies are checked for
    commensurability over the whole grid at parse time.
    """
    doc = parse_keyvalue(text)
    axes_raw: dict = {}
    outputs = DEFAULT_OUTPUTS
    samples = 256
    overrides = {}
    for key, value in doc.items():
        if key.startswith("sweep.axis"):
            try:
                _, axis_id, attr = key.split(".")
                n = int(axis_id.removeprefix("axis"))
            except ValueError:
                raise SpecError(f"bad sweep key {key!r}") from None
            if n not in (1, 2) or attr not in ("name", "min", "max", "count"):
                raise SpecError(f"bad sweep key {key!r}")
            axes_raw.setdefault(n, {})[attr] = value
        elif key == "outputs":
            requested = tuple(s.strip() for s in value.split(",") if s.strip())
            unknown = set(requested) - set(VALUE_COLUMNS)
            if unknown:
                raise SpecError(f"unknown output quantity: {sorted(unknown)}")
            outputs = requested
        elif key == "samples_per_period":
            samples = int(_float(key, value))
            if samples < 8:
                raise SpecError("samples_per_period must be >= 8")
        else:
            name = _AXIS_ALIASES.get(key, key)
            if name not in TUNABLE_FIELDS:
                raise SpecError(f"unknown spec key {key!r}")
            overrides[name] = _float(key, value)
    if overrides:
        base = retuned(base, **overrides)
    if not axes_raw or sorted(axes_raw) != list(range(1, len(axes_raw) + 1)):
        raise SpecError("spec must define sweep.axis1 (and optionally sweep.axis2)")
    axes = []
    for n in sorted(axes_raw):
        spec = axes_raw[n]
        missing = {"name", "min", "max", "count"} - set(spec)
        if missing:
            raise SpecError(f"axis {n} missing {sorted(missing)}")
        name = _AXIS_ALIASES.get(spec["name"], spec["name"])
        if name not in TUNABLE_FIELDS:
            raise SpecError(f"axis {n} sweeps unknown parameter {spec['name']!r}")
        count = int(_float("count", spec["count"]))
        if count < 2:
            raise SpecError(f"axis {n} needs count >= 2")
        axes.append(SweepAxis(name, _float("min", spec["min"]), _float("max", spec["max"]), count))
    if len({a.name for a in axes}) != len(axes):
        raise SpecError("axes must sweep distinct parameters")
    result = SweepSpec(base=base, axes=axes, outputs=outputs,
                       samples_per_period=samples, source_text=text)
    _check_grid_periods(result)
    return result


def _check_grid_periods(spec: SweepSpec):
    """Reject grids that contain a dual-drive point with no common period."""
    for _, _, p in spec.grid():
        if p.xi_c > 0 and p.xi_m > 0:
            try:
                common_period(p.omega_c_prime, p.omega_m, p.xi_c, p.xi_m)
            except ParameterError as err:
                raise SpecError(f"grid contains an invalid dual-drive point: {err}") from None


@dataclass
class SweepResult:
    spec: SweepSpec
    columns: list
    rows: list  # holds row value lists aligned with columns
    provenance: dict
    points: list  # PointResult per grid index


def _format_cell(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    v = float(value)
    return "nan" if math.isnan(v) else format(v, ".12g")


def _worker(args):
    params, samples = args
    return evaluate_point(params, samples_per_period=samples)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Evaluate every grid point; deterministic for any worker count."""
    tasks = list(spec.grid())
    work = [(p, spec.samples_per_period) for _, _, p in tasks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_worker, work, chunksize=1))
    else:
        points = [_worker(item) for item in work]
    columns = [axis.name for axis in spec.axes] + list(FLAG_COLUMNS) + list(spec.outputs)
    rows = []
    for (flat, coords, _), point in zip(tasks, points):
        row = list(coords)
        row.append(point.status)
        row.extend([point.rh_stable, point.floquet_stable, point.physical])
        row.extend(point.values[name] for name in spec.outputs)
        rows.append(row)
    digest = hashlib.sha256(spec.source_text.encode()).hexdigest()[:16]
    provenance = {
        "spec_sha256": digest,
        "version": __version__,
        "total_wall_time_s": round(sum(pt.wall_time for pt in points), 3),
    }
    return SweepResult(spec=spec, columns=columns, rows=rows, provenance=provenance, points=points)


def emit(result: SweepResult, fmt: str = "csv", path=None) -> str:
    """Serialize a sweep result; writes to ``path`` when given.

    CSV: one '#' provenance line, a header row, one row per grid point,
    floats with 12 significant digits.  JSON mirrors the same schema.
    """
    if fmt == "csv":
        lines = ["# provenance: " + json.dumps(result.provenance, sort_keys=True)]
        lines.append(",".join(result.columns))
        for row in result.rows:
            lines.append(",".join(_format_cell(v) for v in row))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {
            "provenance": result.provenance,
            "columns": result.columns,
            "rows": [
                [None if isinstance(v, float) and math.isnan(v) else v for v in row]
                for row in result.rows
            ],
        }
        text = json.dumps(payload, indent=1, sort_keys=False) + "\n"
    else:
        raise SpecError(f"unknown output format {fmt!r}")
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as err:
            raise SpecError(f"cannot write {path}: {err}") from err
    return text


def csv_body(text: str) -> str:
    """CSV content without provenance comments (for determinism checks)."""
    return "\n".join(line for line in text.splitlines() if not line.startswith("#"))
