"""Parameter sweeps over ``A`` or ``lambda`` and their CSV/JSON export."""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .channel import ChannelParams
from .solver import SolverConfig, SolveResult, solve

log = logging.getLogger(__name__)

MODES = ("amplitude", "dark-current", "single")

CSV_COLUMNS = (
    "amplitude", "dark_current", "capacity_nats", "capacity_bits", "n_points", "duality_gap",
    "kkt_residual", "eq11_bound", "converged", "outer_iterations", "points", "probs",
)

RECORD_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "additionalProperties": False,
        "required": list(CSV_COLUMNS),
        "properties": {
            "amplitude": {"type": "number", "minimum": 0},
            "dark_current": {"type": "number", "minimum": 0},
            "capacity_nats": {"type": "number"},
            "capacity_bits": {"type": "number"},
            "n_points": {"type": "integer", "minimum": 1},
            "duality_gap": {"type": "number"},
            "kkt_residual": {"type": "number", "minimum": 0},
            "eq11_bound": {"type": "number", "minimum": 1},
            "converged": {"type": "boolean"},
            "outer_iterations": {"type": "integer", "minimum": 0},
            "points": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
            "probs": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
        },
    },
}


@dataclass(frozen=True)
class SweepRecord:
    amplitude: float
    dark_current: float
    capacity_nats: float
    capacity_bits: float
    n_points: int
    duality_gap: float
    kkt_residual: float
    eq11_bound: float
    converged: bool
    outer_iterations: int
    points: tuple[float, ...]
    probs: tuple[float, ...]

    @classmethod
    def from_result(cls, result: SolveResult) -> "SweepRecord":
        return cls(
            amplitude=result.params.amplitude,
            dark_current=result.params.dark_current,
            capacity_nats=result.capacity_nats,
            capacity_bits=result.capacity_nats / math.log(2),
            n_points=result.support_size,
            duality_gap=result.duality_gap,
            kkt_residual=result.kkt.residual,
            eq11_bound=result.support_lower_bound,
            converged=result.converged,
            outer_iterations=result.outer_iterations,
            points=tuple(result.distribution.points.tolist()),
            probs=tuple(result.distribution.probs.tolist()),
        )


@dataclass(frozen=True)
class SweepSpec:
    mode: str
    fixed_value: float
    grid: tuple[float, ...]
    solver_config: SolverConfig = field(default_factory=SolverConfig)
    output_path: Optional[Path] = None
    format: str = "csv"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.size == 0:
            raise ValueError("empty grid")
        if np.any(~np.isfinite(grid)) or np.any(grid < 0):
            raise ValueError("grid values must be finite and nonnegative")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.mode == "single" and grid.size != 1:
            raise ValueError("single mode takes exactly one grid value")
        if not (math.isfinite(self.fixed_value) and self.fixed_value >= 0):
            raise ValueError("fixed value must be finite and nonnegative")
        object.__setattr__(self, "grid", tuple(grid.tolist()))

    def params_at(self, value: float) -> ChannelParams:
        if self.mode == "dark-current":
            return ChannelParams(self.fixed_value, value)
        return ChannelParams(value, self.fixed_value)


def parse_grid(text: str) -> np.ndarray:
    """``"start:stop:count[,lin|log]"`` to an array; a bare number is a one-point grid."""
    body, _, scale = text.partition(",")
    scale = scale.strip() or "lin"
    parts = body.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"cannot parse grid {text!r}; expected start:stop:count[,lin|log]") from None
    if count < 1:
        raise ValueError("grid count must be positive")
    if scale == "lin":
        return np.linspace(start, stop, count)
    if scale == "log":
        if start <= 0:
            raise ValueError("log grid needs a positive start")
        # geomspace rounds interior values off (7.999999999999999 for 8)
        return np.array([float(f"{v:.12g}") for v in np.geomspace(start, stop, count)])
    raise ValueError(f"unknown grid scale {scale!r}")


def checkpoint_indices(n: int, count: int = 8) -> list[int]:
    """Log-spaced grid indices that are re-solved from a cold start."""
    if n <= count:
        return list(range(n))
    return sorted({int(round(v)) - 1 for v in np.geomspace(1, n, count)})


def run_sweep(spec: SweepSpec, checkpoints: int = 8) -> tuple[list[SweepRecord], dict]:
    """Solve every grid point in order, warm-starting from the previous point.

    At ``checkpoints`` log-spaced indices the point is solved again from a
    cold start; the higher-capacity answer is kept so that a local optimum
    inherited through warm starting cannot persist unnoticed.
    """
    cfg = spec.solver_config
    cold_at = set(checkpoint_indices(len(spec.grid), checkpoints))
    records, timings, checks = [], [], []
    previous = None
    for idx, value in enumerate(spec.grid):
        params = spec.params_at(value)
        t0 = time.perf_counter()
        result = solve(params, cfg, warm_start=previous.distribution if previous is not None else None)
        if idx in cold_at:
            cold = solve(params, cfg)
            checks.append({
                "index": idx, "value": value,
                "warm_capacity": result.capacity_nats, "cold_capacity": cold.capacity_nats,
                "warm_points": result.support_size, "cold_points": cold.support_size,
            })
            if cold.converged and (not result.converged or cold.capacity_nats > result.capacity_nats + cfg.epsilon):
                log.warning("cold start beats warm start at %s=%g: %.9g > %.9g", spec.mode, value,
                            cold.capacity_nats, result.capacity_nats)
                result = cold
        timings.append(time.perf_counter() - t0)
        if not result.converged:
            log.warning("point %s=%g did not converge", spec.mode, value)
        records.append(SweepRecord.from_result(result))
        previous = result
    manifest = {
        "mode": spec.mode,
        "fixed_value": spec.fixed_value,
        "grid": list(spec.grid),
        "solver_config": dataclasses.asdict(cfg),
        "cold_start_checks": checks,
        "wall_clock_seconds": timings,
    }
    return records, manifest


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_list(values: Iterable[float]) -> str:
    return ";".join(format(v, ".12g") for v in values)


def export_records(records: Sequence[SweepRecord], fmt: str, path) -> Path:
    if not records:
        raise ValueError("no records to export")
    path = Path(path)
    try:
        if fmt == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for r in records:
                    writer.writerow([
                        _fmt(r.amplitude), _fmt(r.dark_current), _fmt(r.capacity_nats), _fmt(r.capacity_bits),
                        r.n_points, _fmt(r.duality_gap), _fmt(r.kkt_residual), _fmt(r.eq11_bound),
                        "true" if r.converged else "false", r.outer_iterations,
                        _fmt_list(r.points), _fmt_list(r.probs),
                    ])
        elif fmt == "json":
            payload = [dataclasses.asdict(r) for r in records]
            for row in payload:
                row["points"], row["probs"] = list(row["points"]), list(row["probs"])
            path.write_text(json.dumps(payload, indent=1) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_records(path, fmt: str | None = None) -> list[SweepRecord]:
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".")
    if fmt == "json":
        return [SweepRecord(**{**row, "points": tuple(row["points"]), "probs": tuple(row["probs"])})
                for row in json.loads(path.read_text())]
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(SweepRecord(
                amplitude=float(row["amplitude"]), dark_current=float(row["dark_current"]),
                capacity_nats=float(row["capacity_nats"]), capacity_bits=float(row["capacity_bits"]),
                n_points=int(row["n_points"]), duality_gap=float(row["duality_gap"]),
                kkt_residual=float(row["kkt_residual"]), eq11_bound=float(row["eq11_bound"]),
                converged=row["converged"] == "true", outer_iterations=int(row["outer_iterations"]),
                points=tuple(float(v) for v in row["points"].split(";")),
                probs=tuple(float(v) for v in row["probs"].split(";")),
            ))
    return out


def write_manifest(manifest: dict, path) -> Path:
    from . import __version__

    path = Path(path)
    body = {"tool": "poisson_capacity", "version": __version__,
            "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"), **manifest}
    path.write_text(json.dumps(body, indent=1, default=float) + "\n")
    return path
