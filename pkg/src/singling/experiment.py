"""Experiment harness: scenario generation, seeded Monte Carlo batches, and
artifact emission (per-trial CSV logs, JSON summary, SVG plots).

The reference scenario is a 5x5 square lattice of 25 sheep at spacing 0.5
(the pairwise force-balance distance under the default gains) with the
shepherd outside the swarm on the lattice diagonal, at least two sensing
radii from every sheep.  Ids are row-major from the lower-left corner.
Target labels name canonical lattice positions:

    A = lower-left corner, B = bottom-edge midpoint, C = off-center
    interior node, D = top-edge midpoint, E = center.

Trial i uses seed base_seed + i with numpy's PCG64 generator, so batches
are reproducible bit-for-bit and trials can run in any order or in
parallel; results merge by trial index.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .controller import METHODS, TrialResult, run_singling
from .core import SwarmParams, SwarmState
from .errors import ConfigError, SinglingError
from .planner import PlannerConfig
from .svgplot import line_chart, trajectory_plot

GENERATOR_NAME = "numpy-pcg64"

GRID_LABELS = {
    "A": (0, 0),   # (row, col): lower-left corner
    "B": (0, 2),   # bottom-edge midpoint
    "C": (1, 1),   # off-center interior
    "D": (4, 2),   # top-edge midpoint
    "E": (2, 2),   # center
}
_GRID_SIDE = 5
_GRID_SPACING = 0.5


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one batch; the entire pipeline is a pure
    function of this object."""

    params: SwarmParams = SwarmParams()
    layout: str = "grid5x5"
    target: str | int = "A"
    method: str = "proposed"
    trials: int = 50
    base_seed: int = 0
    step_budget: int = 5000
    planner: PlannerConfig = PlannerConfig()
    output_dir: str = "out"
    workers: int = 1
    isolated_sheep_feel_shepherd: bool = False
    exclude_used_pinning: bool = False
    snapshot_trials: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.step_budget < 1:
            raise ConfigError("step_budget must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        for idx in self.snapshot_trials:
            if not 0 <= idx < self.trials:
                raise ConfigError(f"snapshot trial {idx} outside [0, {self.trials})")


def _typed_subconfig(cls, data: dict, label: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown {label} keys: {unknown}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {label}: {exc}") from exc


_TOP_KEYS = {
    "params", "layout", "target", "method", "trials", "base_seed",
    "step_budget", "planner", "output_dir", "workers",
    "isolated_sheep_feel_shepherd", "exclude_used_pinning", "snapshot_trials",
}


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a config from a parsed document, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping")
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    kwargs = dict(data)
    if "params" in kwargs:
        kwargs["params"] = _typed_subconfig(SwarmParams, kwargs["params"], "params")
    if "planner" in kwargs:
        kwargs["planner"] = _typed_subconfig(PlannerConfig, kwargs["planner"], "planner")
    if "snapshot_trials" in kwargs:
        kwargs["snapshot_trials"] = tuple(kwargs["snapshot_trials"])
    try:
        return ExperimentConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def config_to_dict(config: ExperimentConfig) -> dict:
    """Echo the config as the document form accepted by config_from_dict."""
    return {
        "params": dataclasses.asdict(config.params),
        "layout": config.layout,
        "target": config.target,
        "method": config.method,
        "trials": config.trials,
        "base_seed": config.base_seed,
        "step_budget": config.step_budget,
        "planner": dataclasses.asdict(config.planner),
        "output_dir": config.output_dir,
        "workers": config.workers,
        "isolated_sheep_feel_shepherd": config.isolated_sheep_feel_shepherd,
        "exclude_used_pinning": config.exclude_used_pinning,
        "snapshot_trials": list(config.snapshot_trials),
    }


def load_config(path) -> ExperimentConfig:
    """Load a JSON config file; all failures raise ConfigError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def _grid_positions() -> np.ndarray:
    pts = [
        (col * _GRID_SPACING, row * _GRID_SPACING)
        for row in range(_GRID_SIDE)
        for col in range(_GRID_SIDE)
    ]
    return np.array(pts, dtype=np.float64)


def _resolve_target(target, n: int, labels: dict[str, int]) -> int:
    if isinstance(target, bool):
        raise ConfigError("target must be a label or sheep id")
    if isinstance(target, int):
        tid = target
    elif isinstance(target, str):
        if target not in labels:
            known = sorted(labels)
            raise ConfigError(f"unknown target label {target!r}; known: {known}")
        tid = labels[target]
    else:
        raise ConfigError("target must be a label or sheep id")
    if not 0 <= tid < n:
        raise ConfigError(f"target id {tid} outside [0, {n})")
    return tid


def generate_initial(config: ExperimentConfig) -> tuple[SwarmState, int]:
    """Initial state plus resolved target id for the configured layout."""
    r = config.params.sensing_radius
    if config.layout == "grid5x5":
        positions = _grid_positions()
        # on the lattice diagonal, 1.5R * sqrt(2) > 2R from the nearest sheep
        shepherd = np.array([-1.5 * r, -1.5 * r])
        labels = {
            name: _GRID_SIDE * row + col for name, (row, col) in GRID_LABELS.items()
        }
    else:
        try:
            data = json.loads(Path(config.layout).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read layout {config.layout}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed layout {config.layout}: {exc}") from exc
        try:
            positions = np.array(data["sheep"], dtype=np.float64)
            shepherd = np.array(data["shepherd"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"layout {config.layout} needs 'sheep' and 'shepherd': {exc}") from exc
        if positions.ndim != 2 or positions.shape[1] != 2 or positions.shape[0] < 1:
            raise ConfigError(f"layout {config.layout}: 'sheep' must be an (N, 2) list")
        if shepherd.shape != (2,):
            raise ConfigError(f"layout {config.layout}: 'shepherd' must be a 2D point")
        labels = {str(k): int(v) for k, v in data.get("labels", {}).items()}
    target = _resolve_target(config.target, positions.shape[0], labels)
    return SwarmState.initial(positions, shepherd), target


def _run_trial(config: ExperimentConfig, index: int, keep_records: bool) -> TrialResult:
    state, target = generate_initial(config)
    seed = config.base_seed + index
    try:
        return run_singling(
            state, target, config.params,
            method=config.method,
            seed=seed,
            step_budget=config.step_budget,
            planner=config.planner,
            isolated_feel_shepherd=config.isolated_sheep_feel_shepherd,
            exclude_used_pinning=config.exclude_used_pinning,
            keep_records=keep_records,
        )
    except SinglingError as exc:
        # a broken trial is recorded, not fatal to the batch
        return TrialResult(
            success=False, steps=0, connectivity_series=[], seed=seed,
            method=config.method, records=[], fallback_events=0, error=str(exc),
        )


def _worker(args) -> TrialResult:
    config, index, keep_records = args
    return _run_trial(config, index, keep_records)


@dataclass
class RunSummary:
    """Batch outcome: per-trial results plus order-independent aggregates."""

    config: ExperimentConfig
    results: list[TrialResult]
    seeds: list[int]
    success_rate: float
    mean_steps_to_separation: float | None
    connectivity_time_mean: dict
    connectivity_final: dict
    generator: str = GENERATOR_NAME
    backend: str = field(default_factory=lambda: kernels.BACKEND_NAME)


def trial_time_mean(result: TrialResult) -> float | None:
    series = result.connectivity_series
    if not series:
        return None
    return sum(series) / len(series)


def trial_final(result: TrialResult) -> float | None:
    series = result.connectivity_series
    if not series:
        return None
    return series[-1]


def _aggregate(values: list[float | None]) -> dict:
    present = [v for v in values if v is not None]
    if not present:
        return {"mean": None, "min": None}
    return {"mean": sum(present) / len(present), "min": min(present)}


def summarize(config: ExperimentConfig, results: list[TrialResult]) -> RunSummary:
    successes = [r for r in results if r.success]
    mean_steps = (
        sum(r.steps for r in successes) / len(successes) if successes else None
    )
    return RunSummary(
        config=config,
        results=results,
        seeds=[config.base_seed + i for i in range(len(results))],
        success_rate=len(successes) / len(results),
        mean_steps_to_separation=mean_steps,
        connectivity_time_mean=_aggregate([trial_time_mean(r) for r in results]),
        connectivity_final=_aggregate([trial_final(r) for r in results]),
    )


def run_trials(config: ExperimentConfig, *, keep_records: bool = True) -> RunSummary:
    """Execute the batch; identical configs produce identical summaries.

    ``workers > 1`` fans trials out to a process pool; per-trial seeding
    makes the merge order-independent.
    """
    jobs = [(config, i, keep_records) for i in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(job) for job in jobs]
    return summarize(config, results)


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _csv_header(n: int) -> list[str]:
    width = max(2, len(str(n - 1)))
    cols = ["step", "shepherd_x", "shepherd_y"]
    for i in range(n):
        cols.append(f"sheep{i:0{width}d}_x")
        cols.append(f"sheep{i:0{width}d}_y")
    cols += ["target_degree", "max_component", "pinning", "fallback"]
    return cols


def write_trial_csv(result: TrialResult, path) -> None:
    """Per-step log: one row per recorded state (steps + 1 rows plus the
    header), floats at 17 significant digits so values round-trip."""
    lines = []
    n = result.records[0].positions.shape[0] if result.records else 0
    lines.append(",".join(_csv_header(n)))
    for rec in result.records:
        row = [str(rec.step), _fmt_float(rec.shepherd[0]), _fmt_float(rec.shepherd[1])]
        for i in range(n):
            row.append(_fmt_float(rec.positions[i, 0]))
            row.append(_fmt_float(rec.positions[i, 1]))
        row += [str(rec.target_degree), str(rec.max_component),
                str(rec.pinning), str(int(rec.fallback))]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trial_csv(path):
    """Parse a trial CSV back into arrays.

    Returns a dict with steps, shepherd (T, 2), positions (T, N, 2),
    target_degree, max_component, pinning and fallback lists.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln]
    header = lines[0].split(",")
    n = sum(1 for col in header if col.endswith("_x") and col.startswith("sheep"))
    steps, shep, pos = [], [], []
    degree, max_comp, pinning, fallback = [], [], [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        steps.append(int(parts[0]))
        shep.append([float(parts[1]), float(parts[2])])
        frame = [
            [float(parts[3 + 2 * i]), float(parts[4 + 2 * i])] for i in range(n)
        ]
        pos.append(frame)
        degree.append(int(parts[3 + 2 * n]))
        max_comp.append(int(parts[4 + 2 * n]))
        pinning.append(int(parts[5 + 2 * n]))
        fallback.append(int(parts[6 + 2 * n]))
    return {
        "steps": steps,
        "shepherd": np.array(shep, dtype=np.float64),
        "positions": np.array(pos, dtype=np.float64),
        "target_degree": degree,
        "max_component": max_comp,
        "pinning": pinning,
        "fallback": fallback,
    }


def _trial_json(index: int, result: TrialResult) -> dict:
    return {
        "index": index,
        "seed": result.seed,
        "method": result.method,
        "success": result.success,
        "steps": result.steps,
        "fallback_events": result.fallback_events,
        "connectivity_time_mean": trial_time_mean(result),
        "connectivity_final": trial_final(result),
        "error": result.error,
    }


def summary_to_json(summary: RunSummary) -> str:
    doc = {
        "config": config_to_dict(summary.config),
        "generator": summary.generator,
        "backend": summary.backend,
        "seeds": summary.seeds,
        "aggregates": {
            "success_rate": summary.success_rate,
            "mean_steps_to_separation": summary.mean_steps_to_separation,
            "connectivity_time_mean": summary.connectivity_time_mean,
            "connectivity_final": summary.connectivity_final,
        },
        "trials": [_trial_json(i, r) for i, r in enumerate(summary.results)],
    }
    return json.dumps(doc, indent=2) + "\n"


def mean_connectivity_curve(results: list[TrialResult]) -> tuple[list[float], list[float]]:
    """Per-step mean of the connectivity series over trials.

    Shorter series are held at their final value so every trial weighs in
    at every step.
    """
    usable = [r.connectivity_series for r in results if r.connectivity_series]
    if not usable:
        return [], []
    horizon = max(len(s) for s in usable)
    xs = list(range(horizon))
    ys = []
    for k in range(horizon):
        total = 0.0
        for s in usable:
            total += s[k] if k < len(s) else s[-1]
        ys.append(total / len(usable))
    return [float(x) for x in xs], ys


def write_connectivity_svg(summaries: list[RunSummary], path,
                           title: str = "Remaining-swarm connectivity") -> None:
    """One mean-connectivity curve per summary (method/target batch)."""
    series = []
    for summary in summaries:
        xs, ys = mean_connectivity_curve(summary.results)
        label = f"{summary.config.method} target {summary.config.target}"
        series.append((label, xs, ys))
    line_chart(path, series, title=title, x_label="step",
               y_label="max component fraction", y_range=(0.0, 1.05))


def write_snapshot_svg(result: TrialResult, path, target: int) -> None:
    """Trajectory snapshot of one recorded trial."""
    frames = [rec.positions for rec in result.records]
    shepherd = [rec.shepherd for rec in result.records]
    trajectory_plot(
        path, frames, shepherd, target=target,
        title=f"{result.method} seed {result.seed}",
    )


def write_outputs(summary: RunSummary, out_dir) -> dict[str, list[str]]:
    """Emit all batch artifacts into ``out_dir``; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, list[str]] = {"csv": [], "json": [], "svg": []}
    for idx, result in enumerate(summary.results):
        csv_path = out / f"trial_{idx:03d}.csv"
        write_trial_csv(result, csv_path)
        manifest["csv"].append(str(csv_path))
    json_path = out / "summary.json"
    json_path.write_text(summary_to_json(summary), encoding="utf-8")
    manifest["json"].append(str(json_path))
    conn_path = out / "connectivity.svg"
    write_connectivity_svg([summary], conn_path)
    manifest["svg"].append(str(conn_path))
    _, target = generate_initial(summary.config)
    for idx in summary.config.snapshot_trials:
        if idx < len(summary.results) and summary.results[idx].records:
            snap_path = out / f"snapshot_{idx:03d}.svg"
            write_snapshot_svg(summary.results[idx], snap_path, target)
            manifest["svg"].append(str(snap_path))
    return manifest
