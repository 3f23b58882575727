"""Experiment harness: the three-mode headline run, sensitivity sweeps, and
mode-contrast statistics.

Trials are paired across modes through a common arrival stream (same trial
index, same master seed); comparisons still use Welch's unpaired test. Trials
are embarrassingly parallel; aggregation sorts deterministically so output
ordering never depends on worker scheduling.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .config import (ROADSIDE_COVERAGE_DEPTH, CorridorConfig, Mode,
                     coverage_ok, replace_config)
from .engine import run_trial
from .records import TrialRecord, record_from_result
from .stats import significance_stars, welch_t

ALL_MODES = (Mode.CONTROL, Mode.DETECTION, Mode.AWARE)

SPACING_GRID = (5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0)
SIZE_GRID = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)
KAPPA_GRID = (0.3, 0.5, 1.0, 2.0, 3.0, 5.0)

SWEEP_GRIDS = {"spacing": SPACING_GRID, "size": SIZE_GRID, "kappa": KAPPA_GRID}
SWEEP_FIELDS = {"spacing": "radar_spacing", "size": "size_scale", "kappa": "kappa"}

# The seven reported headline metrics.
HEADLINE_METRICS = (
    "collision_rate_per_entry_pct",
    "detection_rate_pct",
    "mean_in_range_latency",
    "arrivals",
    "road_entries",
    "crossing_success_rate_pct",
    "frozen_on_road_time",
)

CONTRASTS = ((Mode.CONTROL, Mode.DETECTION), (Mode.CONTROL, Mode.AWARE))


@dataclass
class ExperimentPlan:
    kind: str                      # "headline", "spacing", "size", or "kappa"
    trials_per_point: int
    hours_per_trial: float
    values: tuple[float, ...]      # a single dummy value () for the headline
    master_seed: int
    modes: tuple[Mode, ...] = ALL_MODES

    @classmethod
    def headline(cls, master_seed: int, trials_per_point: int = 20,
                 hours_per_trial: float = 4.0,
                 modes: tuple[Mode, ...] = ALL_MODES) -> "ExperimentPlan":
        return cls(kind="headline", trials_per_point=trials_per_point,
                   hours_per_trial=hours_per_trial, values=(),
                   master_seed=master_seed, modes=modes)

    @classmethod
    def sweep(cls, kind: str, master_seed: int, trials_per_point: int = 15,
              hours_per_trial: float = 2.0,
              values: Optional[Sequence[float]] = None,
              modes: tuple[Mode, ...] = ALL_MODES) -> "ExperimentPlan":
        if kind not in SWEEP_GRIDS:
            raise ValueError(f"unknown sweep kind {kind!r}")
        grid = tuple(values) if values is not None else SWEEP_GRIDS[kind]
        return cls(kind=kind, trials_per_point=trials_per_point,
                   hours_per_trial=hours_per_trial, values=grid,
                   master_seed=master_seed, modes=modes)


def sweep_config(base: CorridorConfig, kind: str, value: float) -> CorridorConfig:
    """The base config with one swept parameter replaced."""
    return replace_config(base, **{SWEEP_FIELDS[kind]: value})


def _execute(task) -> TrialRecord:
    experiment, sweep_value, config, hours, trial_id, master_seed = task
    result = run_trial(config, hours, trial_id, master_seed)
    return record_from_result(result, config, experiment, sweep_value)


def _run_tasks(tasks: list, workers: int) -> list[TrialRecord]:
    if workers <= 1 or len(tasks) <= 1:
        return [_execute(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(tasks) // (workers * 8))
        return list(pool.map(_execute, tasks, chunksize=chunk))


def default_workers() -> int:
    env = os.environ.get("WVC_SIM_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def run_headline(plan: ExperimentPlan, base_config: Optional[CorridorConfig] = None,
                 workers: int = 1) -> list[TrialRecord]:
    """Run the three-mode comparison with arrival pairing across modes."""
    base = base_config if base_config is not None else CorridorConfig()
    tasks = [
        ("headline", None, base.with_mode(mode), plan.hours_per_trial,
         trial_id, plan.master_seed)
        for mode in plan.modes
        for trial_id in range(plan.trials_per_point)
    ]
    return _run_tasks(tasks, workers)


def run_sweep(plan: ExperimentPlan, base_config: Optional[CorridorConfig] = None,
              workers: int = 1) -> list[TrialRecord]:
    """Run one sensitivity sweep over the plan's value grid.

    Spacing sweep points whose geometry cannot cover the roadside strip get a
    warning (the points still run; detection simply degrades there).
    """
    if plan.kind not in SWEEP_GRIDS:
        raise ValueError(f"plan kind {plan.kind!r} is not a sweep")
    base = base_config if base_config is not None else CorridorConfig()
    if plan.kind == "spacing":
        for value in plan.values:
            if not coverage_ok(value, ROADSIDE_COVERAGE_DEPTH, base.radar_range):
                warnings.warn(
                    f"spacing {value:g} m leaves coverage gaps in the "
                    f"{ROADSIDE_COVERAGE_DEPTH:g} m roadside strip "
                    f"(range {base.radar_range:g} m)", stacklevel=2)
    tasks = [
        (plan.kind, value, sweep_config(base, plan.kind, value).with_mode(mode),
         plan.hours_per_trial, trial_id, plan.master_seed)
        for value in plan.values
        for mode in plan.modes
        for trial_id in range(plan.trials_per_point)
    ]
    return _run_tasks(tasks, workers)


# ---------------------------------------------------------------------------
# Mode-contrast statistics


@dataclass
class ComparisonStat:
    """One metric contrast at one sweep point (baseline mode_a vs mode_b)."""

    metric: str
    sweep_value: Optional[float]
    mode_a: str
    n_a: int
    mean_a: Optional[float]
    sd_a: Optional[float]
    mode_b: str
    n_b: int
    mean_b: Optional[float]
    sd_b: Optional[float]
    t: Optional[float]
    df: Optional[float]
    p: Optional[float]
    stars: str
    rel_change_pct: Optional[float]
    degenerate: bool = False


def _metric_sample(records: Sequence[TrialRecord], metric: str) -> list[float]:
    # Missing metrics (e.g. a rate with a zero denominator) are excluded.
    return [getattr(r, metric) for r in records if getattr(r, metric) is not None]


def _moments(xs: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not xs:
        return None, None
    m = sum(xs) / len(xs)
    if len(xs) < 2:
        return m, None
    sd = (sum((x - m) ** 2 for x in xs) / (len(xs) - 1)) ** 0.5
    return m, sd


def summarize(records: Sequence[TrialRecord],
              metrics: Sequence[str] = HEADLINE_METRICS) -> list[ComparisonStat]:
    """Welch contrasts (Control vs each sensor mode) per metric per sweep point."""
    values = sorted({r.sweep_value for r in records},
                    key=lambda v: (v is not None, v))
    stats: list[ComparisonStat] = []
    for value in values:
        group = [r for r in records if r.sweep_value == value]
        by_mode = {mode.value: [r for r in group if r.mode == mode.value]
                   for mode in ALL_MODES}
        for metric in metrics:
            for mode_a, mode_b in CONTRASTS:
                xs = _metric_sample(by_mode[mode_a.value], metric)
                ys = _metric_sample(by_mode[mode_b.value], metric)
                mean_a, sd_a = _moments(xs)
                mean_b, sd_b = _moments(ys)
                t = df = p = rel = None
                stars = ""
                degenerate = False
                if len(xs) >= 2 and len(ys) >= 2:
                    w = welch_t(xs, ys)
                    t, df, p, degenerate = w.t, w.df, w.p, w.degenerate
                    stars = significance_stars(p)
                if mean_a not in (None, 0.0) and mean_b is not None:
                    rel = 100.0 * (mean_b - mean_a) / mean_a
                stats.append(ComparisonStat(
                    metric=metric, sweep_value=value,
                    mode_a=mode_a.value, n_a=len(xs), mean_a=mean_a, sd_a=sd_a,
                    mode_b=mode_b.value, n_b=len(ys), mean_b=mean_b, sd_b=sd_b,
                    t=t, df=df, p=p, stars=stars, rel_change_pct=rel,
                    degenerate=degenerate))
    return stats


def format_summary(stats: Sequence[ComparisonStat]) -> str:
    """Human-readable contrast table."""
    lines = []
    header = (f"{'metric':<34}{'value':>7}  {'contrast':<22}"
              f"{'mean_a':>10}{'mean_b':>10}{'t':>8}{'p':>10}  stars  rel%")
    lines.append(header)
    lines.append("-" * len(header))
    for s in stats:
        value = "" if s.sweep_value is None else f"{s.sweep_value:g}"
        contrast = f"{s.mode_a} vs {s.mode_b}"
        mean_a = "" if s.mean_a is None else f"{s.mean_a:.3f}"
        mean_b = "" if s.mean_b is None else f"{s.mean_b:.3f}"
        t = "" if s.t is None else f"{s.t:.2f}"
        p = "" if s.p is None else f"{s.p:.4g}"
        rel = "" if s.rel_change_pct is None else f"{s.rel_change_pct:+.1f}"
        lines.append(f"{s.metric:<34}{value:>7}  {contrast:<22}"
                     f"{mean_a:>10}{mean_b:>10}{t:>8}{p:>10}  {s.stars:<5}  {rel}")
    return "\n".join(lines)
