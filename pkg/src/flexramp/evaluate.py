"""Cross-design Monte-Carlo evaluation of the day-ahead product designs.

For each requested market design this clears the day-ahead market once,
rolls every scenario through the real-time simulation, and aggregates
reliability (violations), efficiency (costs), fast-start commitment
churn, and price-spike statistics, plus pairwise scenario-level
improvement counts between designs.  Optional sweep axes rerun the
pipeline across VOLL values and forecast-uncertainty fractions.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .damarket import DAModel, DASolution, MODE_NONE, build_da_model, solve_da
from .errors import ValidationError
from .requirements import NetLoadProfile, compute_requirements
from .rtuc import (DEFAULT_VOLL, Scenario, detect_price_spikes, generate_scenarios,
                   roll_day)
from .solver import SolveOptions
from .system import SystemModel, nodal_loads

log = logging.getLogger("flexramp.evaluate")

PAIR_METRICS = ("violation_mwh", "cost_excl", "cost_incl", "fs_increase",
                "spike_count")


@dataclass
class ModeMetrics:
    """Per-scenario outcome series for one market design."""

    mode: str
    scenario_ids: np.ndarray
    violation_mwh: np.ndarray
    cost_excl: np.ndarray
    cost_incl: np.ndarray
    fs_increase: np.ndarray
    spike_count: np.ndarray
    max_lmp: np.ndarray          # (S, 96) per-interval max nodal price
    da_objective: float

    @property
    def n_scenarios(self) -> int:
        return self.scenario_ids.size

    def series(self, metric: str) -> np.ndarray:
        return getattr(self, metric)

    def _spread(self, x: np.ndarray) -> dict:
        ddof = 1 if x.size > 1 else 0
        return {"average": float(x.mean()), "std": float(x.std(ddof=ddof)),
                "max": float(x.max())}

    def violation_stats(self) -> dict:
        s = self._spread(self.violation_mwh)
        s["sum"] = float(self.violation_mwh.sum())
        s["count_with_violation"] = int((self.violation_mwh > 0).sum())
        return s

    def cost_stats(self) -> dict:
        return {"excl_penalty": self._spread(self.cost_excl),
                "incl_penalty": self._spread(self.cost_incl)}

    def fs_stats(self) -> dict:
        s = self._spread(self.fs_increase)
        s["sum"] = float(self.fs_increase.sum())
        s["count_with_increase"] = int((self.fs_increase > 0).sum())
        return s

    def to_dict(self) -> dict:
        return {"mode": self.mode, "n_scenarios": self.n_scenarios,
                "da_objective": self.da_objective,
                "violation": self.violation_stats(),
                "cost": self.cost_stats(),
                "fs_commitment_increase": self.fs_stats(),
                "spike_count_total": int(self.spike_count.sum())}


@dataclass
class EvaluationResult:
    """Everything the aggregate report needs, in memory."""

    modes: dict                  # mode -> ModeMetrics
    pairwise: dict               # "A|B" -> {metric: count A <= B}
    spikes: dict                 # detect_price_spikes output across designs
    voll: float
    spike_threshold: float
    fs_bid_multiplier: float
    sweeps: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"voll": self.voll, "spike_threshold": self.spike_threshold,
                "fs_bid_multiplier": self.fs_bid_multiplier,
                "modes": {m: mm.to_dict() for m, mm in sorted(self.modes.items())},
                "pairwise": self.pairwise, "spikes": self.spikes,
                "sweeps": self.sweeps}


def clear_da_for_mode(system: SystemModel, profile: NetLoadProfile, mode: str,
                      terminal: str = "zero", options: SolveOptions = None,
                      backend=None, soften_frp: bool = False):
    """Clear one day-ahead market design for a profile; returns (model, solution)."""
    reqs = None if mode == MODE_NONE else compute_requirements(profile, terminal)
    load = nodal_loads(system, profile.hourly)
    da = build_da_model(system, load, mode=mode, requirements=reqs,
                        soften_frp=soften_frp)
    sol = solve_da(da, options, backend)
    return da, sol


def _roll_one(payload) -> tuple:
    (system, da_sol, scenario, voll, fs_mult, threshold, options, mode) = payload
    day = roll_day(system, da_sol, scenario, voll=voll,
                   fs_bid_multiplier=fs_mult, spike_threshold=threshold,
                   options=options, keep_lmps=False, mode_label=mode)
    return (scenario.id, day.total_violation_mwh, day.cost_excl_penalty,
            day.cost_incl_penalty, day.fs_increase, day.spike_count, day.max_lmp)


def _roll_mode(system, da_sol, scenarios, mode, voll, fs_mult, threshold,
               options, workers) -> list:
    payloads = [(system, da_sol, s, voll, fs_mult, threshold, options, mode)
                for s in scenarios]
    if workers and workers > 1 and len(scenarios) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_roll_one, payloads))
    else:
        rows = [_roll_one(p) for p in payloads]
    rows.sort(key=lambda r: r[0])       # deterministic regardless of completion order
    return rows


def _metrics_from_rows(mode: str, rows: list, da_objective: float) -> ModeMetrics:
    return ModeMetrics(
        mode=mode,
        scenario_ids=np.array([r[0] for r in rows], dtype=int),
        violation_mwh=np.array([r[1] for r in rows]),
        cost_excl=np.array([r[2] for r in rows]),
        cost_incl=np.array([r[3] for r in rows]),
        fs_increase=np.array([r[4] for r in rows]),
        spike_count=np.array([r[5] for r in rows], dtype=int),
        max_lmp=np.vstack([r[6][None, :] for r in rows]),
        da_objective=da_objective)


def pairwise_improvements(metrics: dict) -> dict:
    """Scenario-level "same or less" counts for every ordered design pair."""
    out = {}
    names = sorted(metrics)
    for a in names:
        for b in names:
            if a == b:
                continue
            ma, mb = metrics[a], metrics[b]
            if ma.n_scenarios != mb.n_scenarios:
                raise ValidationError(
                    f"designs {a!r} and {b!r} saw different scenario counts")
            out[f"{a}<={b}"] = {
                metric: int((ma.series(metric) <= mb.series(metric)).sum())
                for metric in PAIR_METRICS}
    return out


def evaluate_designs(system: SystemModel, profile: NetLoadProfile, scenarios: list,
                     modes, backend=None, *, voll: float = DEFAULT_VOLL,
                     fs_bid_multiplier: float = 1.0, spike_threshold: float = None,
                     terminal: str = "zero", options: SolveOptions = None,
                     workers: int = 0, voll_sweep=(), sigma_sweep=(),
                     seed: int = 0) -> EvaluationResult:
    """Full design comparison: one DA clearing per mode, all scenarios rolled.

    ``sigma_sweep`` values are uncertainty fractions of the hourly
    forecast; each re-derives the profile, requirements, day-ahead
    clearing, and scenario set (same seed and count), so the axis matches
    how the uncertainty assumption propagates end to end.  ``voll_sweep``
    re-rolls the same scenarios under different penalty prices with the
    day-ahead schedules unchanged.
    """
    if not scenarios:
        raise ValidationError("need at least one scenario")
    modes = list(modes)
    if not modes:
        raise ValidationError("need at least one market design")
    if spike_threshold is None:
        spike_threshold = 0.5 * voll
    options = options or SolveOptions()

    metrics = {}
    solutions = {}
    for mode in modes:
        da, sol = clear_da_for_mode(system, profile, mode, terminal, options, backend)
        solutions[mode] = (da, sol)
        log.info("mode %s: DA objective %.2f $", mode, sol.objective)
        rows = _roll_mode(system, sol, scenarios, mode, voll, fs_bid_multiplier,
                          spike_threshold, options, workers)
        metrics[mode] = _metrics_from_rows(mode, rows, sol.objective)
        log.info("mode %s: %d scenarios, avg violation %.4f MWh", mode,
                 len(rows), float(metrics[mode].violation_mwh.mean()))

    spikes = detect_price_spikes({m: mm.max_lmp for m, mm in metrics.items()},
                                 spike_threshold)
    result = EvaluationResult(modes=metrics, pairwise=pairwise_improvements(metrics),
                              spikes=spikes, voll=voll,
                              spike_threshold=spike_threshold,
                              fs_bid_multiplier=fs_bid_multiplier)

    for v in voll_sweep:
        row = {"voll": float(v), "modes": {}}
        for mode in modes:
            _, sol = solutions[mode]
            rows = _roll_mode(system, sol, scenarios, mode, float(v),
                              fs_bid_multiplier, 0.5 * float(v), options, workers)
            mm = _metrics_from_rows(mode, rows, sol.objective)
            row["modes"][mode] = {
                "avg_violation_mwh": float(mm.violation_mwh.mean()),
                "total_violation_mwh": float(mm.violation_mwh.sum()),
                "avg_cost_incl": float(mm.cost_incl.mean()),
                "avg_cost_excl": float(mm.cost_excl.mean())}
        result.sweeps.setdefault("voll", []).append(row)

    for frac in sigma_sweep:
        prof_f = profile.with_sigma_fraction(float(frac))
        scen_f = generate_scenarios(prof_f, len(scenarios), seed=seed)
        row = {"sigma_fraction": float(frac), "modes": {}}
        for mode in modes:
            da_f, sol_f = clear_da_for_mode(system, prof_f, mode, terminal,
                                            options, backend)
            rows = _roll_mode(system, sol_f, scen_f, mode, voll,
                              fs_bid_multiplier, spike_threshold, options, workers)
            mm = _metrics_from_rows(mode, rows, sol_f.objective)
            row["modes"][mode] = {
                "da_objective": sol_f.objective,
                "avg_violation_mwh": float(mm.violation_mwh.mean()),
                "total_violation_mwh": float(mm.violation_mwh.sum()),
                "avg_cost_incl": float(mm.cost_incl.mean())}
        result.sweeps.setdefault("sigma_fraction", []).append(row)

    return result
