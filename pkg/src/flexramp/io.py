"""Artifact files: schemas, writers, readers, and the run configuration.

Every CSV starts with a versioned schema comment line followed by a
header row.  Writers are deterministic -- fixed row order, shortest
round-trip float text, no clocks -- so identical inputs produce identical
bytes, which the reproducibility contract depends on.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field, fields

import numpy as np

from .damarket import DAModel, DASolution
from .errors import ParseError, ValidationError
from .pricing import PriceSolution, Settlement
from .rtuc import Scenario

SCHEMA_PREFIX = "# schema: flexramp"


def _fmt(x) -> str:
    """Shortest round-trip decimal text for a float; ints stay ints."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _open_csv(path, kind: str):
    fh = open(path, "w", newline="")
    fh.write(f"{SCHEMA_PREFIX}/{kind}/v1\n")
    return fh


def read_schema_kind(path) -> str:
    with open(path) as fh:
        first = fh.readline().strip()
    if not first.startswith(SCHEMA_PREFIX):
        raise ParseError(f"{path}: missing schema header")
    return first[len(SCHEMA_PREFIX) + 1:]


# -- day-ahead artifacts -------------------------------------------------------

def write_da_solution_csv(path, da: DAModel, sol: DASolution) -> None:
    with _open_csv(path, "da-solution") as fh:
        w = csv.writer(fh)
        w.writerow(["gen", "hour", "P", "u", "v", "w", "ur", "dr", "ur_ih", "dr_ih"])
        for g, gen in enumerate(da.system.generators):
            for t in range(sol.n_hours):
                w.writerow([gen.id, t + 1, _fmt(sol.p[g, t]), int(sol.u[g, t]),
                            _fmt(sol.v[g, t]), _fmt(sol.w[g, t]),
                            _fmt(sol.ur[g, t]), _fmt(sol.dr[g, t]),
                            _fmt(sol.ur_ih[g, t]), _fmt(sol.dr_ih[g, t])])


def write_prices_csv(path, da: DAModel, prices: PriceSolution) -> None:
    """Long-format price table: series, key, hour, value ($/MW basis)."""
    with _open_csv(path, "da-prices") as fh:
        w = csv.writer(fh)
        w.writerow(["series", "key", "hour", "value"])
        t_n = prices.n_hours
        for r, bus in enumerate(da.system.network.buses):
            for t in range(t_n):
                w.writerow(["lmp", bus, t + 1, _fmt(prices.lmp[r, t])])
        for t in range(t_n):
            w.writerow(["lambda", "", t + 1, _fmt(prices.lam[t])])
        for name, series in (("pi_up", prices.pi_up), ("pi_down", prices.pi_down),
                             ("pi_ih_up", prices.pi_ih_up),
                             ("pi_ih_down", prices.pi_ih_down)):
            for t in range(t_n):
                w.writerow([name, "", t + 1, _fmt(series[t])])


def write_settlement_csv(path, settlement: Settlement) -> None:
    with _open_csv(path, "da-settlement") as fh:
        w = csv.writer(fh)
        w.writerow(["gen", "energy_revenue", "frp_up_revenue", "frp_down_revenue",
                    "cost", "profit"])
        for i, gid in enumerate(settlement.gen_ids):
            w.writerow([gid, _fmt(settlement.energy_revenue[i]),
                        _fmt(settlement.frp_up_revenue[i]),
                        _fmt(settlement.frp_down_revenue[i]),
                        _fmt(settlement.cost[i]), _fmt(settlement.profit[i])])


def write_da_summary_json(path, mode: str, sol: DASolution, settlement: Settlement,
                          identity_report: dict, cost_breakdown: dict) -> None:
    doc = {
        "mode": mode,
        "objective": sol.objective,
        "milp_objective": sol.milp_objective,
        "mip_gap": sol.mip_gap,
        "status": sol.status,
        "cost_breakdown": cost_breakdown,
        "load_payment": settlement.load_payment,
        "congestion_rent": settlement.congestion_rent,
        "frp_up_total": settlement.frp_up_total,
        "frp_down_total": settlement.frp_down_total,
        "frp_shortfall": sol.frp_shortfall,
        "pricing_identities": identity_report,
    }
    _write_json(path, doc)


# -- scenarios and validation artifacts ----------------------------------------

def write_scenarios_csv(path, scenarios: list) -> None:
    if not scenarios:
        raise ValidationError("no scenarios to write")
    n_q = scenarios[0].quarters.size
    with _open_csv(path, "scenarios") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario"] + [f"q{i + 1}" for i in range(n_q)])
        for s in sorted(scenarios, key=lambda s: s.id):
            w.writerow([s.id] + [_fmt(v) for v in s.quarters])


def read_scenarios_csv(path) -> list:
    kind = read_schema_kind(path)
    if kind != "scenarios/v1":
        raise ParseError(f"{path}: expected scenarios schema, found {kind}")
    out = []
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    for row in rows[1:]:
        try:
            out.append(Scenario(id=int(row[0]), seed=-1,
                                quarters=np.array([float(v) for v in row[1:]])))
        except ValueError as exc:
            raise ParseError(f"{path}: bad scenario row {row[:2]}: {exc}") from exc
    return out


def write_per_scenario_csv(path, metrics_by_mode: dict) -> None:
    """One row per (mode, scenario): the headline reliability/cost metrics."""
    with _open_csv(path, "per-scenario") as fh:
        w = csv.writer(fh)
        w.writerow(["mode", "scenario", "violation_mwh", "cost_excl_penalty",
                    "cost_incl_penalty", "fs_increase", "spike_count"])
        for mode in sorted(metrics_by_mode):
            mm = metrics_by_mode[mode]
            for i in range(mm.n_scenarios):
                w.writerow([mode, int(mm.scenario_ids[i]),
                            _fmt(mm.violation_mwh[i]), _fmt(mm.cost_excl[i]),
                            _fmt(mm.cost_incl[i]), _fmt(mm.fs_increase[i]),
                            int(mm.spike_count[i])])


def read_per_scenario_csv(path) -> dict:
    """Returns {mode: {column: list}} in file order."""
    kind = read_schema_kind(path)
    if kind != "per-scenario/v1":
        raise ParseError(f"{path}: expected per-scenario schema, found {kind}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header = rows[0]
    out = {}
    for row in rows[1:]:
        rec = dict(zip(header, row))
        mode = rec["mode"]
        slot = out.setdefault(mode, {k: [] for k in header if k != "mode"})
        slot["scenario"].append(int(rec["scenario"]))
        for k in ("violation_mwh", "cost_excl_penalty", "cost_incl_penalty",
                  "fs_increase"):
            slot[k].append(float(rec[k]))
        slot["spike_count"].append(int(rec["spike_count"]))
    return out


def write_aggregate_json(path, result) -> None:
    _write_json(path, result.to_dict())


def read_aggregate_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(path, doc) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- run configuration -----------------------------------------------------------

@dataclass
class RunConfig:
    """Batch-run settings; file values first, flag overrides on top."""

    system: str = ""
    profile: str = ""
    modes: list = field(default_factory=lambda: ["none", "general", "enhanced"])
    z: float = 1.96
    sigma_fraction: float = 0.05
    voll: float = 10000.0
    scenarios: int = 500
    seed: int = 0
    mip_gap: float = 1e-3
    fs_bid_multiplier: float = 1.0
    voll_sweep: list = field(default_factory=list)
    sigma_sweep: list = field(default_factory=list)
    outdir: str = "out"
    workers: int = 0
    terminal: str = "zero"
    spike_threshold: float = None
    time_limit: float = 600.0
    soften_frp: bool = False

    def validate_paths(self) -> None:
        for label, p in (("system", self.system), ("profile", self.profile)):
            if not p:
                raise ValidationError(f"config is missing the {label} file path")
            if not os.path.exists(p):
                raise ParseError(f"{label} file not found: {p}")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"config {path} is not valid JSON: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ParseError(f"config {path}: unknown keys {unknown}")
        return cls(**raw)

    def override(self, **kwargs) -> "RunConfig":
        for key, val in kwargs.items():
            if val is not None:
                setattr(self, key, val)
        return self
