"""Physical market footprint: generators, network, loads, and DC sensitivities.

Everything here is immutable after construction and safe to share across
concurrent readers.  Units: MW, MWh, $, $/MWh, hours; line reactances are
per-unit (the only per-unit quantity in the package).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class Generator:
    id: str
    bus: int
    cost_energy: float       # $/MWh
    cost_noload: float       # $/h while committed
    cost_startup: float      # $ per start
    cost_shutdown: float     # $ per stop
    p_min: float             # MW
    p_max: float             # MW
    ramp_hourly: float       # MW per hour
    ramp_15min: float        # MW per 15 minutes
    ramp_startup: float      # MW reachable in the starting period
    ramp_shutdown: float     # MW from which the unit can stop
    min_up: int              # hours
    min_down: int            # hours
    fast_start: bool = False
    initial_on: bool = False
    initial_output: float = 0.0
    initial_hours: int = 0   # hours already spent in the initial state

    def validate(self) -> None:
        g = self.id
        if self.p_min > self.p_max:
            raise ValidationError(f"generator {g}: p_min {self.p_min} exceeds p_max {self.p_max}")
        for name in ("cost_energy", "cost_noload", "cost_startup", "cost_shutdown",
                     "ramp_hourly", "ramp_15min", "ramp_startup", "ramp_shutdown",
                     "p_min", "p_max"):
            if getattr(self, name) < 0:
                raise ValidationError(f"generator {g}: {name} must be >= 0")
        if self.min_up < 0 or self.min_down < 0:
            raise ValidationError(f"generator {g}: min up/down times must be >= 0")
        if self.ramp_15min > self.ramp_hourly + 1e-9:
            raise ValidationError(f"generator {g}: ramp_15min exceeds ramp_hourly")
        if self.initial_on:
            if not (self.p_min - 1e-9 <= self.initial_output <= self.p_max + 1e-9):
                raise ValidationError(
                    f"generator {g}: initial output {self.initial_output} outside "
                    f"[{self.p_min}, {self.p_max}] while initially on")
        elif self.initial_output != 0.0:
            raise ValidationError(f"generator {g}: initial output must be 0 while off")

    @staticmethod
    def default_initial(min_down: int) -> dict:
        """Initial-state fields that leave no min-down time binding."""
        return {"initial_on": False, "initial_output": 0.0, "initial_hours": min_down}


@dataclass(frozen=True)
class Line:
    from_bus: int
    to_bus: int
    reactance: float   # p.u.
    rating: float      # MW, symmetric thermal limit


@dataclass
class NetworkModel:
    buses: list            # bus ids, order defines the bus axis
    lines: list            # Line records, order defines the line axis
    slack_bus: int
    ptdf: np.ndarray = None          # (n_buses, n_lines), slack row all zero
    bus_index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.bus_index:
            self.bus_index = {b: i for i, b in enumerate(self.buses)}
        if len(self.bus_index) != len(self.buses):
            raise ValidationError("duplicate bus ids in network")
        if self.slack_bus not in self.bus_index:
            raise ValidationError(f"slack bus {self.slack_bus} is not a bus")
        for ln in self.lines:
            if ln.from_bus not in self.bus_index or ln.to_bus not in self.bus_index:
                raise ValidationError(f"line {ln.from_bus}-{ln.to_bus} references an unknown bus")
            if ln.reactance <= 0:
                raise ValidationError(f"line {ln.from_bus}-{ln.to_bus}: reactance must be > 0")
            if ln.rating < 0:
                raise ValidationError(f"line {ln.from_bus}-{ln.to_bus}: rating must be >= 0")
        if not _connected(len(self.buses), self._edges()):
            raise ValidationError("network graph is not connected")
        if self.ptdf is None:
            self.ptdf = compute_ptdf(self)

    def _edges(self):
        return [(self.bus_index[ln.from_bus], self.bus_index[ln.to_bus]) for ln in self.lines]

    @property
    def n_buses(self) -> int:
        return len(self.buses)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def ratings(self) -> np.ndarray:
        return np.array([ln.rating for ln in self.lines])


@dataclass
class SystemModel:
    generators: list
    network: NetworkModel
    load_shares: np.ndarray   # per bus, nonnegative, sums to 1
    name: str = ""

    def __post_init__(self):
        for g in self.generators:
            g.validate()
            if g.bus not in self.network.bus_index:
                raise ValidationError(f"generator {g.id}: bus {g.bus} is not in the network")
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate generator ids")
        self.load_shares = np.asarray(self.load_shares, dtype=float)
        if self.load_shares.shape != (self.network.n_buses,):
            raise ValidationError("load_shares length must equal the number of buses")
        if (self.load_shares < 0).any():
            raise ValidationError("load_shares must be >= 0")
        total = float(self.load_shares.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"load_shares sum to {total}, expected 1")
        # renormalize the residual rounding so nodal loads add up exactly
        self.load_shares = self.load_shares / total

    @property
    def n_gens(self) -> int:
        return len(self.generators)

    def gen_bus_rows(self) -> np.ndarray:
        """Bus-axis row of each generator."""
        return np.array([self.network.bus_index[g.bus] for g in self.generators])

    def gens_at_bus(self) -> list:
        """g(n): generator positions grouped by bus-axis row."""
        out = [[] for _ in range(self.network.n_buses)]
        for i, row in enumerate(self.gen_bus_rows()):
            out[row].append(i)
        return out

    def fast_start_mask(self) -> np.ndarray:
        return np.array([g.fast_start for g in self.generators])


def _connected(n: int, edges: list) -> bool:
    if n == 0:
        return False
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return all(seen)


def compute_ptdf(network: NetworkModel) -> np.ndarray:
    """DC injection-shift factors, one column per line, slack row zero.

    Entry (n, k) is the MW flow induced on line k (positive in its
    from->to orientation) by injecting 1 MW at bus n and withdrawing it at
    the slack bus.
    """
    n = network.n_buses
    k = len(network.lines)
    if not _connected(n, network._edges()):
        raise ValidationError("network graph is not connected; susceptance matrix is singular")
    b = np.array([1.0 / ln.reactance for ln in network.lines], dtype=float)
    frm = np.array([network.bus_index[ln.from_bus] for ln in network.lines], dtype=int)
    to = np.array([network.bus_index[ln.to_bus] for ln in network.lines], dtype=int)

    bmat = np.zeros((n, n))
    np.add.at(bmat, (frm, frm), b)
    np.add.at(bmat, (to, to), b)
    np.add.at(bmat, (frm, to), -b)
    np.add.at(bmat, (to, frm), -b)

    slack = network.bus_index[network.slack_bus]
    keep = np.delete(np.arange(n), slack)
    reduced = bmat[np.ix_(keep, keep)]
    try:
        x = np.linalg.inv(reduced)
    except np.linalg.LinAlgError as exc:
        raise ValidationError(f"susceptance matrix is singular: {exc}") from exc
    # pad the slack row/column of the reactance matrix back with zeros
    xfull = np.zeros((n, n))
    xfull[np.ix_(keep, keep)] = x
    ptdf = (b[None, :] * (xfull[:, frm] - xfull[:, to]))
    ptdf[slack, :] = 0.0
    return ptdf


def dc_flows(network: NetworkModel, injections: np.ndarray) -> np.ndarray:
    """Line flows for a balanced injection vector, via the PTDF matrix."""
    injections = np.asarray(injections, dtype=float)
    return network.ptdf.T @ injections


def nodal_loads(system: SystemModel, system_load: np.ndarray) -> np.ndarray:
    """Distribute a system-level profile to buses with the fixed shares.

    Returns an (n_buses, n_periods) table whose per-period column sums
    reproduce the system profile.
    """
    system_load = np.atleast_1d(np.asarray(system_load, dtype=float))
    return system.load_shares[:, None] * system_load[None, :]


# -- system file schema ----------------------------------------------------

def load_system(path) -> SystemModel:
    """Read a system file (JSON, documented in the README) and validate it."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read system file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"system file {path} is not valid JSON: {exc}") from exc
    return system_from_dict(raw, name=str(path))


def system_from_dict(raw: dict, name: str = "") -> SystemModel:
    for section in ("buses", "lines", "generators", "load_shares"):
        if section not in raw:
            raise ParseError(f"system file missing section {section!r}")
    buses = list(raw["buses"])
    try:
        lines = [Line(from_bus=ln["from"], to_bus=ln["to"],
                      reactance=float(ln["x"]), rating=float(ln["rating"]))
                 for ln in raw["lines"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed line record: {exc}") from exc
    slack = raw.get("slack_bus", min(buses))
    network = NetworkModel(buses=buses, lines=lines, slack_bus=slack)

    gens = []
    for rec in raw["generators"]:
        try:
            kwargs = dict(
                id=str(rec["id"]),
                bus=rec["bus"],
                cost_energy=float(rec["cost_energy"]),
                cost_noload=float(rec.get("cost_noload", 0.0)),
                cost_startup=float(rec.get("cost_startup", 0.0)),
                cost_shutdown=float(rec.get("cost_shutdown", 0.0)),
                p_min=float(rec["p_min"]),
                p_max=float(rec["p_max"]),
                ramp_hourly=float(rec["ramp_hourly"]),
                ramp_15min=float(rec["ramp_15min"]),
                ramp_startup=float(rec["ramp_startup"]),
                ramp_shutdown=float(rec["ramp_shutdown"]),
                min_up=int(rec.get("min_up", 1)),
                min_down=int(rec.get("min_down", 1)),
                fast_start=bool(rec.get("fast_start", False)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed generator record {rec.get('id', '?')!r}: {exc}") from exc
        if "initial_on" in rec:
            kwargs.update(
                initial_on=bool(rec["initial_on"]),
                initial_output=float(rec.get("initial_output", 0.0)),
                initial_hours=int(rec.get("initial_hours", 0)),
            )
        else:
            kwargs.update(Generator.default_initial(kwargs["min_down"]))
        gens.append(Generator(**kwargs))

    shares_map = raw["load_shares"]
    shares = np.zeros(len(buses))
    for key, val in shares_map.items():
        bus = type(buses[0])(key) if not isinstance(key, type(buses[0])) else key
        if bus not in network.bus_index:
            raise ParseError(f"load share references unknown bus {key!r}")
        shares[network.bus_index[bus]] = float(val)

    return SystemModel(generators=gens, network=network, load_shares=shares,
                       name=raw.get("name", name))


def system_to_dict(system: SystemModel) -> dict:
    return {
        "name": system.name,
        "slack_bus": system.network.slack_bus,
        "buses": list(system.network.buses),
        "lines": [{"from": ln.from_bus, "to": ln.to_bus, "x": ln.reactance,
                   "rating": ln.rating} for ln in system.network.lines],
        "generators": [{
            "id": g.id, "bus": g.bus, "cost_energy": g.cost_energy,
            "cost_noload": g.cost_noload, "cost_startup": g.cost_startup,
            "cost_shutdown": g.cost_shutdown, "p_min": g.p_min, "p_max": g.p_max,
            "ramp_hourly": g.ramp_hourly, "ramp_15min": g.ramp_15min,
            "ramp_startup": g.ramp_startup, "ramp_shutdown": g.ramp_shutdown,
            "min_up": g.min_up, "min_down": g.min_down, "fast_start": g.fast_start,
            "initial_on": g.initial_on, "initial_output": g.initial_output,
            "initial_hours": g.initial_hours,
        } for g in system.generators],
        "load_shares": {str(b): float(s)
                        for b, s in zip(system.network.buses, system.load_shares) if s > 0},
    }
