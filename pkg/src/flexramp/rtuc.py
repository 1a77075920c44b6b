"""Rolling fifteen-minute real-time unit commitment over one trading day.

One run per trading hour covers seven quarter-hour intervals, from 45
minutes before the hour to 60 minutes after its start.  The three
look-back intervals repeat the previous run's already-binding dispatch and
commitment; the hour's own four quarters are this run's binding
intervals.  Long-start units keep their day-ahead commitment for whatever
hour each interval falls in; fast-start units may be started or stopped
freely at quarter resolution.  Power-balance slack at every bus keeps
each run feasible -- unserved or excess energy is priced at the value of
lost load and reported as violation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .damarket import DASolution
from .errors import ModelBuildError, SolveError, ValidationError
from .model import EQ, LE, LinearModel
from .requirements import NetLoadProfile
from .solver import SolveOptions, get_backend
from .system import SystemModel

log = logging.getLogger("flexramp.rtuc")

DEFAULT_VOLL = 10000.0          # $/MWh
INTERVAL_H = 0.25               # hours per interval
PREFIX_LEN = 3                  # overlapping intervals repeated from the prior run


@dataclass
class Scenario:
    """One realized quarter-resolution net-load trajectory for the day."""

    id: int
    seed: int
    quarters: np.ndarray        # (4 * n_hours,) MW, nonnegative

    def __post_init__(self):
        self.quarters = np.asarray(self.quarters, dtype=float)
        if self.quarters.ndim != 1 or self.quarters.size % 4:
            raise ValidationError("scenario must hold four quarters per hour")
        if (self.quarters < 0).any():
            raise ValidationError("scenario net load must be nonnegative")

    @property
    def n_hours(self) -> int:
        return self.quarters.size // 4


def generate_scenarios(profile: NetLoadProfile, n: int, seed: int = 0) -> list:
    """Draw independent realized trajectories around the quarter forecast.

    Each quarter gets an independent Gaussian deviation with that hour's
    quarter-resolution standard deviation; results are clamped at zero.
    Every scenario uses its own named substream of ``seed``, so the set is
    reproducible and insensitive to generation order.
    """
    if n < 1:
        raise ValidationError("need at least one scenario")
    base = profile.quarter.ravel()
    sig = np.repeat(profile.sigma_15, 4)
    out = []
    for sid in range(n):
        rng = np.random.default_rng([seed, sid])
        draw = base + rng.standard_normal(base.size) * sig
        out.append(Scenario(id=sid, seed=seed, quarters=np.maximum(draw, 0.0)))
    return out


@dataclass
class PriorBindings:
    """The four binding quarters of the previous run, in quarter order."""

    p: np.ndarray               # (G, 4) MW
    u: np.ndarray               # (G, 4) 0/1


@dataclass
class RTUCModel:
    """A built real-time run plus its index maps."""

    model: LinearModel
    system: SystemModel
    run_hour: int               # 1-based trading hour
    quarters: np.ndarray        # (n_i,) global 0-based quarter numbers
    binding_mask: np.ndarray    # (n_i,) bool
    fixed_mask: np.ndarray      # (n_i,) bool, prefix intervals
    nodal_load: np.ndarray      # (N, n_i) realized MW
    da_hours: np.ndarray        # (n_i,) 0-based DA hour of each interval
    da_fs_committed: np.ndarray  # (n_i,) FS units committed day-ahead
    voll: float
    fs_bid_multiplier: float
    iP: np.ndarray = None       # (G, n_i)
    iu: np.ndarray = None
    iv: np.ndarray = None
    iw: np.ndarray = None
    ipinj: np.ndarray = None    # (N, n_i)
    ispos: np.ndarray = None
    isneg: np.ndarray = None
    irf: np.ndarray = None      # (N, n_i) balance row numbers

    @property
    def n_intervals(self) -> int:
        return self.quarters.size


@dataclass
class RTUCRunResult:
    """Solved real-time run: schedules, violations, costs, prices."""

    hour: int
    quarters: np.ndarray        # (n_i,) global 1-based quarter numbers
    binding_mask: np.ndarray    # (n_i,) bool, exactly four True
    p: np.ndarray               # (G, n_i) MW
    u: np.ndarray               # (G, n_i) ints
    v: np.ndarray
    w: np.ndarray
    slack_pos: np.ndarray       # (N, n_i) unserved MW
    slack_neg: np.ndarray       # (N, n_i) excess MW
    violation_mw: np.ndarray    # (n_i,) total slack MW
    interval_cost: np.ndarray   # (n_i,) $ as-bid, no violation penalty
    lmp: np.ndarray             # (N, n_i) $/MWh
    fs_committed_rt: np.ndarray  # (n_i,) committed fast-start units
    fs_committed_da: np.ndarray
    objective: float = 0.0
    status: str = ""

    def binding(self, table: np.ndarray) -> np.ndarray:
        """Slice an (..., n_i) result down to the four binding intervals."""
        return table[..., self.binding_mask]


def run_quarters(run_hour: int, n_hours: int) -> np.ndarray:
    """Global 0-based quarters covered by one run (7, or 4 for hour one)."""
    if not 1 <= run_hour <= n_hours:
        raise ModelBuildError(f"run hour {run_hour} outside 1..{n_hours}")
    end = 4 * run_hour
    start = max(0, end - 4 - PREFIX_LEN)
    return np.arange(start, end)


def build_rtuc_model(run_hour: int, system: SystemModel, da: DASolution,
                     prior: PriorBindings, scenario: Scenario,
                     voll: float = DEFAULT_VOLL,
                     fs_bid_multiplier: float = 1.0) -> RTUCModel:
    """Assemble one real-time run.

    ``prior`` must be the previous run's binding quarters for every hour
    after the first; the three overlap intervals are fixed to it, and the
    interval before the window anchors the ramp and commitment-transition
    rows.  Hour one anchors to the day-ahead hour-1 schedule instead.
    """
    n_hours = da.n_hours
    if scenario.n_hours != n_hours:
        raise ModelBuildError(
            f"scenario spans {scenario.n_hours} hours, day-ahead spans {n_hours}")
    quarters = run_quarters(run_hour, n_hours)
    n_i = quarters.size
    first = run_hour == 1
    if not first and prior is None:
        raise ModelBuildError(f"run hour {run_hour} needs the prior run's bindings")

    gens = system.generators
    g_n = len(gens)
    net = system.network
    n_buses = net.n_buses
    fs = system.fast_start_mask()

    da_hours = quarters // 4
    binding_mask = quarters >= 4 * (run_hour - 1)
    fixed_mask = ~binding_mask
    nodal_load = system.load_shares[:, None] * scenario.quarters[quarters][None, :]
    da_fs_committed = np.array([int(da.u[fs, h].sum()) for h in da_hours])

    # anchor state: the interval immediately before the window
    if first:
        anchor_p = da.p[:, 0].copy()
        anchor_u = da.u[:, 0].astype(float)
    else:
        anchor_p = prior.p[:, 0].copy()
        anchor_u = prior.u[:, 0].astype(float)

    m = LinearModel(name=f"rtuc-h{run_hour}")
    iP = np.zeros((g_n, n_i), dtype=int)
    iu = np.zeros((g_n, n_i), dtype=int)
    iv = np.zeros((g_n, n_i), dtype=int)
    iw = np.zeros((g_n, n_i), dtype=int)
    ipinj = np.zeros((n_buses, n_i), dtype=int)
    ispos = np.zeros((n_buses, n_i), dtype=int)
    isneg = np.zeros((n_buses, n_i), dtype=int)
    irf = np.zeros((n_buses, n_i), dtype=int)

    for g, gen in enumerate(gens):
        c_energy = gen.cost_energy * (fs_bid_multiplier if fs[g] else 1.0)
        for i, gq in enumerate(quarters):
            q1 = gq + 1
            if fixed_mask[i]:
                p_lb = p_ub = float(prior.p[g, i + 1])
                u_lb = u_ub = float(prior.u[g, i + 1])
            elif fs[g]:
                p_lb, p_ub = 0.0, np.inf
                u_lb, u_ub = 0.0, 1.0
            else:
                p_lb, p_ub = 0.0, np.inf
                u_lb = u_ub = float(da.u[g, da_hours[i]])
            iP[g, i] = m.add_var(f"P[{gen.id},{q1}]", lb=p_lb, ub=p_ub,
                                 obj=INTERVAL_H * c_energy)
            iu[g, i] = m.add_var(f"u[{gen.id},{q1}]", lb=u_lb, ub=u_ub,
                                 integer=True, obj=INTERVAL_H * gen.cost_noload)
            # integer start/stop indicators: a fractional v = w pair would
            # widen the start-reach term of the ramp rows at zero cost
            iv[g, i] = m.add_var(f"v[{gen.id},{q1}]", lb=0.0, ub=1.0,
                                 integer=True, obj=gen.cost_startup)
            iw[g, i] = m.add_var(f"w[{gen.id},{q1}]", lb=0.0, ub=1.0,
                                 integer=True, obj=gen.cost_shutdown)

    for r, bus in enumerate(net.buses):
        for i, gq in enumerate(quarters):
            q1 = gq + 1
            ipinj[r, i] = m.add_var(f"pinj[{bus},{q1}]", lb=-np.inf, ub=np.inf)
            ispos[r, i] = m.add_var(f"spos[{bus},{q1}]", lb=0.0,
                                    obj=INTERVAL_H * voll)
            isneg[r, i] = m.add_var(f"sneg[{bus},{q1}]", lb=0.0,
                                    obj=INTERVAL_H * voll)

    # commitment logic, capacity, quarter-hour ramps
    for g, gen in enumerate(gens):
        start_reach = max(gen.p_min, gen.ramp_15min)
        for i, gq in enumerate(quarters):
            q1 = gq + 1
            if i == 0:
                m.add_constr(f"rj[{gen.id},{q1}]",
                             [iv[g, i], iw[g, i], iu[g, i]], [1.0, -1.0, -1.0],
                             EQ, -float(anchor_u[g]))
                m.add_constr(f"rd[{gen.id},{q1}]",
                             [iP[g, i], iv[g, i]], [1.0, -start_reach],
                             LE, gen.ramp_15min * anchor_u[g] + anchor_p[g])
                # shutdown dispatch is unrestricted in real time; the
                # hourly shutdown ramp was enforced day-ahead
                m.add_constr(f"re[{gen.id},{q1}]",
                             [iP[g, i], iu[g, i], iw[g, i]],
                             [-1.0, -gen.ramp_15min, -gen.p_max],
                             LE, -anchor_p[g])
            else:
                m.add_constr(f"rj[{gen.id},{q1}]",
                             [iv[g, i], iw[g, i], iu[g, i], iu[g, i - 1]],
                             [1.0, -1.0, -1.0, 1.0], EQ, 0.0)
                m.add_constr(f"rd[{gen.id},{q1}]",
                             [iP[g, i], iP[g, i - 1], iu[g, i - 1], iv[g, i]],
                             [1.0, -1.0, -gen.ramp_15min, -start_reach], LE, 0.0)
                m.add_constr(f"re[{gen.id},{q1}]",
                             [iP[g, i - 1], iP[g, i], iu[g, i], iw[g, i]],
                             [1.0, -1.0, -gen.ramp_15min, -gen.p_max], LE, 0.0)
            m.add_constr(f"rk[{gen.id},{q1}]", [iv[g, i], iw[g, i]],
                         [1.0, 1.0], LE, 1.0)
            m.add_constr(f"rpmax[{gen.id},{q1}]",
                         [iP[g, i], iu[g, i]], [1.0, -gen.p_max], LE, 0.0)
            m.add_constr(f"rpmin[{gen.id},{q1}]",
                         [iP[g, i], iu[g, i]], [-1.0, gen.p_min], LE, 0.0)

    # network with balance slack at every bus
    at_bus = system.gens_at_bus()
    ptdf = net.ptdf
    ratings = net.ratings()
    for r, bus in enumerate(net.buses):
        for i, gq in enumerate(quarters):
            cols = ([iP[g, i] for g in at_bus[r]]
                    + [ispos[r, i], isneg[r, i], ipinj[r, i]])
            coefs = [1.0] * len(at_bus[r]) + [1.0, -1.0, -1.0]
            irf[r, i] = m.add_constr(f"rf[{bus},{gq + 1}]", cols, coefs, EQ,
                                     float(nodal_load[r, i]))
    for i, gq in enumerate(quarters):
        m.add_constr(f"rg[{gq + 1}]", list(ipinj[:, i]), [1.0] * n_buses, EQ, 0.0)
    for k in range(net.n_lines):
        col = ptdf[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        for i, gq in enumerate(quarters):
            cols = [ipinj[r, i] for r in nz]
            m.add_constr(f"rh[{k + 1},{gq + 1}]", cols, list(col[nz]),
                         LE, float(ratings[k]))
            m.add_constr(f"ri[{k + 1},{gq + 1}]", cols, list(-col[nz]),
                         LE, float(ratings[k]))

    return RTUCModel(model=m, system=system, run_hour=run_hour, quarters=quarters,
                     binding_mask=binding_mask, fixed_mask=fixed_mask,
                     nodal_load=nodal_load, da_hours=da_hours,
                     da_fs_committed=da_fs_committed, voll=voll,
                     fs_bid_multiplier=fs_bid_multiplier,
                     iP=iP, iu=iu, iv=iv, iw=iw, ipinj=ipinj,
                     ispos=ispos, isneg=isneg, irf=irf)


def run_one_process_rtuc(rtuc: RTUCModel, backend=None,
                         options: SolveOptions = None) -> RTUCRunResult:
    """Solve one run and read back schedules, violations, costs, and prices.

    After the commitment solve, the binaries are fixed and the linear
    program re-solved so the stored dispatch is exactly the point whose
    duals price the intervals.
    """
    backend = backend or get_backend()
    options = options or SolveOptions()
    res = backend.solve_milp(rtuc.model, options)
    if not res.feasible:
        raise SolveError(
            f"real-time run {rtuc.run_hour} did not solve: {res.status}: {res.message}")

    fixed = rtuc.model.copy()
    u_round = np.rint(res.x)
    for tbl in (rtuc.iu, rtuc.iv, rtuc.iw):
        for j in tbl.ravel():
            fixed.fix_var(int(j), float(u_round[j]))
    lp = backend.solve_lp_duals(fixed, options)
    x = lp.x

    def gather(tbl):
        out = np.zeros(tbl.shape)
        out.ravel()[:] = x[tbl.ravel()]
        return out

    p = gather(rtuc.iP)
    u = np.rint(gather(rtuc.iu)).astype(int)
    v = gather(rtuc.iv)
    w = gather(rtuc.iw)
    spos = gather(rtuc.ispos)
    sneg = gather(rtuc.isneg)

    n_i = rtuc.n_intervals
    gens = rtuc.system.generators
    fs = rtuc.system.fast_start_mask()
    interval_cost = np.zeros(n_i)
    for i in range(n_i):
        c = 0.0
        for g, gen in enumerate(gens):
            energy = gen.cost_energy * (rtuc.fs_bid_multiplier if fs[g] else 1.0)
            c += (INTERVAL_H * energy * p[g, i]
                  + INTERVAL_H * gen.cost_noload * u[g, i]
                  + gen.cost_startup * v[g, i]
                  + gen.cost_shutdown * w[g, i])
        interval_cost[i] = c

    lmp = np.zeros((rtuc.system.network.n_buses, n_i))
    lmp.ravel()[:] = lp.duals[rtuc.irf.ravel()] / INTERVAL_H

    violation = spos.sum(axis=0) + sneg.sum(axis=0)
    fs_rt = u[fs, :].sum(axis=0).astype(float)
    return RTUCRunResult(
        hour=rtuc.run_hour, quarters=rtuc.quarters + 1,
        binding_mask=rtuc.binding_mask.copy(),
        p=p, u=u, v=v, w=w, slack_pos=spos, slack_neg=sneg,
        violation_mw=violation, interval_cost=interval_cost, lmp=lmp,
        fs_committed_rt=fs_rt, fs_committed_da=rtuc.da_fs_committed.astype(float),
        objective=res.objective, status=res.status)


@dataclass
class DayValidationResult:
    """One scenario's stitched real-time day and its headline metrics."""

    scenario_id: int
    mode: str
    p: np.ndarray               # (G, 96) MW
    u: np.ndarray               # (G, 96)
    v: np.ndarray
    w: np.ndarray
    violation_mw: np.ndarray    # (96,) slack MW per binding interval
    slack_pos_mwh: float
    slack_neg_mwh: float
    total_violation_mwh: float
    cost_excl_penalty: float
    cost_incl_penalty: float
    fs_increase: float          # summed interval count increase vs DA
    spike_count: int
    spike_threshold: float
    voll: float
    lmp: np.ndarray = None      # (N, 96) $/MWh
    max_lmp: np.ndarray = None  # (96,)

    @property
    def n_intervals(self) -> int:
        return self.violation_mw.size

    @property
    def had_violation(self) -> bool:
        return self.total_violation_mwh > 0.0


def roll_day(system: SystemModel, da: DASolution, scenario: Scenario,
             backend=None, voll: float = DEFAULT_VOLL, *,
             fs_bid_multiplier: float = 1.0, spike_threshold: float = None,
             options: SolveOptions = None, keep_lmps: bool = True,
             mode_label: str = "") -> DayValidationResult:
    """Run the full rolling day for one scenario and stitch the bindings.

    The binding quarters of each hour's run are final the moment that run
    clears; later runs repeat them unchanged.  Costs and violations are
    accumulated over binding intervals only, in quarter order, and the
    penalty-inclusive cost is exactly the penalty-free cost plus VOLL
    times the violated energy.
    """
    backend = backend or get_backend()
    options = options or SolveOptions()
    if spike_threshold is None:
        spike_threshold = 0.5 * voll
    n_hours = da.n_hours
    n_q = 4 * n_hours
    g_n = system.n_gens
    n_buses = system.network.n_buses

    p = np.zeros((g_n, n_q))
    u = np.zeros((g_n, n_q), dtype=int)
    v = np.zeros((g_n, n_q))
    w = np.zeros((g_n, n_q))
    violation_mw = np.zeros(n_q)
    lmp = np.zeros((n_buses, n_q))

    cost_excl = 0.0
    viol_mwh = 0.0
    pos_mwh = 0.0
    neg_mwh = 0.0
    fs_increase = 0.0
    spikes = 0
    prior = None

    for hour in range(1, n_hours + 1):
        model = build_rtuc_model(hour, system, da, prior, scenario, voll,
                                 fs_bid_multiplier)
        run = run_one_process_rtuc(model, backend, options)
        sel = np.flatnonzero(run.binding_mask)
        gq = run.quarters[sel] - 1          # back to 0-based
        p[:, gq] = run.p[:, sel]
        u[:, gq] = run.u[:, sel]
        v[:, gq] = run.v[:, sel]
        w[:, gq] = run.w[:, sel]
        violation_mw[gq] = run.violation_mw[sel]
        lmp[:, gq] = run.lmp[:, sel]
        for i in sel:
            cost_excl += run.interval_cost[i]
            viol_mwh += INTERVAL_H * run.violation_mw[i]
            pos_mwh += INTERVAL_H * float(run.slack_pos[:, i].sum())
            neg_mwh += INTERVAL_H * float(run.slack_neg[:, i].sum())
            fs_increase += max(0.0, run.fs_committed_rt[i] - run.fs_committed_da[i])
            if run.lmp[:, i].max() >= spike_threshold:
                spikes += 1
        prior = PriorBindings(p=run.p[:, sel].copy(), u=run.u[:, sel].copy())
        log.info("scenario %s hour %02d: violation %.3f MW, cost %.2f $",
                 scenario.id, hour, float(run.violation_mw[sel].sum()),
                 float(run.interval_cost[sel].sum()))

    cost_incl = cost_excl + voll * viol_mwh
    return DayValidationResult(
        scenario_id=scenario.id, mode=mode_label,
        p=p, u=u, v=v, w=w, violation_mw=violation_mw,
        slack_pos_mwh=pos_mwh, slack_neg_mwh=neg_mwh,
        total_violation_mwh=viol_mwh,
        cost_excl_penalty=cost_excl, cost_incl_penalty=cost_incl,
        fs_increase=fs_increase, spike_count=spikes,
        spike_threshold=spike_threshold, voll=voll,
        lmp=lmp if keep_lmps else None,
        max_lmp=lmp.max(axis=0))


def detect_price_spikes(lmps, threshold: float) -> dict:
    """Count price-spike cases and, for two designs, their overlap.

    ``lmps`` is either one array of per-(scenario, interval) maximum nodal
    prices, or a mapping ``{design: array}`` of two or more such arrays of
    equal shape.  A case spikes when its maximum nodal price reaches
    ``threshold``.  For mappings, every design pair is broken down into
    cases where only the first spikes, only the second, or both.
    """
    if not isinstance(lmps, dict):
        arr = np.asarray(lmps, dtype=float)
        return {"threshold": threshold, "count": int((arr >= threshold).sum())}
    masks = {k: np.asarray(a, dtype=float) >= threshold for k, a in lmps.items()}
    report = {"threshold": threshold,
              "counts": {k: int(m.sum()) for k, m in masks.items()},
              "pairs": {}}
    names = list(masks)
    for a_i, a in enumerate(names):
        for b in names[a_i + 1:]:
            ma, mb = masks[a], masks[b]
            if ma.shape != mb.shape:
                raise ValidationError(
                    f"spike arrays for {a!r} and {b!r} have different shapes")
            report["pairs"][f"{a}|{b}"] = {
                "only_a": int((ma & ~mb).sum()),
                "only_b": int((mb & ~ma).sum()),
                "both": int((ma & mb).sum()),
            }
    return report
