"""Day-ahead hourly unit-commitment market with ramping-capability products.

Three product designs share one model builder:

* ``none``     -- energy-only commitment, no ramping product.
* ``general``  -- hourly upward/downward ramping capability, procured
                  against hour-to-hour requirements.
* ``enhanced`` -- additionally procures fifteen-minute ramping capability
                  inside each hour, nested under the hourly award.

Constraint rows carry stable short tags (``1d[G7,13]``) used for dual
lookup, violation reports, and exported diagnostics.  The tag is the
family; the bracket holds the generator id, bus id, or line position, and
the one-based hour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError, ModelBuildError, SolveError, ValidationError
from .model import EQ, GE, LE, LinearModel
from .requirements import RampRequirements
from .solver import SolveOptions, get_backend
from .system import SystemModel

MODE_NONE = "none"
MODE_GENERAL = "general"
MODE_ENHANCED = "enhanced"
MODES = (MODE_NONE, MODE_GENERAL, MODE_ENHANCED)

DEFAULT_FRP_PENALTY = 10000.0   # $/MW of unmet ramping requirement


@dataclass
class DAModel:
    """A built day-ahead model plus the index maps needed to read it back."""

    model: LinearModel
    system: SystemModel
    mode: str
    n_hours: int
    nodal_load: np.ndarray              # (n_buses, T)
    requirements: RampRequirements = None
    soften_frp: bool = False
    # variable-index tables, -1 where the mode has no such variable
    iP: np.ndarray = None               # (G, T)
    iu: np.ndarray = None
    iv: np.ndarray = None
    iw: np.ndarray = None
    iur: np.ndarray = None
    idr: np.ndarray = None
    iur_ih: np.ndarray = None
    idr_ih: np.ndarray = None
    ipinj: np.ndarray = None            # (N, T)

    @property
    def n_gens(self) -> int:
        return self.system.n_gens

    def gather(self, index_table: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Values of one variable family, zeros where the family is absent."""
        if index_table is None:
            return np.zeros((self.n_gens, self.n_hours))
        out = np.zeros(index_table.shape)
        mask = index_table >= 0
        out[mask] = x[index_table[mask]]
        return out


@dataclass
class DASolution:
    """Cleared day-ahead schedule.

    The continuous part is the optimum of the commitment-fixed linear
    program, so it agrees with the reported objective to solver tolerance
    and supports exact dual analysis downstream.
    """

    mode: str
    p: np.ndarray               # (G, T) MW
    u: np.ndarray               # (G, T) 0/1 ints
    v: np.ndarray               # (G, T) startup indicators
    w: np.ndarray               # (G, T) shutdown indicators
    ur: np.ndarray              # (G, T) hourly upward capability
    dr: np.ndarray              # (G, T) hourly downward capability
    ur_ih: np.ndarray           # (G, T) intra-hour upward capability
    dr_ih: np.ndarray           # (G, T) intra-hour downward capability
    p_inj: np.ndarray           # (N, T) net bus injections
    flows: np.ndarray           # (K, T) line flows, from->to positive
    objective: float            # commitment-fixed LP optimum
    milp_objective: float
    mip_gap: float
    status: str
    x: np.ndarray = None        # full variable vector in model order
    frp_shortfall: dict = field(default_factory=dict)

    @property
    def n_hours(self) -> int:
        return self.p.shape[1]

    @property
    def n_gens(self) -> int:
        return self.p.shape[0]


def _mode_check(mode: str) -> None:
    if mode not in MODES:
        raise ValidationError(f"unknown market mode {mode!r}; expected one of {MODES}")


def initial_commit_bounds(gen) -> tuple:
    """(hours forced on, hours forced off) carried in from the initial state."""
    if gen.initial_on:
        return max(0, gen.min_up - gen.initial_hours), 0
    return 0, max(0, gen.min_down - gen.initial_hours)


def build_da_model(system: SystemModel, nodal_load: np.ndarray, mode: str = MODE_ENHANCED,
                   requirements: RampRequirements = None, soften_frp: bool = False,
                   frp_penalty: float = DEFAULT_FRP_PENALTY) -> DAModel:
    """Assemble the day-ahead commitment model for one product design.

    ``nodal_load`` is (n_buses, T) MW.  ``requirements`` is mandatory for
    the ``general`` and ``enhanced`` designs.  With ``soften_frp`` the
    requirement rows get shortfall variables priced at ``frp_penalty`` so
    an under-built fleet yields a priced shortage instead of an
    infeasibility.
    """
    _mode_check(mode)
    nodal_load = np.asarray(nodal_load, dtype=float)
    n = system.network.n_buses
    if nodal_load.ndim != 2 or nodal_load.shape[0] != n:
        raise ModelBuildError(
            f"nodal_load must be (n_buses, T); got {nodal_load.shape} for {n} buses")
    t_hours = nodal_load.shape[1]
    if mode != MODE_NONE:
        if requirements is None:
            raise ModelBuildError(f"mode {mode!r} needs ramping requirements")
        if requirements.n_hours != t_hours:
            raise ModelBuildError(
                f"requirements cover {requirements.n_hours} hours, load covers {t_hours}")

    gens = system.generators
    g_n = len(gens)
    m = LinearModel(name=f"da-{mode}")

    with_frp = mode != MODE_NONE
    enhanced = mode == MODE_ENHANCED

    iP = np.full((g_n, t_hours), -1, dtype=int)
    iu = np.full((g_n, t_hours), -1, dtype=int)
    iv = np.full((g_n, t_hours), -1, dtype=int)
    iw = np.full((g_n, t_hours), -1, dtype=int)
    iur = np.full((g_n, t_hours), -1, dtype=int) if with_frp else None
    idr = np.full((g_n, t_hours), -1, dtype=int) if with_frp else None
    iur_ih = np.full((g_n, t_hours), -1, dtype=int) if enhanced else None
    idr_ih = np.full((g_n, t_hours), -1, dtype=int) if enhanced else None
    ipinj = np.full((n, t_hours), -1, dtype=int)

    for g, gen in enumerate(gens):
        on_hours, off_hours = initial_commit_bounds(gen)
        for t in range(t_hours):
            ht = t + 1
            iP[g, t] = m.add_var(f"P[{gen.id},{ht}]", lb=0.0, obj=gen.cost_energy)
            lb_u, ub_u = 0.0, 1.0
            if t < on_hours:
                lb_u = 1.0
            if t < off_hours:
                ub_u = 0.0
            iu[g, t] = m.add_var(f"u[{gen.id},{ht}]", lb=lb_u, ub=ub_u,
                                 integer=True, obj=gen.cost_noload)
            iv[g, t] = m.add_var(f"v[{gen.id},{ht}]", lb=0.0, ub=1.0, obj=gen.cost_startup)
            iw[g, t] = m.add_var(f"w[{gen.id},{ht}]", lb=0.0, ub=1.0, obj=gen.cost_shutdown)
            if with_frp:
                iur[g, t] = m.add_var(f"ur[{gen.id},{ht}]", lb=0.0)
                idr[g, t] = m.add_var(f"dr[{gen.id},{ht}]", lb=0.0)
            if enhanced:
                iur_ih[g, t] = m.add_var(f"urih[{gen.id},{ht}]", lb=0.0)
                idr_ih[g, t] = m.add_var(f"drih[{gen.id},{ht}]", lb=0.0)

    for row, bus in enumerate(system.network.buses):
        for t in range(t_hours):
            ipinj[row, t] = m.add_var(f"pinj[{bus},{t + 1}]", lb=-np.inf, ub=np.inf)

    # -- commitment logic and minimum up/down times --------------------------
    for g, gen in enumerate(gens):
        u_init = 1.0 if gen.initial_on else 0.0
        up_win = max(1, gen.min_up)
        dn_win = max(1, gen.min_down)
        for t in range(t_hours):
            ht = t + 1
            if t == 0:
                m.add_constr(f"1j[{gen.id},{ht}]",
                             [iv[g, t], iw[g, t], iu[g, t]], [1.0, -1.0, -1.0],
                             EQ, -u_init)
            else:
                m.add_constr(f"1j[{gen.id},{ht}]",
                             [iv[g, t], iw[g, t], iu[g, t], iu[g, t - 1]],
                             [1.0, -1.0, -1.0, 1.0], EQ, 0.0)
            m.add_constr(f"1k[{gen.id},{ht}]", [iv[g, t], iw[g, t]], [1.0, 1.0], LE, 1.0)

            lo = max(0, t - up_win + 1)
            cols = [iv[g, s] for s in range(lo, t + 1)] + [iu[g, t]]
            m.add_constr(f"1b[{gen.id},{ht}]", cols,
                         [1.0] * (t + 1 - lo) + [-1.0], LE, 0.0)
            lo = max(0, t - dn_win + 1)
            cols = [iw[g, s] for s in range(lo, t + 1)] + [iu[g, t]]
            m.add_constr(f"1c[{gen.id},{ht}]", cols,
                         [1.0] * (t + 1 - lo) + [1.0], LE, 1.0)

    # -- hourly ramping -------------------------------------------------------
    for g, gen in enumerate(gens):
        u_init = 1.0 if gen.initial_on else 0.0
        p_init = gen.initial_output
        for t in range(t_hours):
            ht = t + 1
            if t == 0:
                m.add_constr(f"1d[{gen.id},{ht}]",
                             [iP[g, t], iv[g, t]], [1.0, -gen.ramp_startup],
                             LE, gen.ramp_hourly * u_init + p_init)
                m.add_constr(f"1e[{gen.id},{ht}]",
                             [iP[g, t], iu[g, t], iw[g, t]],
                             [-1.0, -gen.ramp_hourly, -gen.ramp_shutdown],
                             LE, -p_init)
            else:
                m.add_constr(f"1d[{gen.id},{ht}]",
                             [iP[g, t], iP[g, t - 1], iu[g, t - 1], iv[g, t]],
                             [1.0, -1.0, -gen.ramp_hourly, -gen.ramp_startup],
                             LE, 0.0)
                m.add_constr(f"1e[{gen.id},{ht}]",
                             [iP[g, t - 1], iP[g, t], iu[g, t], iw[g, t]],
                             [1.0, -1.0, -gen.ramp_hourly, -gen.ramp_shutdown],
                             LE, 0.0)

    # -- capacity coupling (and the ramp-capability headroom) -----------------
    for g, gen in enumerate(gens):
        for t in range(t_hours):
            ht = t + 1
            if with_frp:
                m.add_constr(f"1p[{gen.id},{ht}]",
                             [iP[g, t], iur[g, t], iu[g, t]], [1.0, 1.0, -gen.p_max],
                             LE, 0.0)
                m.add_constr(f"1q[{gen.id},{ht}]",
                             [iP[g, t], idr[g, t], iu[g, t]], [1.0, -1.0, -gen.p_min],
                             GE, 0.0)
                m.add_constr(f"1r[{gen.id},{ht}]",
                             [iur[g, t], iu[g, t]], [1.0, -gen.ramp_hourly], LE, 0.0)
                m.add_constr(f"1s[{gen.id},{ht}]",
                             [idr[g, t], iu[g, t]], [1.0, -gen.ramp_hourly], LE, 0.0)
            else:
                m.add_constr(f"pmax[{gen.id},{ht}]",
                             [iP[g, t], iu[g, t]], [1.0, -gen.p_max], LE, 0.0)
                m.add_constr(f"pmin[{gen.id},{ht}]",
                             [iP[g, t], iu[g, t]], [1.0, -gen.p_min], GE, 0.0)
            if enhanced:
                m.add_constr(f"2f[{gen.id},{ht}]",
                             [iur_ih[g, t], iu[g, t]], [1.0, -gen.ramp_15min], LE, 0.0)
                m.add_constr(f"2g[{gen.id},{ht}]",
                             [iur_ih[g, t], iur[g, t]], [1.0, -1.0], LE, 0.0)
                m.add_constr(f"2m[{gen.id},{ht}]",
                             [idr_ih[g, t], iu[g, t]], [1.0, -gen.ramp_15min], LE, 0.0)
                m.add_constr(f"2n[{gen.id},{ht}]",
                             [idr_ih[g, t], idr[g, t]], [1.0, -1.0], LE, 0.0)

    # -- network --------------------------------------------------------------
    at_bus = system.gens_at_bus()
    ptdf = system.network.ptdf
    ratings = system.network.ratings()
    for row, bus in enumerate(system.network.buses):
        for t in range(t_hours):
            cols = [iP[g, t] for g in at_bus[row]] + [ipinj[row, t]]
            m.add_constr(f"1f[{bus},{t + 1}]", cols,
                         [1.0] * len(at_bus[row]) + [-1.0], EQ,
                         float(nodal_load[row, t]))
    for t in range(t_hours):
        m.add_constr(f"1g[{t + 1}]", list(ipinj[:, t]), [1.0] * n, EQ, 0.0)
    for k in range(system.network.n_lines):
        col_ptdf = ptdf[:, k]
        nz = np.flatnonzero(np.abs(col_ptdf) > 1e-12)
        for t in range(t_hours):
            cols = [ipinj[r, t] for r in nz]
            m.add_constr(f"1h[{k + 1},{t + 1}]", cols, list(col_ptdf[nz]),
                         LE, float(ratings[k]))
            m.add_constr(f"1i[{k + 1},{t + 1}]", cols, list(-col_ptdf[nz]),
                         LE, float(ratings[k]))

    # -- ramping-capability requirements --------------------------------------
    if with_frp:
        for t in range(t_hours):
            ht = t + 1
            up_cols, dn_cols = list(iur[:, t]), list(idr[:, t])
            up_coefs, dn_coefs = [1.0] * g_n, [1.0] * g_n
            if soften_frp:
                s_up = m.add_var(f"sFRup[{ht}]", lb=0.0, obj=frp_penalty)
                s_dn = m.add_var(f"sFRdn[{ht}]", lb=0.0, obj=frp_penalty)
                up_cols.append(s_up)
                up_coefs.append(1.0)
                dn_cols.append(s_dn)
                dn_coefs.append(1.0)
            m.add_constr(f"1t[{ht}]", up_cols, up_coefs, GE,
                         float(requirements.hourly_up[t]))
            m.add_constr(f"1u[{ht}]", dn_cols, dn_coefs, GE,
                         float(requirements.hourly_down[t]))
    if enhanced:
        for t in range(t_hours):
            ht = t + 1
            up_cols, dn_cols = list(iur_ih[:, t]), list(idr_ih[:, t])
            up_coefs, dn_coefs = [1.0] * g_n, [1.0] * g_n
            if soften_frp:
                s_up = m.add_var(f"sIHup[{ht}]", lb=0.0, obj=frp_penalty)
                s_dn = m.add_var(f"sIHdn[{ht}]", lb=0.0, obj=frp_penalty)
                up_cols.append(s_up)
                up_coefs.append(1.0)
                dn_cols.append(s_dn)
                dn_coefs.append(1.0)
            m.add_constr(f"2e[{ht}]", up_cols, up_coefs, GE,
                         float(requirements.intra_up[t]))
            m.add_constr(f"2l[{ht}]", dn_cols, dn_coefs, GE,
                         float(requirements.intra_down[t]))

    return DAModel(model=m, system=system, mode=mode, n_hours=t_hours,
                   nodal_load=nodal_load, requirements=requirements,
                   soften_frp=soften_frp, iP=iP, iu=iu, iv=iv, iw=iw,
                   iur=iur, idr=idr, iur_ih=iur_ih, idr_ih=idr_ih, ipinj=ipinj)


def solve_da(da: DAModel, options: SolveOptions = None, backend=None) -> DASolution:
    """Clear the day-ahead market.

    Runs the commitment MILP, then re-optimizes the continuous variables
    with the commitment fixed so the returned schedule is the exact linear
    optimum for its commitment -- the same point later priced by the
    commitment-fixed dual solve.
    """
    options = options or SolveOptions()
    backend = backend or get_backend()
    res = backend.solve_milp(da.model, options)
    if res.status == "infeasible":
        raise InfeasibleError(f"day-ahead model ({da.mode}) is infeasible: {res.message}")
    if not res.feasible:
        raise SolveError(f"day-ahead solve failed: {res.status}: {res.message}")

    u_fix = np.zeros(len(da.model.var_names), dtype=bool)
    u_round = np.rint(res.x)
    fixed = da.model.copy()
    for g in range(da.n_gens):
        for t in range(da.n_hours):
            j = da.iu[g, t]
            fixed.fix_var(j, float(u_round[j]))
            u_fix[j] = True
    lp = backend.solve_lp_duals(fixed, options)
    return _extract_solution(da, lp.x, milp_objective=res.objective,
                             lp_objective=lp.objective, mip_gap=res.mip_gap,
                             status=res.status)


def _extract_solution(da: DAModel, x: np.ndarray, milp_objective: float,
                      lp_objective: float, mip_gap: float, status: str) -> DASolution:
    p = da.gather(da.iP, x)
    u = np.rint(da.gather(da.iu, x)).astype(int)
    pinj = da.gather(da.ipinj, x)
    flows = da.system.network.ptdf.T @ pinj
    shortfall = {}
    if da.soften_frp:
        for name in da.model.var_names:
            if name.startswith(("sFRup", "sFRdn", "sIHup", "sIHdn")):
                val = float(x[da.model.var_index(name)])
                if val > 1e-9:
                    shortfall[name] = val
    return DASolution(
        mode=da.mode, p=p, u=u,
        v=da.gather(da.iv, x), w=da.gather(da.iw, x),
        ur=da.gather(da.iur, x), dr=da.gather(da.idr, x),
        ur_ih=da.gather(da.iur_ih, x), dr_ih=da.gather(da.idr_ih, x),
        p_inj=pinj, flows=flows,
        objective=lp_objective, milp_objective=milp_objective,
        mip_gap=mip_gap, status=status, x=x, frp_shortfall=shortfall)


def production_cost(system: SystemModel, sol: DASolution) -> dict:
    """Cost breakdown of a schedule, accumulated generator-by-generator."""
    energy = noload = startup = shutdown = 0.0
    for g, gen in enumerate(system.generators):
        for t in range(sol.n_hours):
            energy += gen.cost_energy * sol.p[g, t]
            noload += gen.cost_noload * sol.u[g, t]
            startup += gen.cost_startup * sol.v[g, t]
            shutdown += gen.cost_shutdown * sol.w[g, t]
    total = energy + noload + startup + shutdown
    return {"energy": energy, "noload": noload, "startup": startup,
            "shutdown": shutdown, "total": total}


# -- independent feasibility audit --------------------------------------------

def check_solution(da: DAModel, sol: DASolution, tol: float = 1e-6) -> dict:
    """Audit a schedule against the market rules, straight from the data.

    Recomputes every constraint family from the system records, loads, and
    requirement series -- not from the built coefficient matrix -- and
    returns ``{tag: violation}`` for rows violated by more than ``tol``
    (violation is how far the row is outside its bound, in MW or MWh).
    An empty dict means the schedule is feasible.
    """
    bad = {}

    def flag(tag, amount):
        if amount > tol:
            bad[tag] = float(amount)

    gens = da.system.generators
    t_hours = da.n_hours
    with_frp = da.mode != MODE_NONE
    enhanced = da.mode == MODE_ENHANCED

    for g, gen in enumerate(gens):
        u_init = 1.0 if gen.initial_on else 0.0
        p_init = gen.initial_output
        up_win = max(1, gen.min_up)
        dn_win = max(1, gen.min_down)
        for t in range(t_hours):
            ht = t + 1
            p, u = sol.p[g, t], float(sol.u[g, t])
            v, w = sol.v[g, t], sol.w[g, t]
            flag(f"int[u[{gen.id},{ht}]]", abs(u - round(u)))
            for nm, val in (("P", p), ("v", v), ("w", w)):
                flag(f"bound[{nm}[{gen.id},{ht}]]", -val)
            flag(f"bound[v[{gen.id},{ht}]]", v - 1.0)
            flag(f"bound[w[{gen.id},{ht}]]", w - 1.0)

            u_prev = float(sol.u[g, t - 1]) if t else u_init
            p_prev = sol.p[g, t - 1] if t else p_init
            flag(f"1j[{gen.id},{ht}]", abs((v - w) - (u - u_prev)))
            flag(f"1k[{gen.id},{ht}]", v + w - 1.0)
            lo = max(0, t - up_win + 1)
            flag(f"1b[{gen.id},{ht}]", float(sol.v[g, lo:t + 1].sum()) - u)
            lo = max(0, t - dn_win + 1)
            flag(f"1c[{gen.id},{ht}]", float(sol.w[g, lo:t + 1].sum()) - (1.0 - u))

            flag(f"1d[{gen.id},{ht}]",
                 (p - p_prev) - (gen.ramp_hourly * u_prev + gen.ramp_startup * v))
            flag(f"1e[{gen.id},{ht}]",
                 (p_prev - p) - (gen.ramp_hourly * u + gen.ramp_shutdown * w))

            if with_frp:
                ur, dr = sol.ur[g, t], sol.dr[g, t]
                flag(f"bound[ur[{gen.id},{ht}]]", -ur)
                flag(f"bound[dr[{gen.id},{ht}]]", -dr)
                flag(f"1p[{gen.id},{ht}]", p + ur - gen.p_max * u)
                flag(f"1q[{gen.id},{ht}]", gen.p_min * u - (p - dr))
                flag(f"1r[{gen.id},{ht}]", ur - gen.ramp_hourly * u)
                flag(f"1s[{gen.id},{ht}]", dr - gen.ramp_hourly * u)
            else:
                flag(f"pmax[{gen.id},{ht}]", p - gen.p_max * u)
                flag(f"pmin[{gen.id},{ht}]", gen.p_min * u - p)
            if enhanced:
                ur_ih, dr_ih = sol.ur_ih[g, t], sol.dr_ih[g, t]
                flag(f"bound[urih[{gen.id},{ht}]]", -ur_ih)
                flag(f"bound[drih[{gen.id},{ht}]]", -dr_ih)
                flag(f"2f[{gen.id},{ht}]", ur_ih - gen.ramp_15min * u)
                flag(f"2g[{gen.id},{ht}]", ur_ih - sol.ur[g, t])
                flag(f"2m[{gen.id},{ht}]", dr_ih - gen.ramp_15min * u)
                flag(f"2n[{gen.id},{ht}]", dr_ih - sol.dr[g, t])

        on_hours, off_hours = initial_commit_bounds(gen)
        for t in range(min(on_hours, t_hours)):
            flag(f"init_on[{gen.id},{t + 1}]", 1.0 - float(sol.u[g, t]))
        for t in range(min(off_hours, t_hours)):
            flag(f"init_off[{gen.id},{t + 1}]", float(sol.u[g, t]))

    net = da.system.network
    at_bus = da.system.gens_at_bus()
    for row, bus in enumerate(net.buses):
        for t in range(t_hours):
            gen_mw = sum(sol.p[g, t] for g in at_bus[row])
            flag(f"1f[{bus},{t + 1}]",
                 abs(gen_mw - sol.p_inj[row, t] - da.nodal_load[row, t]))
    for t in range(t_hours):
        flag(f"1g[{t + 1}]", abs(float(sol.p_inj[:, t].sum())))
    flows = net.ptdf.T @ sol.p_inj
    ratings = net.ratings()
    for k in range(net.n_lines):
        for t in range(t_hours):
            flag(f"1h[{k + 1},{t + 1}]", flows[k, t] - ratings[k])
            flag(f"1i[{k + 1},{t + 1}]", -flows[k, t] - ratings[k])

    if with_frp:
        req = da.requirements
        slack_up = slack_dn = np.zeros(t_hours)
        if da.soften_frp:
            slack_up = np.array([sol.frp_shortfall.get(f"sFRup[{t + 1}]", 0.0)
                                 for t in range(t_hours)])
            slack_dn = np.array([sol.frp_shortfall.get(f"sFRdn[{t + 1}]", 0.0)
                                 for t in range(t_hours)])
        for t in range(t_hours):
            flag(f"1t[{t + 1}]", req.hourly_up[t] - (sol.ur[:, t].sum() + slack_up[t]))
            flag(f"1u[{t + 1}]", req.hourly_down[t] - (sol.dr[:, t].sum() + slack_dn[t]))
    if enhanced:
        req = da.requirements
        slack_up = slack_dn = np.zeros(t_hours)
        if da.soften_frp:
            slack_up = np.array([sol.frp_shortfall.get(f"sIHup[{t + 1}]", 0.0)
                                 for t in range(t_hours)])
            slack_dn = np.array([sol.frp_shortfall.get(f"sIHdn[{t + 1}]", 0.0)
                                 for t in range(t_hours)])
        for t in range(t_hours):
            flag(f"2e[{t + 1}]", req.intra_up[t] - (sol.ur_ih[:, t].sum() + slack_up[t]))
            flag(f"2l[{t + 1}]", req.intra_down[t] - (sol.dr_ih[:, t].sum() + slack_dn[t]))

    return bad


def max_violation(report: dict) -> float:
    return max(report.values(), default=0.0)
