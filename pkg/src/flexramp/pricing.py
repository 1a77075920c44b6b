"""Uniform prices for energy and ramping capability from the cleared model.

Prices come from the dual solution of the day-ahead linear program with
every commitment variable fixed at its cleared value.  All multipliers are
reported as nonnegative shadow prices of their own row (the marginal cost
of tightening that row by one MW), and the balance duals are signed so the
nodal dual is directly the locational marginal price.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .damarket import DAModel, DASolution, MODE_ENHANCED, MODE_NONE
from .errors import PricingError
from .model import EQ, GE, LE
from .solver import SolveOptions, get_backend


@dataclass
class PriceSolution:
    """Dual prices of one cleared day-ahead market, in model units ($/MW)."""

    mode: str
    lmp: np.ndarray             # (N, T) nodal energy prices
    lam: np.ndarray             # (T,) system balance dual
    f_plus: np.ndarray          # (K, T) forward line congestion
    f_minus: np.ndarray         # (K, T) reverse line congestion
    pi_up: np.ndarray           # (T,) hourly upward capability price
    pi_down: np.ndarray         # (T,)
    pi_ih_up: np.ndarray        # (T,) intra-hour upward capability price
    pi_ih_down: np.ndarray      # (T,)
    alpha_up: np.ndarray        # (G, T) capacity-headroom multiplier
    alpha_down: np.ndarray      # (G, T) floor-headroom multiplier
    beta_up: np.ndarray         # (G, T) hourly-ramp-cap multiplier
    beta_down: np.ndarray       # (G, T)
    beta_ih_up: np.ndarray      # (G, T) quarter-ramp-cap multiplier
    beta_ih_down: np.ndarray    # (G, T)
    omega_up: np.ndarray        # (G, T) nesting multiplier
    omega_down: np.ndarray      # (G, T)
    gamma_up: np.ndarray        # (G, T) downward inter-hour ramp dual
    gamma_down: np.ndarray      # (G, T) upward inter-hour ramp dual
    objective: float = 0.0
    degenerate: bool = False
    x: np.ndarray = None
    reduced_costs: np.ndarray = None
    duals: np.ndarray = None    # raw duals in model row order

    @property
    def n_hours(self) -> int:
        return self.lam.shape[0]


def fix_and_price(da: DAModel, sol: DASolution, options: SolveOptions = None,
                  backend=None) -> PriceSolution:
    """Fix the cleared commitment and read prices off the linear program."""
    options = options or SolveOptions()
    backend = backend or get_backend()
    fixed = da.model.copy()
    for g in range(da.n_gens):
        for t in range(da.n_hours):
            fixed.fix_var(da.iu[g, t], float(sol.u[g, t]))
    lp = backend.solve_lp_duals(fixed, options)
    return _extract_prices(da, lp)


def _extract_prices(da: DAModel, lp) -> PriceSolution:
    g_n, t_n = da.n_gens, da.n_hours
    net = da.system.network
    n, k_n = net.n_buses, net.n_lines
    gen_row = {gen.id: g for g, gen in enumerate(da.system.generators)}
    bus_row = {str(b): r for b, r in net.bus_index.items()}

    lmp = np.zeros((n, t_n))
    lam = np.zeros(t_n)
    f_plus = np.zeros((k_n, t_n))
    f_minus = np.zeros((k_n, t_n))
    series = {nm: np.zeros(t_n) for nm in ("1t", "1u", "2e", "2l")}
    tables = {nm: np.zeros((g_n, t_n))
              for nm in ("1p", "1q", "1r", "1s", "2f", "2g", "2m", "2n", "1d", "1e")}

    for i, name in enumerate(lp.con_names):
        cut = name.find("[")
        if cut < 0:
            continue
        tag = name[:cut]
        args = name[cut + 1:-1].split(",")
        d = lp.duals[i]
        if tag == "1f":
            lmp[bus_row[args[0]], int(args[1]) - 1] = d
        elif tag == "1g":
            lam[int(args[0]) - 1] = d
        elif tag == "1h":
            f_plus[int(args[0]) - 1, int(args[1]) - 1] = d
        elif tag == "1i":
            f_minus[int(args[0]) - 1, int(args[1]) - 1] = d
        elif tag in series:
            series[tag][int(args[0]) - 1] = d
        elif tag in tables:
            tables[tag][gen_row[args[0]], int(args[1]) - 1] = d

    return PriceSolution(
        mode=da.mode, lmp=lmp, lam=lam, f_plus=f_plus, f_minus=f_minus,
        pi_up=series["1t"], pi_down=series["1u"],
        pi_ih_up=series["2e"], pi_ih_down=series["2l"],
        alpha_up=tables["1p"], alpha_down=tables["1q"],
        beta_up=tables["1r"], beta_down=tables["1s"],
        beta_ih_up=tables["2f"], beta_ih_down=tables["2m"],
        omega_up=tables["2g"], omega_down=tables["2n"],
        gamma_up=tables["1e"], gamma_down=tables["1d"],
        objective=lp.objective, degenerate=lp.degenerate,
        x=lp.x, reduced_costs=lp.reduced_costs, duals=lp.duals)


def compute_lmps(da: DAModel, sol: DASolution, options: SolveOptions = None,
                 backend=None) -> np.ndarray:
    """Locational marginal prices, (n_buses, T)."""
    return fix_and_price(da, sol, options, backend).lmp


def lmp_decomposition_residual(da: DAModel, prices: PriceSolution) -> float:
    """Largest gap between nodal prices and their system + congestion parts.

    Every nodal price should equal the system dual minus the sensitivity-
    weighted congestion duals of the lines it loads.
    """
    spread = prices.f_plus - prices.f_minus            # (K, T)
    rebuilt = prices.lam[None, :] - da.system.network.ptdf @ spread
    return float(np.abs(prices.lmp - rebuilt).max())


# -- payments ------------------------------------------------------------------

def frp_up_payment(sol: DASolution, prices: PriceSolution) -> tuple:
    """Hourly and total payments for upward capability.

    Each committed megawatt earns the hourly price, and each intra-hour
    megawatt additionally earns the intra-hour price.  Returns
    ``(per_hour, total)`` accumulated hour by hour.
    """
    per_hour = np.zeros(sol.n_hours)
    total = 0.0
    for t in range(sol.n_hours):
        pay = 0.0
        for g in range(sol.n_gens):
            pay += prices.pi_up[t] * sol.ur[g, t]
            pay += prices.pi_ih_up[t] * sol.ur_ih[g, t]
        per_hour[t] = pay
        total += pay
    return per_hour, total


def frp_down_payment(sol: DASolution, prices: PriceSolution) -> tuple:
    """Hourly and total payments for downward capability."""
    per_hour = np.zeros(sol.n_hours)
    total = 0.0
    for t in range(sol.n_hours):
        pay = 0.0
        for g in range(sol.n_gens):
            pay += prices.pi_down[t] * sol.dr[g, t]
            pay += prices.pi_ih_down[t] * sol.dr_ih[g, t]
        per_hour[t] = pay
        total += pay
    return per_hour, total


# -- identity verification -------------------------------------------------------

def verify_pricing_identities(da: DAModel, sol: DASolution, prices: PriceSolution,
                              tol: float = 1e-6) -> dict:
    """Check the dual solution against the structural price identities.

    Returns ``{check: worst residual}``.  The checks:

    * ``capability_up`` / ``capability_down`` -- for every unit-hour the
      capability prices cannot exceed the unit's own binding multipliers:
      ``pi_up + omega_up <= alpha_up + beta_up`` and
      ``pi_ih_up <= beta_ih_up + omega_up`` (mirrored downward).
    * ``value_split_up`` / ``value_split_down`` -- awarded capability is
      paid exactly its marginal value: per unit-hour,
      ``pi_up*ur + pi_ih_up*ur_ih == alpha_up*ur + beta_up*ur + beta_ih_up*ur_ih``.
    * ``stationarity`` -- generic column check: objective coefficient plus
      signed dual weights equals the reported reduced cost, every column.
    * ``lmp_split`` -- nodal price decomposition residual.

    Residuals at or below ``tol`` (scaled by price magnitude for the value
    split) mean the dual solution is internally consistent.
    """
    if da.mode == MODE_NONE:
        rep = {"stationarity": stationarity_residual(da, prices),
               "lmp_split": lmp_decomposition_residual(da, prices)}
        rep["ok"] = all(v <= tol * 10 for k, v in rep.items() if k != "ok")
        return rep

    t_n = sol.n_hours
    cap_up = (prices.pi_up[None, :] + prices.omega_up
              - prices.alpha_up - prices.beta_up)
    cap_dn = (prices.pi_down[None, :] + prices.omega_down
              - prices.alpha_down - prices.beta_down)
    rep = {
        "capability_up": float(cap_up.max(initial=0.0)),
        "capability_down": float(cap_dn.max(initial=0.0)),
    }
    if da.mode == MODE_ENHANCED:
        ih_up = prices.pi_ih_up[None, :] - prices.beta_ih_up - prices.omega_up
        ih_dn = prices.pi_ih_down[None, :] - prices.beta_ih_down - prices.omega_down
        rep["capability_ih_up"] = float(ih_up.max(initial=0.0))
        rep["capability_ih_down"] = float(ih_dn.max(initial=0.0))

    paid_up = prices.pi_up[None, :] * sol.ur + prices.pi_ih_up[None, :] * sol.ur_ih
    value_up = ((prices.alpha_up + prices.beta_up) * sol.ur
                + prices.beta_ih_up * sol.ur_ih)
    paid_dn = prices.pi_down[None, :] * sol.dr + prices.pi_ih_down[None, :] * sol.dr_ih
    value_dn = ((prices.alpha_down + prices.beta_down) * sol.dr
                + prices.beta_ih_down * sol.dr_ih)
    scale = max(1.0, float(np.abs(paid_up).max(initial=0.0)),
                float(np.abs(paid_dn).max(initial=0.0)))
    rep["value_split_up"] = float(np.abs(paid_up - value_up).max()) / scale
    rep["value_split_down"] = float(np.abs(paid_dn - value_dn).max()) / scale

    rep["stationarity"] = stationarity_residual(da, prices)
    rep["lmp_split"] = lmp_decomposition_residual(da, prices)
    rep["ok"] = all(v <= tol * 10 for k, v in rep.items() if k != "ok")
    return rep


def stationarity_residual(da: DAModel, prices: PriceSolution) -> float:
    """Worst column residual of the dual solution over all non-fixed columns.

    For each column, the objective coefficient plus the signed sum of row
    duals must equal the reduced cost reported by the solver.  Commitment
    columns are skipped -- they were fixed for pricing, so their "reduced
    cost" absorbs the whole commitment opportunity value.
    """
    if prices.duals is None or prices.reduced_costs is None:
        raise PricingError("price solution carries no raw duals to verify")
    arrays = da.model.to_arrays()
    sign = np.zeros(len(da.model.con_names))
    for i, sense in enumerate(arrays.senses):
        sign[i] = 1.0 if sense == LE else -1.0   # GE and EQ rows enter negatively
    weighted = arrays.a.T @ (sign * prices.duals)
    resid = arrays.obj + weighted - prices.reduced_costs
    skip = np.zeros(len(arrays.obj), dtype=bool)
    skip[da.iu.ravel()] = True
    return float(np.abs(resid[~skip]).max(initial=0.0))


# -- settlements -----------------------------------------------------------------

@dataclass
class Settlement:
    """Market cash flows for one cleared day."""

    gen_ids: list
    energy_revenue: np.ndarray      # (G,) lmp-weighted production income
    frp_up_revenue: np.ndarray      # (G,)
    frp_down_revenue: np.ndarray    # (G,)
    cost: np.ndarray                # (G,) as-bid production cost
    profit: np.ndarray              # (G,)
    load_payment: float
    congestion_rent: float
    frp_up_total: float
    frp_down_total: float

    @property
    def total_revenue(self) -> np.ndarray:
        return self.energy_revenue + self.frp_up_revenue + self.frp_down_revenue


def compute_settlements(da: DAModel, sol: DASolution, prices: PriceSolution) -> Settlement:
    """Settle every generator and the load at the cleared prices."""
    gens = da.system.generators
    rows = da.system.gen_bus_rows()
    g_n, t_n = da.n_gens, da.n_hours

    energy = np.zeros(g_n)
    up_rev = np.zeros(g_n)
    dn_rev = np.zeros(g_n)
    cost = np.zeros(g_n)
    for g, gen in enumerate(gens):
        node_price = prices.lmp[rows[g], :]
        for t in range(t_n):
            energy[g] += node_price[t] * sol.p[g, t]
            up_rev[g] += (prices.pi_up[t] * sol.ur[g, t]
                          + prices.pi_ih_up[t] * sol.ur_ih[g, t])
            dn_rev[g] += (prices.pi_down[t] * sol.dr[g, t]
                          + prices.pi_ih_down[t] * sol.dr_ih[g, t])
            cost[g] += (gen.cost_energy * sol.p[g, t] + gen.cost_noload * sol.u[g, t]
                        + gen.cost_startup * sol.v[g, t] + gen.cost_shutdown * sol.w[g, t])

    load_payment = float((prices.lmp * da.nodal_load).sum())
    congestion_rent = load_payment - float(energy.sum())
    return Settlement(
        gen_ids=[gen.id for gen in gens],
        energy_revenue=energy, frp_up_revenue=up_rev, frp_down_revenue=dn_rev,
        cost=cost, profit=energy + up_rev + dn_rev - cost,
        load_payment=load_payment, congestion_rent=congestion_rent,
        frp_up_total=float(up_rev.sum()), frp_down_total=float(dn_rev.sum()))
