import numpy as np
import pytest

from flexramp.damarket import (MODE_ENHANCED, MODE_GENERAL, MODE_NONE,
                               build_da_model, solve_da)
from flexramp.evaluate import clear_da_for_mode
from flexramp.fixtures import (random_small_profile, random_small_system,
                               two_bus_system)
from flexramp.pricing import (compute_settlements, fix_and_price,
                              frp_down_payment, frp_up_payment,
                              lmp_decomposition_residual,
                              verify_pricing_identities)
from flexramp.requirements import NetLoadProfile
from flexramp.solver import SolveOptions
from flexramp.system import Generator, NetworkModel, SystemModel, nodal_loads

TIGHT = SolveOptions(mip_gap=1e-9, time_limit=120)
LOOSE = SolveOptions(mip_gap=1e-3, time_limit=120)


def one_bus(gens):
    net = NetworkModel(buses=[1], lines=[], slack_bus=1)
    return SystemModel(generators=gens, network=net,
                       load_shares=np.array([1.0]))


def test_marginal_unit_sets_uniform_price():
    gens = [
        Generator(id="base", bus=1, cost_energy=10.0, cost_noload=0.0,
                  cost_startup=0.0, cost_shutdown=0.0, p_min=0.0, p_max=100.0,
                  ramp_hourly=100.0, ramp_15min=25.0, ramp_startup=100.0,
                  ramp_shutdown=100.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=90.0, initial_hours=4),
        Generator(id="mid", bus=1, cost_energy=30.0, cost_noload=0.0,
                  cost_startup=0.0, cost_shutdown=0.0, p_min=0.0, p_max=100.0,
                  ramp_hourly=100.0, ramp_15min=25.0, ramp_startup=100.0,
                  ramp_shutdown=100.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=50.0, initial_hours=4),
    ]
    system = one_bus(gens)
    da = build_da_model(system, np.full((1, 2), 150.0), MODE_NONE)
    sol = solve_da(da, TIGHT)
    prices = fix_and_price(da, sol, TIGHT)

    assert sol.p[0] == pytest.approx([100.0, 100.0])
    assert sol.p[1] == pytest.approx([50.0, 50.0])
    assert prices.lmp[0] == pytest.approx([30.0, 30.0], abs=1e-8)
    assert prices.lam == pytest.approx(prices.lmp[0], abs=1e-8)
    # no capability product anywhere in this design
    for arr in (prices.pi_up, prices.pi_down, prices.pi_ih_up, prices.pi_ih_down):
        assert (arr == 0).all()
    assert frp_up_payment(sol, prices) == (pytest.approx([0.0, 0.0]), 0.0)
    rep = verify_pricing_identities(da, sol, prices)
    assert rep["ok"], rep


def designed_capability_market():
    """Two units where the upward-capability price is forced to exactly 40.

    ``cheap`` runs against its capacity headroom, so extra capability can
    only come from backing it down and replacing the energy with ``exp``
    (a 40 $/MWh swap).  ``exp`` itself is capped by its hourly ramp.
    """
    gens = [
        Generator(id="cheap", bus=1, cost_energy=10.0, cost_noload=0.0,
                  cost_startup=0.0, cost_shutdown=0.0, p_min=0.0, p_max=100.0,
                  ramp_hourly=100.0, ramp_15min=25.0, ramp_startup=100.0,
                  ramp_shutdown=100.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=95.0, initial_hours=4),
        Generator(id="exp", bus=1, cost_energy=50.0, cost_noload=0.0,
                  cost_startup=0.0, cost_shutdown=0.0, p_min=0.0, p_max=60.0,
                  ramp_hourly=15.0, ramp_15min=3.75, ramp_startup=60.0,
                  ramp_shutdown=60.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=35.0, initial_hours=4),
    ]
    profile = NetLoadProfile(hourly=np.array([130.0, 130.0]),
                             quarter=np.full((2, 4), 130.0),
                             sigma_hourly=np.array([0.0, 10.0]), z=2.0)
    return one_bus(gens), profile


def test_capability_price_designed_value():
    system, profile = designed_capability_market()
    da, sol = clear_da_for_mode(system, profile, MODE_GENERAL, options=TIGHT)
    prices = fix_and_price(da, sol, TIGHT)

    # requirement is 20 MW in hour 1 and zero in the terminal hour
    assert da.requirements.hourly_up == pytest.approx([20.0, 0.0])
    assert sol.p[:, 0] == pytest.approx([95.0, 35.0])
    assert sol.ur[:, 0] == pytest.approx([5.0, 15.0])

    assert prices.lmp[0] == pytest.approx([50.0, 50.0], abs=1e-7)
    assert prices.pi_up[0] == pytest.approx(40.0, abs=1e-7)
    assert prices.pi_up[1] == pytest.approx(0.0, abs=1e-7)
    # the binding multiplier sits on capacity for cheap, on ramp for exp
    assert prices.alpha_up[0, 0] == pytest.approx(40.0, abs=1e-7)
    assert prices.beta_up[0, 0] == pytest.approx(0.0, abs=1e-7)
    assert prices.beta_up[1, 0] == pytest.approx(40.0, abs=1e-7)
    assert prices.alpha_up[1, 0] == pytest.approx(0.0, abs=1e-7)

    per_hour, total = frp_up_payment(sol, prices)
    assert per_hour == pytest.approx([800.0, 0.0], abs=1e-6)
    assert total == pytest.approx(800.0, abs=1e-6)
    rep = verify_pricing_identities(da, sol, prices)
    assert rep["ok"], rep


def test_interhour_ramp_dual_reprices_early_energy():
    gens = [
        Generator(id="slow", bus=1, cost_energy=10.0, cost_noload=0.0,
                  cost_startup=0.0, cost_shutdown=0.0, p_min=20.0, p_max=200.0,
                  ramp_hourly=10.0, ramp_15min=2.5, ramp_startup=50.0,
                  ramp_shutdown=50.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=100.0, initial_hours=5),
        Generator(id="peaker", bus=1, cost_energy=100.0, cost_noload=5.0,
                  cost_startup=50.0, cost_shutdown=0.0, p_min=0.0, p_max=60.0,
                  ramp_hourly=200.0, ramp_15min=50.0, ramp_startup=60.0,
                  ramp_shutdown=60.0, min_up=1, min_down=1,
                  initial_on=False, initial_hours=2),
    ]
    system = one_bus(gens)
    da = build_da_model(system, np.array([[100.0, 150.0]]), MODE_NONE)
    sol = solve_da(da, TIGHT)
    prices = fix_and_price(da, sol, TIGHT)

    assert sol.p[0] == pytest.approx([100.0, 110.0])
    assert sol.p[1] == pytest.approx([0.0, 40.0])
    # the slow unit's hour-2 ramp is worth exactly the 90 $/MWh spread,
    # which discounts its hour-1 price below its own bid
    assert prices.gamma_down[0, 1] == pytest.approx(90.0, abs=1e-7)
    assert prices.lmp[0, 1] == pytest.approx(100.0, abs=1e-7)
    assert prices.lmp[0, 0] == pytest.approx(-80.0, abs=1e-7)
    rep = verify_pricing_identities(da, sol, prices)
    assert rep["ok"], rep


def test_congested_tie_splits_prices_and_rent():
    system = two_bus_system(rating=40.0)
    load = nodal_loads(system, np.full(2, 100.0))
    da = build_da_model(system, load, MODE_NONE)
    sol = solve_da(da, TIGHT)
    prices = fix_and_price(da, sol, TIGHT)
    settle = compute_settlements(da, sol, prices)

    assert prices.lmp[0] == pytest.approx([15.0, 15.0], abs=1e-7)
    assert prices.lmp[1] == pytest.approx([45.0, 45.0], abs=1e-7)
    assert sol.flows[0] == pytest.approx([40.0, 40.0])
    assert lmp_decomposition_residual(da, prices) < 1e-7

    # rent two ways: settlement residual and line-dual value of the rating
    dual_rent = float(((prices.f_plus + prices.f_minus)
                       * system.network.ratings()[:, None]).sum())
    assert settle.congestion_rent == pytest.approx(2 * 40.0 * 30.0, abs=1e-6)
    assert settle.congestion_rent == pytest.approx(dual_rent, abs=1e-6)
    assert settle.load_payment == pytest.approx(
        settle.energy_revenue.sum() + settle.congestion_rent, abs=1e-6)


def test_uncongested_tie_prices_uniformly():
    system = two_bus_system(rating=500.0)
    load = nodal_loads(system, np.full(2, 100.0))
    da = build_da_model(system, load, MODE_NONE)
    sol = solve_da(da, TIGHT)
    prices = fix_and_price(da, sol, TIGHT)
    settle = compute_settlements(da, sol, prices)

    assert np.abs(prices.lmp[0] - prices.lmp[1]).max() <= 1e-6
    assert abs(settle.congestion_rent) <= 1e-6
    assert settle.frp_up_total == 0.0 and settle.frp_down_total == 0.0


def straight_line_up(sol, prices):
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


def straight_line_down(sol, prices):
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


def straight_line_settlement(da, sol, prices):
    rows = da.system.gen_bus_rows()
    g_n = da.n_gens
    energy = np.zeros(g_n)
    up_rev = np.zeros(g_n)
    dn_rev = np.zeros(g_n)
    for g in range(g_n):
        node_price = prices.lmp[rows[g], :]
        for t in range(da.n_hours):
            energy[g] += node_price[t] * sol.p[g, t]
            up_rev[g] += (prices.pi_up[t] * sol.ur[g, t]
                          + prices.pi_ih_up[t] * sol.ur_ih[g, t])
            dn_rev[g] += (prices.pi_down[t] * sol.dr[g, t]
                          + prices.pi_ih_down[t] * sol.dr_ih[g, t])
    load_payment = float((prices.lmp * da.nodal_load).sum())
    return energy, up_rev, dn_rev, load_payment


def test_payments_match_straight_line_recomputation_exactly():
    checked = 0
    for seed in range(50):
        system = random_small_system(seed)
        profile = random_small_profile(seed)
        for mode in (MODE_GENERAL, MODE_ENHANCED):
            da, sol = clear_da_for_mode(system, profile, mode, options=LOOSE)
            prices = fix_and_price(da, sol, LOOSE)

            per_up, tot_up = frp_up_payment(sol, prices)
            ref_up, ref_tot_up = straight_line_up(sol, prices)
            assert np.array_equal(per_up, ref_up)
            assert tot_up == ref_tot_up

            per_dn, tot_dn = frp_down_payment(sol, prices)
            ref_dn, ref_tot_dn = straight_line_down(sol, prices)
            assert np.array_equal(per_dn, ref_dn)
            assert tot_dn == ref_tot_dn

            settle = compute_settlements(da, sol, prices)
            energy, up_rev, dn_rev, load_payment = straight_line_settlement(
                da, sol, prices)
            assert np.array_equal(settle.energy_revenue, energy)
            assert np.array_equal(settle.frp_up_revenue, up_rev)
            assert np.array_equal(settle.frp_down_revenue, dn_rev)
            assert settle.frp_up_total == float(up_rev.sum())
            assert settle.frp_down_total == float(dn_rev.sum())
            assert settle.load_payment == load_payment
            assert settle.congestion_rent == load_payment - float(energy.sum())
            assert np.array_equal(
                settle.profit,
                settle.energy_revenue + settle.frp_up_revenue
                + settle.frp_down_revenue - settle.cost)
            checked += 1
    assert checked == 100


def test_identities_hold_on_random_instances():
    for seed in range(5):
        system = random_small_system(seed + 200)
        profile = random_small_profile(seed + 200)
        for mode in (MODE_NONE, MODE_GENERAL, MODE_ENHANCED):
            da, sol = clear_da_for_mode(system, profile, mode, options=TIGHT)
            prices = fix_and_price(da, sol, TIGHT)
            rep = verify_pricing_identities(da, sol, prices)
            assert rep["ok"], (seed, mode, rep)
            scale = max(1.0, abs(sol.milp_objective))
            assert abs(prices.objective - sol.milp_objective) <= 1e-6 * scale
            assert abs(sol.objective - sol.milp_objective) <= 1e-6 * scale


def test_mode_none_pays_no_capability():
    system = random_small_system(7)
    profile = random_small_profile(7)
    da, sol = clear_da_for_mode(system, profile, MODE_NONE, options=LOOSE)
    prices = fix_and_price(da, sol, LOOSE)
    settle = compute_settlements(da, sol, prices)
    assert frp_up_payment(sol, prices)[1] == 0.0
    assert frp_down_payment(sol, prices)[1] == 0.0
    assert settle.frp_up_total == 0.0 and settle.frp_down_total == 0.0
    assert np.array_equal(settle.total_revenue, settle.energy_revenue)
