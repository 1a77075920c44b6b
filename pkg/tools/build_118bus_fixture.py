#!/usr/bin/env python3
"""Generate the bundled 118-bus study case.

Builds a 118-bus, 186-branch network with a 54-unit fleet on the
classic generator buses, a 91-bus load distribution, and a duck-shaped
net-load day with quarter-hour texture.  Branch ratings are calibrated
from a merit-order DC dispatch of the day (25% margin, one deliberately
tight corridor).  Output is frozen into src/flexramp/data/ so runs are
reproducible; rerunning this script reproduces the same bytes.

Usage: python3 tools/build_118bus_fixture.py [outdir]
"""

import csv
import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from flexramp.system import (Generator, Line, NetworkModel, SystemModel,  # noqa: E402
                             dc_flows, nodal_loads, system_to_dict)

SEED = 118
N_BUSES = 118
N_LINES = 186
N_LOAD_BUSES = 91
PEAK_MW = 5600.0

# generator bus placement from the classic 118-bus case
GEN_BUSES = [1, 4, 6, 8, 10, 12, 15, 18, 19, 24, 25, 26, 27, 31, 32, 34, 36,
             40, 42, 46, 49, 54, 55, 56, 59, 61, 62, 65, 66, 69, 70, 72, 73,
             74, 76, 77, 80, 85, 87, 89, 90, 91, 92, 99, 100, 103, 104, 105,
             107, 110, 111, 112, 113, 116]

# per-unit duck shape, hours 1..24
DUCK = [0.62, 0.58, 0.55, 0.54, 0.55, 0.60, 0.68, 0.72, 0.70, 0.62, 0.55,
        0.50, 0.47, 0.45, 0.46, 0.52, 0.62, 0.78, 0.92, 1.00, 0.97, 0.88,
        0.76, 0.67]

# (count, p_max range, energy cost range, p_min frac, ramp frac, min up/down, SU range, fast)
CLASSES = [
    ("L", 10, (300.0, 550.0), (10.0, 18.0), 0.45, (0.35, 0.50), (8, 8), (8000.0, 20000.0), False),
    ("M", 16, (100.0, 250.0), (20.0, 32.0), 0.35, (0.50, 0.80), (4, 6), (2000.0, 6000.0), False),
    ("S", 10, (60.0, 100.0), (30.0, 40.0), 0.25, (0.60, 1.00), (2, 3), (500.0, 1500.0), False),
    ("P", 18, (20.0, 50.0), (45.0, 80.0), 0.10, (0.90, 1.00), (1, 1), (100.0, 400.0), True),
]


def build_topology(rng) -> list:
    """Random connected 186-edge graph: spanning tree plus chords."""
    order = rng.permutation(np.arange(1, N_BUSES + 1))
    edges = set()
    for i in range(1, N_BUSES):
        j = int(rng.integers(0, i))
        a, b = int(order[i]), int(order[j])
        edges.add((min(a, b), max(a, b)))
    while len(edges) < N_LINES:
        a, b = (int(v) for v in rng.integers(1, N_BUSES + 1, size=2))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def build_fleet(rng) -> list:
    buses = list(rng.permutation(np.array(GEN_BUSES)))
    gens = []
    idx = 0
    for tag, count, pmax_r, cost_r, pmin_f, ramp_f, ud, su_r, fast in CLASSES:
        for k in range(count):
            p_max = round(float(rng.uniform(*pmax_r)), 1)
            p_min = round(pmin_f * p_max, 1)
            ramp_h = round(float(rng.uniform(*ramp_f)) * p_max, 1)
            ramp_q = round(ramp_h / (2.0 if fast else 4.0), 2)
            mu = int(rng.integers(ud[0], ud[1] + 1))
            gens.append(Generator(
                id=f"{tag}{k + 1:02d}", bus=int(buses[idx]),
                cost_energy=round(float(rng.uniform(*cost_r)), 2),
                cost_noload=round(float(rng.uniform(2.0, 10.0)) * p_max / 10.0, 1),
                cost_startup=round(float(rng.uniform(*su_r)), 0),
                cost_shutdown=round(float(rng.uniform(0.05, 0.15) * su_r[0]), 0),
                p_min=p_min, p_max=p_max, ramp_hourly=ramp_h, ramp_15min=ramp_q,
                ramp_startup=round(max(p_min, 0.25 * p_max), 1),
                ramp_shutdown=round(max(p_min, 0.25 * p_max), 1),
                min_up=mu, min_down=mu, fast_start=fast))
            idx += 1
    return gens


def assign_initial_state(gens, first_hour_load) -> list:
    """Start the cheap end of the fleet online, dispatched to hour-0 load."""
    order = sorted(range(len(gens)), key=lambda i: gens[i].cost_energy)
    on, cap = [], 0.0
    for i in order:
        if gens[i].fast_start:
            continue
        on.append(i)
        cap += gens[i].p_max
        if cap >= 1.2 * first_hour_load:
            break
    pmin_on = sum(gens[i].p_min for i in on)
    span = sum(gens[i].p_max - gens[i].p_min for i in on)
    frac = max(0.0, min(1.0, (first_hour_load - pmin_on) / span))
    out = list(gens)
    from dataclasses import replace
    for i in on:
        g = gens[i]
        p0 = round(g.p_min + frac * (g.p_max - g.p_min), 1)
        out[i] = replace(g, initial_on=True, initial_output=p0,
                         initial_hours=g.min_up)
    for i in set(range(len(gens))) - set(on):
        out[i] = replace(gens[i], initial_on=False, initial_output=0.0,
                         initial_hours=gens[i].min_down)
    return out


def duck_profile(rng):
    """Hourly duck curve with quarter-hour texture; hourly = quarter mean."""
    hourly0 = PEAK_MW * np.array(DUCK)
    centers = np.arange(24) + 0.5
    qtimes = (np.arange(96) + 0.5) / 4.0
    smooth = np.interp(qtimes, centers, hourly0)
    ripple = rng.normal(0.0, 0.008 * PEAK_MW, size=96)
    quarters = (smooth + ripple).reshape(24, 4)
    quarters = np.round(quarters, 1)
    hourly = quarters.mean(axis=1)
    return hourly, quarters


def calibrate_ratings(gens, edges, reactances, load_shares, hourly):
    """Rate lines off a merit-order dispatch with margin; pinch one corridor."""
    net = NetworkModel(buses=list(range(1, N_BUSES + 1)),
                       lines=[Line(a, b, x, 1e9) for (a, b), x in zip(edges, reactances)],
                       slack_bus=69)
    sysm = SystemModel(generators=gens, network=net, load_shares=load_shares,
                       name="tmp")
    order = sorted(range(len(gens)), key=lambda i: gens[i].cost_energy)
    loads = nodal_loads(sysm, hourly)
    peak_flow = np.zeros(len(edges))
    for t in range(len(hourly)):
        remaining = hourly[t]
        inj = -loads[:, t].copy()
        for i in order:
            g = gens[i]
            take = min(g.p_max, remaining)
            inj[net.bus_index[g.bus]] += take
            remaining -= take
            if remaining <= 0:
                break
        flows = dc_flows(net, inj)
        peak_flow = np.maximum(peak_flow, np.abs(flows))
    ratings = np.maximum(50.0, 1.25 * peak_flow)
    pinch = int(np.argmax(peak_flow))
    ratings[pinch] = 1.02 * peak_flow[pinch]
    return np.round(ratings, 1), pinch


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "src", "flexramp", "data")
    os.makedirs(outdir, exist_ok=True)
    rng = np.random.default_rng(SEED)

    edges = build_topology(rng)
    reactances = np.round(rng.uniform(0.03, 0.25, size=len(edges)), 4)
    gens = build_fleet(rng)

    load_bus_pool = np.setdiff1d(np.arange(1, N_BUSES + 1), [69])
    load_buses = np.sort(rng.choice(load_bus_pool, size=N_LOAD_BUSES, replace=False))
    raw_shares = rng.gamma(2.0, 1.0, size=N_LOAD_BUSES)
    shares = np.zeros(N_BUSES)
    shares[load_buses - 1] = raw_shares / raw_shares.sum()

    hourly, quarters = duck_profile(rng)
    gens = assign_initial_state(gens, hourly[0])
    ratings, pinch = calibrate_ratings(gens, edges, reactances, shares, hourly)

    lines = [Line(a, b, float(x), float(r))
             for (a, b), x, r in zip(edges, reactances, ratings)]
    network = NetworkModel(buses=list(range(1, N_BUSES + 1)), lines=lines,
                           slack_bus=69)
    system = SystemModel(generators=gens, network=network, load_shares=shares,
                         name="ieee118-flexramp")

    doc = system_to_dict(system)
    with open(os.path.join(outdir, "ieee118_system.json"), "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")

    with open(os.path.join(outdir, "ieee118_netload.csv"), "w", newline="") as fh:
        fh.write("# net-load day for the bundled 118-bus case (MW)\n")
        w = csv.writer(fh)
        w.writerow(["hour", "net_load", "q1", "q2", "q3", "q4"])
        for t in range(24):
            w.writerow([t + 1, repr(float(hourly[t]))]
                       + [repr(float(q)) for q in quarters[t]])

    cap = sum(g.p_max for g in gens)
    on0 = [g for g in gens if g.initial_on]
    print(f"fleet: {len(gens)} units, {cap:.0f} MW capacity; "
          f"{len(on0)} initially on ({sum(g.initial_output for g in on0):.0f} MW)")
    print(f"network: {len(lines)} branches; pinched corridor "
          f"{lines[pinch].from_bus}-{lines[pinch].to_bus} at {ratings[pinch]:.1f} MW")
    print(f"load: peak {hourly.max():.0f} MW, valley {hourly.min():.0f} MW,"
          f" {N_LOAD_BUSES} load buses")
    ramp_fleet = sum(g.ramp_hourly for g in gens)
    r15_fleet = sum(g.ramp_15min for g in gens)
    dh = np.diff(hourly)
    print(f"max hourly delta {dh.max():.0f} MW up / {-dh.min():.0f} down; "
          f"fleet hourly ramp {ramp_fleet:.0f} MW, quarter ramp {r15_fleet:.0f} MW")


if __name__ == "__main__":
    main()
