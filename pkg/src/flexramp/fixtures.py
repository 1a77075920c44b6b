"""Bundled and synthetic study systems.

``ieee118_system``/``ieee118_profile`` load the packaged 118-bus case
(54 units, 186 branches, a duck-shaped net-load day).  The remaining
builders are small systems with known behavior, used by the demos and
the test suite.
"""

from __future__ import annotations

from dataclasses import replace
from importlib import resources

import numpy as np

from .requirements import NetLoadProfile, load_profile_csv
from .system import Generator, Line, NetworkModel, SystemModel, load_system


def _data_path(name: str):
    return resources.files("flexramp.data").joinpath(name)


def ieee118_system() -> SystemModel:
    with resources.as_file(_data_path("ieee118_system.json")) as p:
        return load_system(p)


def ieee118_profile(z: float = 1.96, sigma_fraction: float = 0.05) -> NetLoadProfile:
    with resources.as_file(_data_path("ieee118_netload.csv")) as p:
        return load_profile_csv(p, z=z, sigma_fraction=sigma_fraction)


def single_bus_network() -> NetworkModel:
    return NetworkModel(buses=[1], lines=[], slack_bus=1)


def toy_system() -> SystemModel:
    """Two dispatchable units and a fast-start peaker on one bus.

    Unit A is cheap and slow, unit B pricier but nimble; C is a small
    fast-start machine.  Sized so a 100 MW flat day is comfortable.
    """
    gens = [
        Generator(id="A", bus=1, cost_energy=20.0, cost_noload=50.0,
                  cost_startup=200.0, cost_shutdown=50.0, p_min=20.0, p_max=100.0,
                  ramp_hourly=40.0, ramp_15min=10.0, ramp_startup=30.0,
                  ramp_shutdown=30.0, min_up=2, min_down=2,
                  initial_on=True, initial_output=60.0, initial_hours=4),
        Generator(id="B", bus=1, cost_energy=35.0, cost_noload=30.0,
                  cost_startup=100.0, cost_shutdown=20.0, p_min=10.0, p_max=60.0,
                  ramp_hourly=60.0, ramp_15min=15.0, ramp_startup=20.0,
                  ramp_shutdown=20.0, min_up=1, min_down=1,
                  initial_on=False, initial_hours=4),
        Generator(id="C", bus=1, cost_energy=70.0, cost_noload=10.0,
                  cost_startup=30.0, cost_shutdown=10.0, p_min=2.0, p_max=12.0,
                  ramp_hourly=48.0, ramp_15min=12.0, ramp_startup=12.0,
                  ramp_shutdown=12.0, min_up=1, min_down=1, fast_start=True,
                  initial_on=False, initial_hours=2),
    ]
    return SystemModel(generators=gens, network=single_bus_network(),
                       load_shares=np.array([1.0]), name="toy-3unit")


def two_bus_system(rating: float = 40.0) -> SystemModel:
    """Cheap generation behind a limited tie; congestion splits the prices."""
    net = NetworkModel(buses=[1, 2],
                       lines=[Line(from_bus=1, to_bus=2, reactance=0.1,
                                   rating=rating)],
                       slack_bus=1)
    gens = [
        Generator(id="cheap", bus=1, cost_energy=15.0, cost_noload=20.0,
                  cost_startup=100.0, cost_shutdown=20.0, p_min=10.0, p_max=150.0,
                  ramp_hourly=100.0, ramp_15min=25.0, ramp_startup=50.0,
                  ramp_shutdown=50.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=60.0, initial_hours=4),
        Generator(id="local", bus=2, cost_energy=45.0, cost_noload=15.0,
                  cost_startup=80.0, cost_shutdown=15.0, p_min=5.0, p_max=120.0,
                  ramp_hourly=90.0, ramp_15min=22.5, ramp_startup=40.0,
                  ramp_shutdown=40.0, min_up=1, min_down=1,
                  initial_on=True, initial_output=20.0, initial_hours=4),
    ]
    return SystemModel(generators=gens, network=net,
                       load_shares=np.array([0.1, 0.9]), name="two-bus-tie")


def steep_ramp_system() -> SystemModel:
    """Single-bus fleet where intra-hour capability is the scarce good.

    The base unit covers energy but can move only 5 MW per quarter hour;
    the flexible unit can follow the swings but is not fast-start, so it
    helps in real time only if committed day-ahead.  The tiny fast-start
    peaker is the only real-time recourse.
    """
    gens = [
        Generator(id="base", bus=1, cost_energy=20.0, cost_noload=40.0,
                  cost_startup=300.0, cost_shutdown=60.0, p_min=40.0, p_max=120.0,
                  ramp_hourly=60.0, ramp_15min=5.0, ramp_startup=60.0,
                  ramp_shutdown=60.0, min_up=4, min_down=4,
                  initial_on=True, initial_output=100.0, initial_hours=8),
        Generator(id="flex", bus=1, cost_energy=40.0, cost_noload=25.0,
                  cost_startup=150.0, cost_shutdown=30.0, p_min=10.0, p_max=80.0,
                  ramp_hourly=80.0, ramp_15min=40.0, ramp_startup=40.0,
                  ramp_shutdown=40.0, min_up=3, min_down=3,
                  initial_on=False, initial_hours=6),
        Generator(id="peak", bus=1, cost_energy=80.0, cost_noload=5.0,
                  cost_startup=20.0, cost_shutdown=5.0, p_min=1.0, p_max=5.0,
                  ramp_hourly=20.0, ramp_15min=5.0, ramp_startup=5.0,
                  ramp_shutdown=5.0, min_up=1, min_down=1, fast_start=True,
                  initial_on=False, initial_hours=2),
    ]
    return SystemModel(generators=gens, network=single_bus_network(),
                       load_shares=np.array([1.0]), name="steep-ramp")


def steep_ramp_profile(n_hours: int = 6, swing: float = 15.0,
                       sigma: float = 2.0) -> NetLoadProfile:
    """Flat 100 MW day with a +-``swing`` sawtooth inside every hour."""
    quarter = np.tile([100.0 + swing, 100.0 - swing, 100.0 + swing,
                       100.0 - swing], (n_hours, 1))
    return NetLoadProfile(hourly=quarter.mean(axis=1), quarter=quarter,
                          sigma_hourly=np.full(n_hours, sigma),
                          name="steep-ramp-sawtooth")


def random_small_system(seed: int, n_units: int = None) -> SystemModel:
    """Random but comfortably feasible single-bus system for cross-checks.

    Capacity is at least twice the 100 MW reference load and every unit
    keeps a quarter of its hourly ramp available within the hour, so all
    three market designs stay feasible for mild profiles.
    """
    rng = np.random.default_rng(seed)
    if n_units is None:
        n_units = int(rng.integers(3, 6))
    gens = []
    total_cap = 0.0
    for i in range(n_units):
        p_max = float(rng.uniform(40.0, 120.0))
        p_min = float(rng.uniform(0.1, 0.35) * p_max)
        ramp_h = float(rng.uniform(0.5, 1.0) * p_max)
        min_down = int(rng.integers(1, 4))
        gens.append(Generator(
            id=f"G{i + 1}", bus=1,
            cost_energy=float(rng.uniform(15.0, 60.0)),
            cost_noload=float(rng.uniform(5.0, 60.0)),
            cost_startup=float(rng.uniform(20.0, 300.0)),
            cost_shutdown=float(rng.uniform(5.0, 60.0)),
            p_min=p_min, p_max=p_max, ramp_hourly=ramp_h,
            ramp_15min=ramp_h / 4.0,
            ramp_startup=max(p_min, float(rng.uniform(0.3, 0.6) * p_max)),
            ramp_shutdown=max(p_min, float(rng.uniform(0.3, 0.6) * p_max)),
            min_up=int(rng.integers(1, 4)), min_down=min_down,
            # rested: the carried-in minimum downtime is already served,
            # so the unit is free to start in any hour
            initial_hours=min_down,
            fast_start=bool(rng.random() < 0.25 and p_max <= 60.0)))
        total_cap += p_max
    # guarantee headroom: the first unit starts the day online at mid-range
    g0 = gens[0]
    gens[0] = replace(g0, fast_start=False, initial_on=True,
                      initial_output=0.5 * (g0.p_min + g0.p_max),
                      initial_hours=max(g0.min_up, 4))
    if total_cap < 200.0:
        scale = 220.0 / total_cap
        gens = [replace(g, p_max=g.p_max * scale, p_min=g.p_min * scale,
                        ramp_hourly=g.ramp_hourly * scale,
                        ramp_15min=g.ramp_15min * scale,
                        ramp_startup=g.ramp_startup * scale,
                        ramp_shutdown=g.ramp_shutdown * scale,
                        initial_output=g.initial_output * scale)
                for g in gens]
    return SystemModel(generators=gens, network=single_bus_network(),
                       load_shares=np.array([1.0]), name=f"random-{seed}")


def random_small_profile(seed: int, n_hours: int = 8,
                         base: float = 100.0) -> NetLoadProfile:
    """Gentle random day matched to :func:`random_small_system` sizing."""
    rng = np.random.default_rng(seed + 10_000)
    hourly = base * (1.0 + 0.15 * np.sin(np.linspace(0, 2 * np.pi, n_hours))
                     + rng.uniform(-0.05, 0.05, n_hours))
    ripple = rng.uniform(-0.02, 0.02, (n_hours, 4)) * base
    quarter = hourly[:, None] + ripple - ripple.mean(axis=1, keepdims=True)
    return NetLoadProfile(hourly=hourly, quarter=quarter,
                          sigma_hourly=0.03 * hourly, name=f"random-{seed}")
