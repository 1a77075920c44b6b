"""Clear a small day-ahead market under all three ramping designs.

Shows how the commitment and the bill change as the market moves from no
ramping product, to an hourly flexible ramping product, to the enhanced
design that also buys quarter-hour capability.
"""

import numpy as np

from flexramp import MODES, production_cost, solve_da
from flexramp.evaluate import clear_da_for_mode
from flexramp.fixtures import toy_system
from flexramp.requirements import NetLoadProfile, compute_requirements


def main():
    system = toy_system()
    hours = 8
    hourly = 80 + 25 * np.sin(np.linspace(0.2, np.pi, hours))
    quarter = hourly[:, None] + np.array([-4.0, 2.0, 4.0, -2.0])
    profile = NetLoadProfile(hourly=quarter.mean(axis=1), quarter=quarter,
                             sigma_hourly=0.04 * hourly, name="demo-day")

    reqs = compute_requirements(profile)
    print("hourly ramp-up requirement (MW):", np.round(reqs.hourly_up, 1))
    print("intra-hour  up requirement (MW):", np.round(reqs.intra_up, 1))
    print()

    for mode in MODES:
        da, sol = clear_da_for_mode(system, profile, mode)
        cost = production_cost(system, sol)
        on = ["".join(str(int(u)) for u in sol.u[g]) for g in range(len(system.generators))]
        print(f"design {mode!r}: objective {sol.objective:10.2f} $  "
              f"(energy {cost['energy']:.0f}, startup {cost['startup']:.0f})")
        for g, gen in enumerate(system.generators):
            print(f"   {gen.id}: on={on[g]}  P={np.round(sol.p[g], 1)}")
        print()


if __name__ == "__main__":
    main()
