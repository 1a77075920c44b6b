"""Price a congested two-bus day and settle it.

The tie line is deliberately small, so the cheap unit cannot serve the
remote load alone: locational prices separate, the congestion rent is
positive, and the flexible ramping capability earns its own revenue.
"""

import numpy as np

from flexramp.evaluate import clear_da_for_mode
from flexramp.fixtures import two_bus_system
from flexramp.pricing import (compute_settlements, fix_and_price,
                              lmp_decomposition_residual,
                              verify_pricing_identities)
from flexramp.requirements import NetLoadProfile


def main():
    system = two_bus_system(rating=35.0)
    hours = 6
    hourly = np.array([60.0, 75.0, 90.0, 100.0, 85.0, 70.0])
    profile = NetLoadProfile(hourly=hourly,
                             quarter=np.repeat(hourly[:, None], 4, axis=1),
                             sigma_hourly=0.05 * hourly, name="two-bus-day")

    da, sol = clear_da_for_mode(system, profile, "general")
    prices = fix_and_price(da, sol)

    print("LMP by bus and hour ($/MWh):")
    for r, bus in enumerate(system.network.buses):
        print(f"  bus {bus}: {np.round(prices.lmp[r], 2)}")
    print("system lambda:", np.round(prices.lam, 2))
    print("tie-line flow (MW):", np.round(sol.flows[0], 1), "of rating 35.0")
    print("ramp capability prices pi+ :", np.round(prices.pi_up, 2))
    print()

    report = verify_pricing_identities(da, sol, prices)
    print("pricing identities hold:", report["ok"],
          f"(decomposition residual {lmp_decomposition_residual(da, prices):.2e})")

    st = compute_settlements(da, sol, prices)
    print(f"\nload payment {st.load_payment:.2f} $, "
          f"energy revenue {st.energy_revenue.sum():.2f} $, "
          f"congestion rent {st.congestion_rent:.2f} $")
    for i, gid in enumerate(st.gen_ids):
        print(f"  {gid}: energy {st.energy_revenue[i]:9.2f}  "
              f"frp {st.frp_up_revenue[i] + st.frp_down_revenue[i]:7.2f}  "
              f"profit {st.profit[i]:9.2f}")


if __name__ == "__main__":
    main()
