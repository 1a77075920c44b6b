"""Clear the bundled 118-bus case and look at the prices.

Runs the enhanced design on the packaged duck-curve day: commitment by
unit class, the congested corridor, and where the ramp capability prices
bind.  Takes roughly half a minute.
"""

import numpy as np

from flexramp.evaluate import clear_da_for_mode
from flexramp.fixtures import ieee118_profile, ieee118_system
from flexramp.pricing import compute_settlements, fix_and_price
from flexramp.damarket import production_cost


def main():
    system = ieee118_system()
    profile = ieee118_profile()
    print(f"{len(system.generators)} units, {len(system.network.lines)} branches, "
          f"peak net load {profile.hourly.max():.0f} MW")

    da, sol = clear_da_for_mode(system, profile, "enhanced")
    cost = production_cost(system, sol)
    print(f"\nobjective {sol.objective:,.0f} $ "
          f"(energy {cost['energy']:,.0f}, no-load {cost['noload']:,.0f}, "
          f"startup {cost['startup']:,.0f})")

    by_class = {}
    for g, gen in enumerate(system.generators):
        by_class.setdefault(gen.id[0], []).append(int(sol.u[g].sum()))
    for cls, hours in sorted(by_class.items()):
        print(f"  class {cls}: {len(hours)} units, "
              f"avg {np.mean(hours):.1f} committed hours")

    prices = fix_and_price(da, sol)
    spread = prices.lmp.max(axis=0) - prices.lmp.min(axis=0)
    print(f"\nLMP range over the day: {prices.lmp.min():.2f} to "
          f"{prices.lmp.max():.2f} $/MWh; "
          f"{int((spread > 0.01).sum())} hours with locational separation")
    loading = np.abs(sol.flows) / np.array([ln.rating for ln in system.network.lines])[:, None]
    k, t = np.unravel_index(np.argmax(loading), loading.shape)
    ln = system.network.lines[k]
    print(f"most loaded branch {ln.from_bus}-{ln.to_bus}: "
          f"{100 * loading[k, t]:.1f}% at hour {t + 1}")

    up_hours = np.nonzero(prices.pi_up > 0.01)[0]
    print(f"hours with nonzero ramp-up capability price: {up_hours + 1}")
    st = compute_settlements(da, sol, prices)
    print(f"total ramp capability revenue {st.frp_up_total + st.frp_down_total:,.0f} $, "
          f"congestion rent {st.congestion_rent:,.0f} $")


if __name__ == "__main__":
    main()
