"""Monte-Carlo comparison of the three ramping designs on one system.

Draws a batch of quarter-hour net-load scenarios, rolls each against the
day-ahead schedule of every design, and prints the headline table: who
violates, who pays, who leans on fast-start units.
"""

import numpy as np

from flexramp.evaluate import evaluate_designs
from flexramp.fixtures import steep_ramp_profile, steep_ramp_system
from flexramp.rtuc import generate_scenarios

N_SCENARIOS = 25


def main():
    system = steep_ramp_system()
    profile = steep_ramp_profile()
    scenarios = generate_scenarios(profile, N_SCENARIOS, seed=2024)

    result = evaluate_designs(system, profile, scenarios,
                              ["none", "general", "enhanced"],
                              voll_sweep=[5000.0, 20000.0])

    print(f"{N_SCENARIOS} scenarios, penalty {result.voll:.0f} $/MWh\n")
    print(f"{'design':10s} {'DA obj $':>10s} {'avg viol MWh':>13s} "
          f"{'scen w/ viol':>13s} {'avg cost $':>11s} {'FS boost':>9s} {'spikes':>7s}")
    for mode in ("none", "general", "enhanced"):
        mm = result.modes[mode]
        vs = mm.violation_stats()
        print(f"{mode:10s} {mm.da_objective:10.0f} {vs['average']:13.3f} "
              f"{vs['count_with_violation']:13d} {mm.cost_incl.mean():11.0f} "
              f"{mm.fs_increase.mean():9.2f} {int(mm.spike_count.sum()):7d}")

    print("\nscenario-level wins (count of scenarios, ties included):")
    for pair, counts in sorted(result.pairwise.items()):
        print(f"  {pair:22s} violation {counts['violation_mwh']:3d}/{N_SCENARIOS}"
              f"   cost {counts['cost_incl']:3d}/{N_SCENARIOS}")

    print("\npenalty-price sensitivity (violations should not move):")
    for row in result.sweeps.get("voll", []):
        cells = ", ".join(f"{m}: {v['avg_violation_mwh']:.3f}"
                          for m, v in sorted(row["modes"].items()))
        print(f"  VOLL {row['voll']:7.0f}: {cells}")


if __name__ == "__main__":
    main()
