"""Feasibility reports for the published lifting scenarios.

Each preset pairs a payload with its distance from the base; text and
figure-caption variants disagree, so all four ship. The lifting joint is
swept 0..45 deg (the amplitude used under load).

    python scripts/lift_report.py --motor-limit 160
"""

import argparse
import math
import sys

from inflatearm.specio import table1_chain
from inflatearm.statics import LOAD_PRESETS, lift_feasibility, load_case_from_preset


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--motor-limit", type=float, default=math.inf,
                        help="tendon tension budget [N]")
    parser.add_argument("--sweep-deg", default="0:45")
    args = parser.parse_args(argv)

    lo, _, hi = args.sweep_deg.partition(":")
    sweep = (math.radians(float(lo)), math.radians(float(hi)))

    for name in sorted(LOAD_PRESETS):
        n_dof = int(name[0])
        chain = table1_chain(n_dof, axes=("parallel",) * n_dof)
        load = load_case_from_preset(name, chain)
        report = lift_feasibility(chain, load, args.motor_limit, sweep)
        print(f"== {name}: {load.mass} kg at {load.offset} m on the "
              f"{n_dof}-DoF arm ==")
        print(report.to_text())
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
