"""Scripted stand-in for a human driving the tip with a game controller.

Streams tip targets along a smooth closed path (20 commands/s), steps the
session at 50 Hz, and reports how well the rate-limited arm tracked the
IK solutions. Exercises the same command path the teleop client uses.

    python scripts/teleop_path_demo.py --laps 1 --payload 0.5
"""

import argparse
import math
import sys

import numpy as np

from inflatearm.session import Session
from inflatearm.specio import table1_chain


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--laps", type=int, default=1)
    parser.add_argument("--payload", type=float, default=0.5,
                        help="payload carried at the tip [kg]")
    parser.add_argument("--radius", type=float, default=0.25)
    args = parser.parse_args(argv)

    chain = table1_chain(3)
    session = Session(chain, omega_max=math.radians(30.0))
    start = np.array(session.snapshot().tip_m)
    center = start - np.array([args.radius, 0.0, 0.0])

    commands_per_lap = 120
    steps_per_command = 3  # 50 Hz stepping between 20 Hz-ish commands
    residuals = []
    tracking = []
    non_converged = 0
    for lap in range(args.laps):
        for k in range(commands_per_lap):
            phase = 2.0 * math.pi * k / commands_per_lap
            target = center + np.array([
                args.radius * math.cos(phase),
                args.radius * 0.6 * math.sin(phase),
                args.radius * 0.4 * math.sin(2.0 * phase),
            ])
            result = session.set_tip_target(target, payload_kg=args.payload)
            residuals.append(result.residual)
            non_converged += not result.converged
            for _ in range(steps_per_command):
                snap = session.step(0.02)
            tracking.append(np.linalg.norm(np.array(snap.tip_m) - target))

    # hold the final target and let the rate-limited joints settle
    for _ in range(150):
        snap = session.step(0.02)
    settled = np.linalg.norm(np.array(snap.tip_m) - target)

    residuals = np.array(residuals)
    tracking = np.array(tracking)
    print(f"commands: {residuals.size}, non-converged: {non_converged}")
    print(f"IK residual   mean {residuals.mean() * 1e3:.3f} mm, "
          f"max {residuals.max() * 1e3:.3f} mm")
    print(f"tracking gap  mean {tracking.mean() * 1e3:.1f} mm while moving, "
          f"{settled * 1e3:.2f} mm after a 3 s hold")
    worst = session.snapshot().joints
    forces = [j.required_force_n for j in worst]
    print(f"final holding forces [N]: "
          + ", ".join(f"{f:.1f}" for f in forces))
    return 0


if __name__ == "__main__":
    sys.exit(main())
