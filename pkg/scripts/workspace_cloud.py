"""Sample the 3-DoF arm's reachable tip cloud and optionally plot it.

Reproduces the motion-capture sweep configuration: joint 1 swings only
upward (0..150 deg), joints 2 and 3 use their full range. The cloud is
written as CSV; --plot renders the side and top projections the way the
capture figures present them.

    python scripts/workspace_cloud.py --resolution 21 --out cloud.csv --plot cloud.png
"""

import argparse
import math
import sys

import numpy as np

from inflatearm.chain import sample_workspace
from inflatearm.specio import table1_chain


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--resolution", type=int, default=21,
                        help="grid points per joint (default 21)")
    parser.add_argument("--out", default="cloud.csv")
    parser.add_argument("--plot", help="optional PNG path for the projections")
    args = parser.parse_args(argv)

    chain = table1_chain(3)
    limit = math.radians(150.0)
    ranges = [(0.0, limit), (-limit, limit), (-limit, limit)]
    cloud = sample_workspace(chain, ranges, args.resolution)
    cloud.to_csv(args.out)

    dists = np.linalg.norm(cloud.points, axis=1)
    print(f"{cloud.points.shape[0]} samples -> {args.out}")
    print(f"straight-pose reach: {chain.total_reach:.3f} m")
    print(f"max distance from base: {dists.max():.6f} m "
          f"(bent poses outreach the straight arm on a rolling joint)")
    print(f"z envelope: [{cloud.points[:, 2].min():.3f}, "
          f"{cloud.points[:, 2].max():.3f}] m")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (side, top) = plt.subplots(1, 2, figsize=(11, 5))
        side.scatter(cloud.points[:, 0], cloud.points[:, 1], s=1, alpha=0.15)
        side.set_xlabel("x [m]")
        side.set_ylabel("y [m]")
        side.set_title("view from the side")
        side.set_aspect("equal")
        top.scatter(cloud.points[:, 0], cloud.points[:, 2], s=1, alpha=0.15)
        top.set_xlabel("x [m]")
        top.set_ylabel("z [m]")
        top.set_title("view from directly above")
        top.set_aspect("equal")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=130)
        print(f"projections -> {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
