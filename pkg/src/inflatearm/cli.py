"""Command-line interface.

    inflatearm workspace --spec presets/table1_3dof.json \
        --ranges "0:150,-150:150,-150:150" --resolution 31 --out cloud.csv
    inflatearm torque-table --spec presets/table1_1dof.json \
        --load 1dof-text --sweep "0:45" --out table.csv
    inflatearm ik --spec presets/table1_3dof.json --target 0.8,0.3,0.2
    inflatearm serve --port 8000 --log snapshots.jsonl
    inflatearm check
"""

import argparse
import math
import sys

import numpy as np

from . import selfcheck, statics
from .chain import sample_workspace, solve_ik
from .errors import SpecValidationError
from .specio import load_robot_file
from .statics import LOAD_PRESETS, lift_feasibility, required_tendon_forces


def _parse_ranges(text, n_joints):
    """\"0:150,-150:150\" in degrees -> [(lo_rad, hi_rad), ...]."""
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != n_joints:
        raise ValueError(f"expected {n_joints} ranges, got {len(parts)}")
    ranges = []
    for part in parts:
        lo, _, hi = part.partition(":")
        ranges.append((math.radians(float(lo)), math.radians(float(hi))))
    return ranges


def _parse_vector(text, n=None):
    vals = [float(v) for v in text.split(",") if v.strip()]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated values, got {len(vals)}")
    return vals


def _load_spec(path):
    try:
        return load_robot_file(path)
    except SpecValidationError as exc:
        print("invalid robot spec:", file=sys.stderr)
        for field, message in exc.problems:
            print(f"  {field}: {message}", file=sys.stderr)
        raise SystemExit(2)


def cmd_workspace(args):
    config = _load_spec(args.spec)
    chain = config.chain
    ranges = _parse_ranges(args.ranges, chain.n_joints)
    cloud = sample_workspace(chain, ranges, args.resolution)
    cloud.to_csv(args.out)
    dists = np.linalg.norm(cloud.points, axis=1)
    print(f"wrote {cloud.points.shape[0]} samples to {args.out}")
    print(f"max distance from base: {dists.max():.9g} m")
    return 0


def cmd_torque_table(args):
    config = _load_spec(args.spec)
    chain = config.chain
    try:
        load = statics.load_case_from_preset(args.load, chain)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    lo_deg, _, hi_deg = args.sweep.partition(":")
    sweep = (math.radians(float(lo_deg)), math.radians(float(hi_deg)))

    grid = np.linspace(sweep[0], sweep[1], args.samples)
    lines = ["theta_deg,gravity_torque_nm,moment_arm_m,required_force_n,side,feasible"]
    for theta in grid:
        angles = np.array(load.pose_angles)
        angles[args.joint] = theta
        taus = statics.gravity_torques(chain, angles, load)
        demand = required_tendon_forces(chain, angles, taus)[args.joint]
        lines.append(",".join([
            f"{math.degrees(theta):.9g}",
            f"{taus[args.joint]:.9g}",
            f"{demand.moment_arm:.9g}",
            f"{demand.force:.9g}",
            demand.side.value,
            str(demand.feasible).lower(),
        ]))
    with open(args.out, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(grid)} rows to {args.out}")

    report = lift_feasibility(chain, load, args.motor_limit, sweep,
                              joint=args.joint, samples=args.samples)
    print(report.to_text())
    return 0


def cmd_ik(args):
    config = _load_spec(args.spec)
    chain = config.chain
    target = _parse_vector(args.target, 3)
    seed = None
    if args.seed is not None:
        seed = [math.radians(v) for v in _parse_vector(args.seed, chain.n_joints)]
    result = solve_ik(chain, target, seed=seed)
    angles_deg = [math.degrees(a) for a in result.angles]
    print("angles_deg:", ",".join(f"{a:.6g}" for a in angles_deg))
    print(f"residual_m: {result.residual:.9g}")
    print(f"converged: {str(result.converged).lower()}")
    print(f"iterations: {result.iterations}")
    return 0 if result.converged else 1


def cmd_serve(args):
    from .server import serve

    serve(host=args.host, port=args.port, log_path=args.log)
    return 0


def cmd_check(args):
    return selfcheck.main()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="inflatearm",
        description="Inflatable-arm kinematics, statics, and simulation service")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("workspace", help="sample the reachable tip cloud to CSV")
    p.add_argument("--spec", required=True, help="robot spec JSON file")
    p.add_argument("--ranges", required=True,
                   help='per-joint degree ranges, e.g. "0:150,-150:150,-150:150"')
    p.add_argument("--resolution", type=int, default=31,
                   help="grid points per joint (default 31)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_workspace)

    p = sub.add_parser("torque-table",
                       help="sweep a lifting joint and tabulate torque/force")
    p.add_argument("--spec", required=True)
    p.add_argument("--load", required=True,
                   help=f"load preset: {', '.join(sorted(LOAD_PRESETS))}")
    p.add_argument("--sweep", default="0:45", help='degree interval "lo:hi"')
    p.add_argument("--joint", type=int, default=0, help="lifting joint index")
    p.add_argument("--samples", type=int, default=181)
    p.add_argument("--motor-limit", type=float, default=math.inf,
                   help="motor force budget [N] for the feasibility report")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_torque_table)

    p = sub.add_parser("ik", help="solve inverse kinematics for a tip target")
    p.add_argument("--spec", required=True)
    p.add_argument("--target", required=True, help='"X,Y,Z" in meters')
    p.add_argument("--seed", help='seed angles in degrees, e.g. "0,0,0"')
    p.set_defaults(func=cmd_ik)

    p = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--log", help="append stepped snapshots to this JSONL file")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("check", help="run the analytic-identity self tests")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
