"""Quasi-static gravity loading, tendon force sizing, membrane elongation.

Motions of interest take on the order of a minute, so inertial torques
are ignored: every joint torque comes from link weight and payload
weight about the joint's *current* rotation center (which migrates with
angle on a rolling joint). Each joint is driven by a tension-only
inner/outer tendon pair; the side whose pull opposes the load is sized,
the other idles.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import tendon
from .chain import ChainSpec, forward_kinematics, joint_frames, joint_rotation_centers
from .errors import DegenerateGeometryError
from .tendon import TendonJointGeometry, TendonSide


@dataclass(frozen=True)
class MembraneSpec:
    """Thin-walled bladder membrane under internal pressure."""

    pressure: float        # [Pa]
    radius: float          # [m]
    youngs_modulus: float  # [Pa]
    thickness: float       # [m]

    def __post_init__(self):
        for name in ("pressure", "radius", "youngs_modulus", "thickness"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if not (1e6 <= self.youngs_modulus <= 1e11):
            raise ValueError(
                f"youngs_modulus {self.youngs_modulus:.3g} Pa outside the "
                f"[1e6, 1e11] sanity band")


def membrane_elongation(m: MembraneSpec):
    """Radial elongation of the pressurized membrane: p r^2 / (E t) [m]."""
    return m.pressure * m.radius ** 2 / (m.youngs_modulus * m.thickness)


@dataclass(frozen=True)
class LoadCase:
    """A payload hung on the arm plus the pose it is analyzed in.

    `offset` is the attachment arc length from the base joint center
    measured along the link centerlines at the zero pose; the payload
    then rides rigidly on the link that spans that arc length (or on the
    final link, beyond its tip, if offset exceeds the arm).
    """

    mass: float
    offset: float
    pose_angles: tuple = ()

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError(f"mass must be >= 0, got {self.mass}")
        if self.offset < 0:
            raise ValueError(f"offset must be >= 0, got {self.offset}")
        object.__setattr__(self, "pose_angles", tuple(float(a) for a in self.pose_angles))


# Lifting scenario presets: (payload mass [kg], offset from base [m]).
# Text and figure-caption variants pair the numbers differently; both
# ship, neither is asserted as ground truth.
LOAD_PRESETS = {
    "1dof-text": (5.0, 0.25),
    "1dof-caption": (5.0, 0.60),
    "2dof-text": (3.4, 0.60),
    "2dof-caption": (3.4, 0.25),
}


def load_case_from_preset(name, chain: ChainSpec):
    try:
        mass, offset = LOAD_PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown load preset {name!r}; choose from {sorted(LOAD_PRESETS)}")
    return LoadCase(mass=mass, offset=offset, pose_angles=(0.0,) * chain.n_joints)


def payload_position(chain: ChainSpec, angles, load: LoadCase):
    """Base-frame position of the payload attachment point [m]."""
    tips = forward_kinematics(chain, angles)
    spans = np.cumsum([link.reach for link in chain.links])
    k = int(np.searchsorted(spans, load.offset))
    if k >= chain.n_joints:
        k = chain.n_joints - 1  # beyond the tip: rides the final link
    local = np.array([load.offset - spans[k], 0.0, 0.0])
    return tips[k].apply(local)


def link_mass_points(chain: ChainSpec, angles):
    """Base-frame center of mass of every link [m].

    Uniform membrane: the center sits midway along the link's tip-to-tip
    span, i.e. (L + D) / 2 from the joint's current rotation center along
    the link axis.
    """
    frames = joint_frames(chain, angles)
    centers = joint_rotation_centers(chain, angles)
    points = []
    for frame, center, link, theta in zip(frames, centers, chain.links, angles):
        axis = frame.rotation @ np.array([math.cos(theta), math.sin(theta), 0.0])
        points.append(center + 0.5 * link.reach * axis)
    return points


def gravity_torques(chain: ChainSpec, angles, load: LoadCase = None):
    """Signed gravity torque about every joint axis [N*m].

    For joint j, sums (p_mass - p_center_j) x m*g over the centers of
    mass of links j..N and the payload (when it hangs at or beyond joint
    j), projected on the joint axis. Positive torque is the direction of
    increasing joint angle.
    """
    angles = chain.check_angles(angles)
    frames = joint_frames(chain, angles)
    centers = joint_rotation_centers(chain, angles)
    masses = link_mass_points(chain, angles)
    g = chain.gravity

    spans = np.cumsum([link.reach for link in chain.links])
    payload = None
    payload_joint = 0
    if load is not None and load.mass > 0:
        payload = payload_position(chain, angles, load)
        payload_joint = min(int(np.searchsorted(spans, load.offset)),
                            chain.n_joints - 1)

    torques = np.zeros(chain.n_joints)
    for j in range(chain.n_joints):
        axis = frames[j].rotation[:, 2]
        total = 0.0
        for k in range(j, chain.n_joints):
            total += np.dot(np.cross(masses[k] - centers[j], chain.links[k].mass * g), axis)
        if payload is not None and payload_joint >= j:
            total += np.dot(np.cross(payload - centers[j], load.mass * g), axis)
        torques[j] = total
    return torques


def tendon_geometries(chain: ChainSpec):
    """Per-joint tendon geometry; the trestle mirrors link 1 for joint 1."""
    geoms = []
    for j, front in enumerate(chain.links):
        rear = chain.links[j - 1] if j > 0 else front
        lo, hi = chain.joint_limits[j]
        geoms.append(TendonJointGeometry(
            L1=rear.L, L2=front.L, h1=rear.h, h2=front.h, D=front.D,
            alpha1=rear.alpha, alpha2=front.alpha,
            angle_limit=max(abs(lo), abs(hi))))
    return geoms


@dataclass(frozen=True)
class TendonDemand:
    """Holding requirement of one joint's antagonistic tendon pair."""

    force: float        # [N] tension on the working side
    side: TendonSide    # which tendon opposes the load
    moment_arm: float   # [m] arm of the working side
    feasible: bool

    def to_dict(self):
        return {"force_n": self.force, "side": self.side.value,
                "moment_arm_m": self.moment_arm, "feasible": self.feasible}


def required_tendon_forces(chain: ChainSpec, angles, torques):
    """Tension each joint's opposing tendon must hold against `torques`.

    A gravity torque pulling toward -theta is opposed by the inner
    (flexion) tendon, one toward +theta by the outer tendon. Zero torque
    needs zero tension. Infeasible when the working side's moment arm is
    degenerate or reversed.
    """
    angles = chain.check_angles(angles)
    torques = np.asarray(torques, dtype=float)
    if torques.shape != (chain.n_joints,):
        raise ValueError(f"expected {chain.n_joints} torques, got {torques.shape}")
    demands = []
    for geom, theta, tau in zip(tendon_geometries(chain), angles, torques):
        if tau <= 0:
            side = TendonSide.INNER
            arm = tendon.moment_arm_inner(geom, theta)
        else:
            side = TendonSide.OUTER
            arm = tendon.moment_arm_outer(geom.h2, geom.D, theta,
                                          angle_limit=geom.angle_limit)
        try:
            force = tendon.required_force(abs(tau), arm)
            feasible = True
        except DegenerateGeometryError:
            force = math.inf
            feasible = False
        demands.append(TendonDemand(force=force, side=side, moment_arm=arm,
                                    feasible=feasible))
    return demands


@dataclass(frozen=True)
class LiftReport:
    """Worst case of a lifting sweep against a motor force budget."""

    joint: int
    sweep_deg: tuple
    samples: int
    motor_force_limit: float
    worst_torque: float
    worst_torque_angle_deg: float
    worst_force: float
    worst_force_angle_deg: float
    worst_force_side: TendonSide
    margin: float
    feasible: bool

    def to_dict(self):
        return {
            "joint": self.joint,
            "sweep_deg": list(self.sweep_deg),
            "samples": self.samples,
            "motor_force_limit_n": self.motor_force_limit,
            "worst_torque_nm": self.worst_torque,
            "worst_torque_angle_deg": self.worst_torque_angle_deg,
            "worst_force_n": self.worst_force,
            "worst_force_angle_deg": self.worst_force_angle_deg,
            "worst_force_side": self.worst_force_side.value,
            "margin_n": self.margin,
            "feasible": self.feasible,
        }

    def to_text(self):
        lines = ["lift feasibility report"]
        for key, val in self.to_dict().items():
            if isinstance(val, float):
                val = f"{val:.6g}"
            lines.append(f"  {key}: {val}")
        return "\n".join(lines)


def lift_feasibility(chain: ChainSpec, load: LoadCase, motor_force_limit,
                     sweep, joint=0, samples=181):
    """Sweep one joint through `sweep` (radian interval) holding `load`.

    The other joints stay at the load case's pose angles. Reports the
    worst gravity torque magnitude, the worst required tendon tension and
    where both occur, plus the margin against `motor_force_limit`.
    """
    lo, hi = float(sweep[0]), float(sweep[1])
    if not (lo <= hi):
        raise ValueError(f"empty sweep ({lo}, {hi})")
    jlo, jhi = chain.joint_limits[joint]
    if lo < jlo or hi > jhi:
        raise ValueError(
            f"sweep [{math.degrees(lo):.4g}, {math.degrees(hi):.4g}] deg exceeds "
            f"joint {joint} limits")
    if samples < 1:
        raise ValueError("samples must be >= 1")

    pose = np.array(load.pose_angles if load.pose_angles
                    else (0.0,) * chain.n_joints, dtype=float)
    if pose.shape != (chain.n_joints,):
        raise ValueError(f"pose_angles must have {chain.n_joints} entries")

    grid = np.linspace(lo, hi, samples) if samples > 1 else np.array([lo])
    worst_torque = worst_force = -math.inf
    worst_torque_angle = worst_force_angle = grid[0]
    worst_side = TendonSide.INNER
    all_feasible = True
    for theta in grid:
        angles = pose.copy()
        angles[joint] = theta
        taus = gravity_torques(chain, angles, load)
        tau = taus[joint]
        demand = required_tendon_forces(chain, angles, taus)[joint]
        if abs(tau) > worst_torque:
            worst_torque = abs(tau)
            worst_torque_angle = theta
        if demand.force > worst_force:
            worst_force = demand.force
            worst_force_angle = theta
            worst_side = demand.side
        all_feasible = all_feasible and demand.feasible

    margin = motor_force_limit - worst_force
    return LiftReport(
        joint=joint,
        sweep_deg=(math.degrees(lo), math.degrees(hi)),
        samples=len(grid),
        motor_force_limit=motor_force_limit,
        worst_torque=worst_torque,
        worst_torque_angle_deg=math.degrees(worst_torque_angle),
        worst_force=worst_force,
        worst_force_angle_deg=math.degrees(worst_force_angle),
        worst_force_side=worst_side,
        margin=margin,
        feasible=all_feasible and margin >= 0,
    )
