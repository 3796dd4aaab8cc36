"""Serial-chain kinematics over rolling-contact joints.

Each link carries a frame at its tip (the far edge of its distal end
cylinder, which is also the zero-bend contact point of the next joint).
The frame-to-frame offset combines the rigid link span with the rolling
migration of the joint contact, so the effective tip-to-tip distance of
a bent joint is *not* constant. Links whose two end-cylinder axes are
orthogonal insert a 90 deg x-rotation into the frame chain, which is
what gives a mixed chain its out-of-plane motion.

The base mounting is itself a rolling joint onto a rigid cylinder, so
joint 1 uses the same geometry with the trestle playing the rear link.
"""

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import JointLimitError, SpecValidationError, StencilShiftWarning
from .hillberry import DEFAULT_ANGLE_LIMIT


class AxisRelation(str, Enum):
    """Relation between the rotation axes of a link's two end cylinders."""
    PARALLEL = "parallel"
    ORTHOGONAL = "orthogonal"


def rot_z(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_x(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


_ROT_X_90 = rot_x(0.5 * math.pi)


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """Frame-to-frame pose: 3x3 rotation plus translation [m]."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        t = np.asarray(self.translation, dtype=float)
        if r.shape != (3, 3) or t.shape != (3,):
            raise ValueError("rotation must be 3x3 and translation length 3")
        if np.max(np.abs(r @ r.T - np.eye(3))) > 1e-9:
            raise ValueError("rotation is not orthonormal within 1e-9")
        if abs(np.linalg.det(r) - 1.0) > 1e-9:
            raise ValueError("rotation determinant is not +1 within 1e-9")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    def compose(self, other):
        """self then other: maps other's frame into self's parent frame."""
        return RigidTransform(self.rotation @ other.rotation,
                              self.rotation @ other.translation + self.translation)

    def apply(self, point):
        return self.rotation @ np.asarray(point, dtype=float) + self.translation


@dataclass(frozen=True)
class LinkSpec:
    """Geometry and mass of one pneumatic bladder link.

    L: link length excluding the cylindrical ends [m]; D: end-cylinder
    diameter [m]; h: inflated mid-link height [m]; alpha: anchor ring
    position fraction; mass [kg]; axis_relation between the two end
    cylinders.
    """

    L: float
    D: float
    h: float
    alpha: float = 0.5
    mass: float = 0.15
    axis_relation: AxisRelation = AxisRelation.PARALLEL

    def __post_init__(self):
        problems = []
        for name in ("L", "D", "h", "mass"):
            if getattr(self, name) <= 0:
                problems.append((name, f"must be > 0, got {getattr(self, name)}"))
        if not (0.0 <= self.alpha <= 1.0):
            problems.append(("alpha", f"must be in [0, 1], got {self.alpha}"))
        if problems:
            raise SpecValidationError(problems)
        object.__setattr__(self, "axis_relation", AxisRelation(self.axis_relation))

    @property
    def reach(self):
        """Tip-to-tip span at zero bend [m]."""
        return self.L + self.D


def _default_gravity():
    # Base frame: arm extends along +x at zero pose, lifting bends toward +y.
    return np.array([0.0, -9.81, 0.0])


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """An ordered stack of links with per-joint limits and a gravity vector."""

    links: tuple
    joint_limits: tuple = None
    gravity: np.ndarray = field(default_factory=_default_gravity)
    base_transform: RigidTransform = field(default_factory=RigidTransform.identity)

    def __post_init__(self):
        links = tuple(self.links)
        problems = []
        if len(links) == 0:
            raise SpecValidationError([("links", "chain needs at least one link")])
        for i in range(len(links) - 1):
            if abs(links[i].D - links[i + 1].D) > 1e-12:
                problems.append((f"links[{i + 1}].D",
                                 f"end diameters must match across a joint "
                                 f"({links[i].D} vs {links[i + 1].D})"))
        limits = self.joint_limits
        if limits is None:
            limits = tuple((-DEFAULT_ANGLE_LIMIT, DEFAULT_ANGLE_LIMIT) for _ in links)
        else:
            limits = tuple((float(lo), float(hi)) for lo, hi in limits)
            if len(limits) != len(links):
                problems.append(("joint_limits",
                                 f"expected {len(links)} limit pairs, got {len(limits)}"))
            else:
                for j, (lo, hi) in enumerate(limits):
                    if not (lo < hi):
                        problems.append((f"joint_limits[{j}]", f"lo must be < hi, got ({lo}, {hi})"))
                    if lo < -DEFAULT_ANGLE_LIMIT - 1e-12 or hi > DEFAULT_ANGLE_LIMIT + 1e-12:
                        problems.append((f"joint_limits[{j}]",
                                         "limits exceed the +/-150 deg range of motion"))
        gravity = np.asarray(self.gravity, dtype=float)
        if gravity.shape != (3,) or not np.all(np.isfinite(gravity)):
            problems.append(("gravity", "must be a finite 3-vector"))
        if problems:
            raise SpecValidationError(problems)
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "joint_limits", limits)
        object.__setattr__(self, "gravity", gravity)

    @property
    def n_joints(self):
        return len(self.links)

    @property
    def total_reach(self):
        """Straight-pose tip distance from the base [m]."""
        return sum(link.reach for link in self.links)

    def check_angles(self, angles):
        angles = np.asarray(angles, dtype=float)
        if angles.shape != (self.n_joints,):
            raise ValueError(f"expected {self.n_joints} angles, got shape {angles.shape}")
        for j, (theta, (lo, hi)) in enumerate(zip(angles, self.joint_limits)):
            if not (lo <= theta <= hi):
                raise JointLimitError(theta, lo, hi, joint=j)
        return angles

    def clip_angles(self, angles):
        angles = np.asarray(angles, dtype=float)
        lo = np.array([l for l, _ in self.joint_limits])
        hi = np.array([h for _, h in self.joint_limits])
        return np.clip(angles, lo, hi)


def link_tip_offset(link: LinkSpec, theta, limit=DEFAULT_ANGLE_LIMIT):
    """Offset from the previous link's tip frame to this link's tip frame.

    Combines the roll of the contact point (the D*cos(theta/2) /
    D*sin(theta/2) terms) with the rigid span of the link rotated by the
    full joint angle. Returns a base-plane 3-vector [m] with z = 0.
    Pass limit=None to skip the range check (callers that validated
    against chain limits already).
    """
    if limit is not None and not (-limit <= theta <= limit):
        raise JointLimitError(theta, -limit, limit)
    c, s = math.cos(theta), math.sin(theta)
    ch, sh = math.cos(0.5 * theta), math.sin(0.5 * theta)
    half_d = 0.5 * link.D
    return np.array([
        -half_d + (link.L + half_d) * c + link.D * ch,
        (link.L + half_d) * s + link.D * sh,
        0.0,
    ])


def link_tip_offset_derivative(link: LinkSpec, theta):
    """Analytic d/dtheta of link_tip_offset; used by tests and self checks."""
    c, s = math.cos(theta), math.sin(theta)
    ch, sh = math.cos(0.5 * theta), math.sin(0.5 * theta)
    half_d = 0.5 * link.D
    return np.array([
        -(link.L + half_d) * s - half_d * sh,
        (link.L + half_d) * c + half_d * ch,
        0.0,
    ])


def link_transform(link: LinkSpec, theta, limit=DEFAULT_ANGLE_LIMIT):
    """Homogeneous transform from this link's tip frame to the previous one.

    Rotation is R_z(theta) for a parallel link and R_z(theta)*R_x(90deg)
    for an orthogonal one; translation is link_tip_offset.
    """
    offset = link_tip_offset(link, theta, limit)
    rot = rot_z(theta)
    if link.axis_relation == AxisRelation.ORTHOGONAL:
        rot = rot @ _ROT_X_90
    return RigidTransform(rot, offset)


def _accumulate(chain: ChainSpec, angles):
    """Cumulative frames: (frame before each link, frame at each link tip)."""
    before = []
    tips = []
    current = chain.base_transform
    for link, theta in zip(chain.links, angles):
        before.append(current)
        current = current.compose(link_transform(link, theta, limit=None))
        tips.append(current)
    return before, tips


def _tip_fast(chain: ChainSpec, angles):
    """Tip position without RigidTransform bookkeeping.

    Same arithmetic, in the same order, as forward_kinematics, so results
    are bit-identical; used by the IK/Jacobian/workspace hot loops where
    the per-construction orthonormality checks would dominate. Angles
    must already be validated.
    """
    r = chain.base_transform.rotation
    t = chain.base_transform.translation
    for link, theta in zip(chain.links, angles):
        t = r @ link_tip_offset(link, theta, limit=None) + t
        rot = rot_z(theta)
        if link.axis_relation == AxisRelation.ORTHOGONAL:
            rot = rot @ _ROT_X_90
        r = r @ rot
    return t


def forward_kinematics(chain: ChainSpec, angles):
    """Base-frame transform of every link tip; the last entry is the end effector."""
    angles = chain.check_angles(angles)
    _, tips = _accumulate(chain, angles)
    return tips


def tip_position(chain: ChainSpec, angles):
    """End-effector position [m] in the base frame."""
    return forward_kinematics(chain, angles)[-1].translation


def joint_frames(chain: ChainSpec, angles):
    """Base-frame transform of the frame each joint rotates in (one per joint).

    Joint j's axis is the z-axis of this frame; its rotation center at the
    current angle is offset from the frame origin by the rolling-contact
    migration.
    """
    angles = chain.check_angles(angles)
    before, _ = _accumulate(chain, angles)
    return before


def joint_rotation_centers(chain: ChainSpec, angles):
    """Base-frame rotation center of every joint at the current angles [m]."""
    angles = chain.check_angles(angles)
    before, _ = _accumulate(chain, angles)
    centers = []
    for frame, link, theta in zip(before, chain.links, angles):
        half_d = 0.5 * link.D
        local = np.array([-half_d + half_d * math.cos(0.5 * theta),
                          half_d * math.sin(0.5 * theta), 0.0])
        centers.append(frame.apply(local))
    return centers


def numeric_jacobian(chain: ChainSpec, angles, step=1e-6, warn_on_shift=True):
    """Central-difference position Jacobian of the tip, 3 x n_joints.

    Joints closer than `step` to a limit get a one-sided stencil instead
    (first order); a StencilShiftWarning is emitted unless suppressed.
    """
    angles = chain.check_angles(angles).copy()
    n = chain.n_joints
    jac = np.zeros((3, n))
    base_tip = None
    for j in range(n):
        lo, hi = chain.joint_limits[j]
        theta = angles[j]
        up_ok = theta + step <= hi
        down_ok = theta - step >= lo
        if up_ok and down_ok:
            angles[j] = theta + step
            plus = _tip_fast(chain, angles)
            angles[j] = theta - step
            minus = _tip_fast(chain, angles)
            jac[:, j] = (plus - minus) / (2.0 * step)
        else:
            if warn_on_shift:
                warnings.warn(
                    f"joint {j} at {math.degrees(theta):.3f} deg is within one "
                    f"step of its limit; using a one-sided stencil",
                    StencilShiftWarning, stacklevel=2)
            if base_tip is None:
                base_tip = _tip_fast(chain, angles)
            if up_ok:
                angles[j] = theta + step
                jac[:, j] = (_tip_fast(chain, angles) - base_tip) / step
            elif down_ok:
                angles[j] = theta - step
                jac[:, j] = (base_tip - _tip_fast(chain, angles)) / step
            else:
                raise JointLimitError(theta, lo, hi, joint=j)
        angles[j] = theta
    return jac


@dataclass(frozen=True, eq=False)
class IKResult:
    angles: np.ndarray
    residual: float
    converged: bool
    iterations: int


def _dls_run(chain, target, start, tol, max_iters, step_clamp, lam_sq,
             patience=25, min_improve=1e-10):
    """One damped-least-squares descent from `start`.

    Returns (best_angles, best_residual, iterations). Breaks out early
    when the best residual has not improved by `min_improve` for
    `patience` iterations, which is how corner jams (the raw step
    pointing into a joint-limit corner) get detected cheaply.
    """
    angles = start.copy()
    best = angles.copy()
    best_residual = float(np.linalg.norm(target - _tip_fast(chain, angles)))
    if best_residual < tol:
        return best, best_residual, 0
    eye3 = np.eye(3)
    stall = 0
    iterations = 0
    for iterations in range(1, max_iters + 1):
        err = target - _tip_fast(chain, angles)
        jac = numeric_jacobian(chain, angles, warn_on_shift=False)
        try:
            core = np.linalg.solve(jac @ jac.T + lam_sq * eye3, err)
        except np.linalg.LinAlgError:
            break
        delta = np.clip(jac.T @ core, -step_clamp, step_clamp)
        angles = chain.clip_angles(angles + delta)
        residual = float(np.linalg.norm(target - _tip_fast(chain, angles)))
        if residual < best_residual - min_improve:
            stall = 0
        else:
            stall += 1
        if residual < best_residual:
            best_residual = residual
            best = angles.copy()
        if best_residual < tol or stall >= patience:
            break
    return best, best_residual, iterations


def _restart_seeds(chain, target, max_seeds=16, grid_budget=4000):
    """Deterministic fold-branch seeds for a failed descent.

    A greedy descent commits early to a fold direction per joint and can
    jam in the wrong branch. Scoring a coarse joint-space grid by initial
    tip error and descending from the best few covers the other branches.
    The grid stays within `grid_budget` poses regardless of chain length;
    ties break on grid order so results are reproducible.
    """
    n = chain.n_joints
    per_joint = max(3, min(7, int(grid_budget ** (1.0 / n))))
    axes = [np.linspace(lo, hi, per_joint) for lo, hi in chain.joint_limits]
    grids = np.meshgrid(*axes, indexing="ij")
    rows = np.stack([g.reshape(-1) for g in grids], axis=1)
    scores = np.empty(rows.shape[0])
    for i, row in enumerate(rows):
        scores[i] = np.linalg.norm(target - _tip_fast(chain, row))
    order = np.argsort(scores, kind="stable")
    return [rows[i] for i in order[:max_seeds]]


def solve_ik(chain: ChainSpec, target, seed=None, *, tol=1e-4, max_iters=200,
             step_clamp=math.radians(10.0), damping=None):
    """Damped least-squares position IK with deterministic restarts.

    Each descent iterates d_theta = J^T (J J^T + lambda^2 I)^-1 e with a
    per-joint step clamp and projection onto the joint limits, stopping
    at tip residual < `tol` [m], after `max_iters` iterations, or when
    progress stalls. If the descent from `seed` fails (greedy steps can
    pick the wrong fold branch and jam in a joint-limit corner), it is
    retried from the best-scoring poses of a coarse joint-space grid; the
    first branch to converge wins, so results stay deterministic. With an
    unreachable target the best-effort angles and honest residual come
    back with converged=False.

    Seed-dependent by design: threading the previous solution as the next
    seed keeps teleop paths continuous (small moves converge from the
    seed directly and never reach the restart stage).
    """
    target = np.asarray(target, dtype=float)
    if target.shape != (3,) or not np.all(np.isfinite(target)):
        raise ValueError(f"target must be a finite 3-vector, got {target!r}")
    if seed is None:
        seed = np.zeros(chain.n_joints)
    start = chain.check_angles(seed).copy()
    if damping is None:
        damping = 0.01 * chain.total_reach
    lam_sq = damping * damping

    best, best_residual, total_iters = _dls_run(
        chain, target, start, tol, max_iters, step_clamp, lam_sq)
    if best_residual < tol:
        return IKResult(best, best_residual, True, total_iters)

    for restart in _restart_seeds(chain, target):
        angles, residual, iters = _dls_run(
            chain, target, restart, tol, max_iters, step_clamp, lam_sq)
        total_iters += iters
        if residual < best_residual:
            best_residual = residual
            best = angles
        if best_residual < tol:
            return IKResult(best, best_residual, True, total_iters)
    return IKResult(best, best_residual, False, total_iters)


MAX_WORKSPACE_POINTS = 10_000_000


@dataclass(frozen=True, eq=False)
class WorkspaceCloud:
    """Sampled tip positions with their generating angles (both row-aligned)."""

    points: np.ndarray      # (M, 3) tip positions [m]
    angles_rad: np.ndarray  # (M, n_joints)

    def to_csv(self, path):
        """CSV export: x_m,y_m,z_m,theta1_deg,...,thetaN_deg.

        LF line endings, up to 9 significant digits; byte-stable for
        identical inputs.
        """
        n = self.angles_rad.shape[1]
        header = "x_m,y_m,z_m," + ",".join(f"theta{j + 1}_deg" for j in range(n))
        lines = [header]
        angles_deg = np.degrees(self.angles_rad)
        for p, a in zip(self.points, angles_deg):
            vals = [f"{v:.9g}" for v in (*p, *a)]
            lines.append(",".join(vals))
        data = "\n".join(lines) + "\n"
        if hasattr(path, "write"):
            path.write(data)
        else:
            with open(path, "w", newline="") as fh:
                fh.write(data)
        return data


def sample_workspace(chain: ChainSpec, per_joint_ranges, resolution):
    """Tip positions over a Cartesian grid of joint angles.

    `per_joint_ranges` is one (lo, hi) radian interval per joint, each
    within that joint's limits; `resolution` is the number of grid points
    per joint (>= 2). Rows are ordered with the first joint varying
    slowest, so repeated runs produce identical output.
    """
    ranges = [(float(lo), float(hi)) for lo, hi in per_joint_ranges]
    if len(ranges) != chain.n_joints:
        raise ValueError(f"expected {chain.n_joints} ranges, got {len(ranges)}")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    for j, (lo, hi) in enumerate(ranges):
        jlo, jhi = chain.joint_limits[j]
        if lo < jlo - 1e-12 or hi > jhi + 1e-12 or lo > hi:
            raise JointLimitError(lo if lo < jlo else hi, jlo, jhi, joint=j)
    total = resolution ** chain.n_joints
    if total > MAX_WORKSPACE_POINTS:
        raise ValueError(
            f"{total} grid points exceed the {MAX_WORKSPACE_POINTS} cap")

    axes = [np.linspace(lo, hi, resolution) for lo, hi in ranges]
    grids = np.meshgrid(*axes, indexing="ij")
    angle_rows = np.stack([g.reshape(-1) for g in grids], axis=1)
    points = np.empty((angle_rows.shape[0], 3))
    for i, row in enumerate(angle_rows):
        points[i] = _tip_fast(chain, row)
    return WorkspaceCloud(points=points, angles_rad=angle_rows)
