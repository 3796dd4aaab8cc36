"""Stateful simulation sessions.

A session owns one chain's joint state and tracks commanded targets with
a first-order rate limit: each step moves each angle toward its target
by at most omega_max * dt. Tip targets go through the IK solver seeded with
the current angles so consecutive teleop commands stay continuous.
Snapshots are pure functions of session state; identical states
serialize to identical bytes, which is what the determinism checks pin.

Tendon pull lengths are referenced to the posture the session was
created in (string tensioned at the initial posture), matching how the
physical reels are zeroed.
"""

import json
import math
import threading
import uuid
from dataclasses import dataclass

import numpy as np

from . import statics, tendon
from .chain import ChainSpec, forward_kinematics, solve_ik
from .errors import SessionNotFoundError
from .specio import DEFAULT_OMEGA_MAX
from .statics import LoadCase
from .tendon import TendonSide


@dataclass(frozen=True)
class JointReadout:
    """Per-joint derived quantities carried in a snapshot."""

    angle_deg: float
    target_deg: float
    moment_arm_inner_m: float
    moment_arm_outer_m: float
    tendon_pull_inner_m: float
    tendon_pull_outer_m: float
    gravity_torque_nm: float
    required_force_n: float
    force_side: str
    feasible: bool

    def to_dict(self):
        return {
            "angle_deg": self.angle_deg,
            "target_deg": self.target_deg,
            "moment_arm_inner_m": self.moment_arm_inner_m,
            "moment_arm_outer_m": self.moment_arm_outer_m,
            "tendon_pull_inner_m": self.tendon_pull_inner_m,
            "tendon_pull_outer_m": self.tendon_pull_outer_m,
            "gravity_torque_nm": self.gravity_torque_nm,
            "required_force_n": self.required_force_n,
            "force_side": self.force_side,
            "feasible": self.feasible,
        }


@dataclass(frozen=True, eq=False)
class RobotSnapshot:
    """Full derived state of a session at one instant."""

    time_s: float
    angles_deg: list
    targets_deg: list
    tip_m: list
    link_transforms: list   # [{"rotation": 3x3 nested list, "translation_m": [..]}]
    joints: list            # [JointReadout]
    payload_kg: float
    ik_converged: bool
    ik_residual_m: float

    def to_dict(self):
        return {
            "time_s": self.time_s,
            "angles_deg": self.angles_deg,
            "targets_deg": self.targets_deg,
            "tip_m": self.tip_m,
            "link_transforms": self.link_transforms,
            "joints": [j.to_dict() for j in self.joints],
            "payload_kg": self.payload_kg,
            "ik": {"converged": self.ik_converged,
                   "residual_m": self.ik_residual_m},
        }

    def to_json(self):
        """Deterministic serialization: sorted keys, no whitespace variance."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"),
                          allow_nan=False)


class Session:
    """One simulated arm. Commands are serialized by an internal lock."""

    def __init__(self, chain: ChainSpec, initial_angles=None,
                 omega_max=DEFAULT_OMEGA_MAX, session_id=None):
        if omega_max <= 0:
            raise ValueError(f"omega_max must be > 0, got {omega_max}")
        if initial_angles is None:
            initial_angles = np.zeros(chain.n_joints)
        initial_angles = chain.check_angles(initial_angles).copy()
        self.session_id = session_id or uuid.uuid4().hex
        self.chain = chain
        self.omega_max = float(omega_max)
        self._lock = threading.Lock()
        self._angles = initial_angles
        self._targets = initial_angles.copy()
        self._reference = initial_angles.copy()
        self._clock = 0.0
        self._payload = 0.0
        self._ik_converged = True
        self._ik_residual = 0.0
        self._tendon_geoms = statics.tendon_geometries(chain)

    def set_joint_targets(self, targets):
        with self._lock:
            self._targets = self.chain.check_angles(targets).copy()

    def set_tip_target(self, position, payload_kg=0.0):
        """Aim the end effector at `position` via IK seeded with the pose now.

        Unreachable targets leave best-effort joint targets in place and
        mark the session's IK state non-converged; the payload mass rides
        into the statics overlay of subsequent snapshots.
        """
        if payload_kg < 0:
            raise ValueError(f"payload_kg must be >= 0, got {payload_kg}")
        with self._lock:
            result = solve_ik(self.chain, position, seed=self._angles)
            self._targets = result.angles.copy()
            self._ik_converged = bool(result.converged)
            self._ik_residual = float(result.residual)
            self._payload = float(payload_kg)
            return result

    def step(self, dt):
        """Advance the clock by dt, moving each angle toward its target
        by at most omega_max * dt."""
        if not (dt > 0):
            raise ValueError(f"dt must be > 0, got {dt}")
        if dt > 1.0:
            raise ValueError(f"dt must be <= 1 s, got {dt}")
        with self._lock:
            max_step = self.omega_max * dt
            delta = np.clip(self._targets - self._angles, -max_step, max_step)
            self._angles = self._angles + delta
            self._clock += dt
            return self._snapshot_locked()

    def snapshot(self):
        """Read-only derived state; no clock advance."""
        with self._lock:
            return self._snapshot_locked()

    def _snapshot_locked(self):
        chain = self.chain
        angles = self._angles
        tips = forward_kinematics(chain, angles)
        load = LoadCase(mass=self._payload, offset=chain.total_reach,
                        pose_angles=tuple(angles))
        torques = statics.gravity_torques(chain, angles, load)
        demands = statics.required_tendon_forces(chain, angles, torques)

        joints = []
        for j, geom in enumerate(self._tendon_geoms):
            theta = float(angles[j])
            ref = float(self._reference[j])
            outer_geom = tendon.TendonJointGeometry(
                L1=geom.L1, L2=geom.L2, h1=geom.h1, h2=geom.h2, D=geom.D,
                alpha1=geom.alpha1, alpha2=geom.alpha2,
                side=TendonSide.OUTER, angle_limit=geom.angle_limit)
            joints.append(JointReadout(
                angle_deg=math.degrees(theta),
                target_deg=math.degrees(float(self._targets[j])),
                moment_arm_inner_m=tendon.moment_arm_inner(geom, theta),
                moment_arm_outer_m=tendon.moment_arm_outer(
                    geom.h2, geom.D, theta, angle_limit=geom.angle_limit),
                tendon_pull_inner_m=tendon.tendon_pull(geom, ref, theta),
                tendon_pull_outer_m=tendon.tendon_pull(outer_geom, ref, theta),
                gravity_torque_nm=float(torques[j]),
                required_force_n=demands[j].force,
                force_side=demands[j].side.value,
                feasible=demands[j].feasible,
            ))

        return RobotSnapshot(
            time_s=self._clock,
            angles_deg=[math.degrees(a) for a in angles],
            targets_deg=[math.degrees(t) for t in self._targets],
            tip_m=[float(v) for v in tips[-1].translation],
            link_transforms=[{
                "rotation": [[float(v) for v in row] for row in t.rotation],
                "translation_m": [float(v) for v in t.translation],
            } for t in tips],
            joints=joints,
            payload_kg=self._payload,
            ik_converged=self._ik_converged,
            ik_residual_m=self._ik_residual,
        )


class SessionManager:
    """Session registry; optionally appends every stepped snapshot to a log."""

    def __init__(self, log_path=None):
        self._sessions = {}
        self._lock = threading.Lock()
        self._log_lock = threading.Lock()
        self._log = open(log_path, "a", encoding="utf-8") if log_path else None

    def create_session(self, chain, initial_angles=None,
                       omega_max=DEFAULT_OMEGA_MAX):
        session = Session(chain, initial_angles=initial_angles, omega_max=omega_max)
        with self._lock:
            self._sessions[session.session_id] = session
        return session.session_id

    def get(self, session_id) -> Session:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise SessionNotFoundError(session_id) from None

    def ids(self):
        with self._lock:
            return list(self._sessions)

    def remove(self, session_id):
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                raise SessionNotFoundError(session_id)

    def set_joint_targets(self, session_id, targets):
        self.get(session_id).set_joint_targets(targets)

    def set_tip_target(self, session_id, position, payload_kg=0.0):
        return self.get(session_id).set_tip_target(position, payload_kg)

    def step(self, session_id, dt):
        snap = self.get(session_id).step(dt)
        if self._log is not None:
            with self._log_lock:
                self._log.write(json.dumps({"session": session_id,
                                            **snap.to_dict()},
                                           sort_keys=True,
                                           separators=(",", ":")) + "\n")
                self._log.flush()
        return snap

    def snapshot(self, session_id):
        return self.get(session_id).snapshot()

    def step_all(self, dt):
        for session_id in self.ids():
            try:
                self.step(session_id, dt)
            except SessionNotFoundError:
                pass

    def close(self):
        if self._log is not None:
            self._log.close()
            self._log = None
