"""Closed-form geometry of a single Hillberry rolling-contact joint.

Two cylindrical link ends of common diameter D roll on each other,
constrained by crossed straps wrapped around both cylinders. Bending the
joint by theta rolls the contact line around each cylinder by theta/2, so
the rotation center migrates along an arc of radius D/2 while the total
strap length stays constant.

Angles are radians everywhere in this package; degrees appear only at
external interfaces (CLI, wire protocol).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import JointLimitError

# Table-default half range of motion of one joint.
DEFAULT_ANGLE_LIMIT = math.radians(150.0)


def check_angle(theta, lo=-DEFAULT_ANGLE_LIMIT, hi=DEFAULT_ANGLE_LIMIT, joint=None):
    """Raise JointLimitError unless lo <= theta <= hi."""
    if not (lo <= theta <= hi):
        raise JointLimitError(theta, lo, hi, joint=joint)


def strap_length(diameter):
    """Constraint-strap length of a joint with end diameter `diameter` [m].

    The two tangent arcs always sum to pi*D/2 regardless of bend angle,
    which is what makes the strap act as a constraint.
    """
    if diameter < 0:
        raise ValueError(f"diameter must be >= 0, got {diameter}")
    return math.pi * diameter / 2.0


def rotation_center(diameter, theta, angle_limit=DEFAULT_ANGLE_LIMIT):
    """Instantaneous rotation center at bend angle `theta` [rad].

    Expressed in the joint frame whose origin is the center of the
    stationary end cylinder, x pointing at the mating cylinder at zero
    bend. The center (the rolling contact line) sits at radius D/2, at
    polar angle theta/2. Returns a length-2 array [x, y] in meters.
    """
    if diameter < 0:
        raise ValueError(f"diameter must be >= 0, got {diameter}")
    check_angle(theta, -angle_limit, angle_limit)
    half = 0.5 * theta
    return np.array([0.5 * diameter * math.cos(half), 0.5 * diameter * math.sin(half)])


@dataclass(frozen=True)
class JointGeometry:
    """One rolling-contact joint: shared end diameter and angular half range."""

    diameter: float
    angle_limit: float = DEFAULT_ANGLE_LIMIT

    def __post_init__(self):
        if self.diameter <= 0:
            raise ValueError(f"diameter must be > 0, got {self.diameter}")
        if not (0.0 < self.angle_limit <= math.pi):
            raise ValueError(f"angle_limit must be in (0, pi], got {self.angle_limit}")

    def strap_length(self):
        return strap_length(self.diameter)

    def rotation_center(self, theta):
        return rotation_center(self.diameter, theta, self.angle_limit)
