"""Tendon routing geometry for one rolling-contact joint.

A joint is driven by a string anchored to rings on the two adjacent
links. Everything here lives in the joint mid-frame with the
instantaneous rotation center at the origin: anchor positions, the
inner (flexion-side) and outer (extension-side) moment arms, the
torque/tension conversion, and the pull length a reel motor must wind
relative to a reference posture.

Two inner moment-arm routes are provided on purpose. The chord route
(`moment_arm_inner`) is the perpendicular distance from the origin to the
line through the two anchor points and follows mechanically from the
anchor formulas; the symmetric closed form
(`moment_arm_inner_closed_form`) is the published shortcut for identical
links with mid-mounted rings. They agree at zero bend but diverge away
from it; the chord route is the one used for force sizing.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import DegenerateGeometryError, InfeasibleActuationError
from .hillberry import DEFAULT_ANGLE_LIMIT, check_angle

# Degeneracy threshold, far below fabrication tolerance (~0.2 mm).
EPS_GEOMETRY = 1e-9


class TendonSide(str, Enum):
    INNER = "inner"
    OUTER = "outer"


@dataclass(frozen=True)
class TendonJointGeometry:
    """Anchor geometry of one tendon crossing one joint.

    L1/h1/alpha1 describe the rear link, L2/h2/alpha2 the front link:
    link length excluding the cylindrical ends [m], inflated mid-link
    height [m], and the anchor ring position as a fraction of the link
    length measured from the link's base-side end (0.5 = ring at the
    middle of the link). D is the common joint diameter [m].
    """

    L1: float
    L2: float
    h1: float
    h2: float
    D: float
    alpha1: float = 0.5
    alpha2: float = 0.5
    side: TendonSide = TendonSide.INNER
    angle_limit: float = DEFAULT_ANGLE_LIMIT

    def __post_init__(self):
        for name in ("L1", "L2", "h1", "h2", "D"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("alpha1", "alpha2"):
            if not (0.0 <= getattr(self, name) <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {getattr(self, name)}")
        object.__setattr__(self, "side", TendonSide(self.side))

    @classmethod
    def symmetric(cls, L, h, D, alpha=0.5, side=TendonSide.INNER,
                  angle_limit=DEFAULT_ANGLE_LIMIT):
        """Identical links front and rear."""
        return cls(L1=L, L2=L, h1=h, h2=h, D=D, alpha1=alpha, alpha2=alpha,
                   side=side, angle_limit=angle_limit)


def anchor_positions(g: TendonJointGeometry, theta):
    """Anchor points of the rear and front links at bend angle theta.

    Returned in the joint mid-frame (rotation center at the origin) as a
    pair of length-2 arrays. The inner side uses the published anchor
    formulas; the outer side mirrors the height terms to -h/2, modeling
    the string images on the extension surface.
    """
    check_angle(theta, -g.angle_limit, g.angle_limit)
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    sign = 1.0 if g.side == TendonSide.INNER else -1.0
    rear = np.array([
        -(1.0 - g.alpha1) * g.L1 * c - 0.5 * g.D + sign * 0.5 * g.h1 * s,
        -(1.0 - g.alpha1) * g.L1 * s + sign * 0.5 * g.h1 * c,
    ])
    front = np.array([
        g.alpha2 * g.L2 * c + 0.5 * g.D - sign * 0.5 * g.h2 * s,
        g.alpha2 * g.L2 * s + sign * 0.5 * g.h2 * c,
    ])
    return rear, front


def chord_length(g: TendonJointGeometry, theta):
    """Straight-line anchor-to-anchor distance at bend angle theta [m]."""
    rear, front = anchor_positions(g, theta)
    return float(np.linalg.norm(front - rear))


def moment_arm_inner(g: TendonJointGeometry, theta):
    """Inner moment arm from the anchor chord [m].

    Perpendicular distance from the rotation center (origin) to the line
    through the two inner anchor points: |rear x front| / |rear - front|.
    """
    inner = g if g.side == TendonSide.INNER else replace(g, side=TendonSide.INNER)
    rear, front = anchor_positions(inner, theta)
    span = float(np.linalg.norm(front - rear))
    if span <= EPS_GEOMETRY:
        raise DegenerateGeometryError(
            f"anchor points coincide (span {span:.3e} m) at theta={theta:.6g}")
    cross = rear[0] * front[1] - rear[1] * front[0]
    return abs(cross) / span


def moment_arm_inner_closed_form(L, h, theta):
    """Published symmetric closed form: (L sin(theta/2) + h cos(theta/2)) / 2.

    Valid under the symmetric assumption (equal links, mid-mounted
    rings). Diverges from the chord route away from theta = 0; kept as
    its own operation so both can be compared.
    """
    if L < 0 or h < 0:
        raise ValueError("L and h must be >= 0")
    return 0.5 * (L * math.sin(0.5 * theta) + h * math.cos(0.5 * theta))


def moment_arm_outer(h, D, theta, angle_limit=DEFAULT_ANGLE_LIMIT):
    """Outer moment arm for a string routed along the link's outside [m]:
    (h + D sin(theta/2)) / 2."""
    if h < 0 or D < 0:
        raise ValueError("h and D must be >= 0")
    check_angle(theta, -angle_limit, angle_limit)
    return 0.5 * (h + D * math.sin(0.5 * theta))


def torque_from_force(moment_arm, force):
    """Joint torque produced by tendon tension `force` at `moment_arm` [N*m]."""
    if force < 0:
        raise ValueError(f"tendon tension must be >= 0, got {force}")
    return moment_arm * force


def required_force(torque, moment_arm):
    """Tension needed for `torque` at `moment_arm` [N].

    The tendon only pulls: a negative torque request (one this tendon's
    pull direction cannot produce) raises InfeasibleActuationError rather
    than returning a negative tension.
    """
    if moment_arm <= EPS_GEOMETRY:
        raise DegenerateGeometryError(
            f"moment arm {moment_arm:.3e} m is degenerate")
    if torque < 0:
        raise InfeasibleActuationError(
            f"torque {torque:.6g} N*m opposes this tendon's pull direction")
    return torque / moment_arm


def tendon_pull(g: TendonJointGeometry, theta_ref, theta):
    """String length wound in when moving from theta_ref to theta [m].

    Chord model on the geometry's side: pull = |chord(theta_ref)| -
    |chord(theta)|. Positive means the reel takes string in (the anchors
    approached each other); antisymmetric in (theta_ref, theta).
    """
    return chord_length(g, theta_ref) - chord_length(g, theta)
