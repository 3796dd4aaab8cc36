"""Exception and warning types shared across the package."""

import math


class JointLimitError(ValueError):
    """An angle fell outside the joint's admissible range."""

    def __init__(self, angle, lo, hi, joint=None):
        self.angle = angle
        self.lo = lo
        self.hi = hi
        self.joint = joint
        where = "" if joint is None else f" (joint {joint})"
        super().__init__(
            f"angle {math.degrees(angle):.6g} deg outside "
            f"[{math.degrees(lo):.6g}, {math.degrees(hi):.6g}] deg{where}"
        )


class DegenerateGeometryError(ValueError):
    """Geometry collapsed below the resolvable scale (anchors coincide, zero moment arm)."""


class InfeasibleActuationError(ValueError):
    """A tension-only tendon was asked for a torque it cannot produce."""


class SpecValidationError(ValueError):
    """A robot spec failed validation; carries per-field diagnostics."""

    def __init__(self, problems):
        self.problems = [(str(f), str(m)) for f, m in problems]
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.problems))


class SessionNotFoundError(KeyError):
    def __init__(self, session_id):
        self.session_id = session_id
        super().__init__(f"unknown session {session_id!r}")


class StencilShiftWarning(UserWarning):
    """A finite-difference stencil was shifted one-sided to stay inside joint limits."""
