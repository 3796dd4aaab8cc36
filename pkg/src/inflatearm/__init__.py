"""Kinematics, tendon actuation, and quasi-static simulation for
inflatable arms built from pneumatic bladder links joined by
rolling-contact (Hillberry) joints."""

from .chain import (
    AxisRelation,
    ChainSpec,
    IKResult,
    LinkSpec,
    RigidTransform,
    WorkspaceCloud,
    forward_kinematics,
    link_tip_offset,
    link_transform,
    numeric_jacobian,
    sample_workspace,
    solve_ik,
    tip_position,
)
from .errors import (
    DegenerateGeometryError,
    InfeasibleActuationError,
    JointLimitError,
    SessionNotFoundError,
    SpecValidationError,
    StencilShiftWarning,
)
from .hillberry import DEFAULT_ANGLE_LIMIT, JointGeometry, rotation_center, strap_length
from .session import RobotSnapshot, Session, SessionManager
from .specio import RobotConfig, load_robot_file, table1_chain, table1_config
from .statics import (
    LOAD_PRESETS,
    LiftReport,
    LoadCase,
    MembraneSpec,
    gravity_torques,
    lift_feasibility,
    membrane_elongation,
    required_tendon_forces,
)
from .tendon import (
    TendonJointGeometry,
    TendonSide,
    anchor_positions,
    moment_arm_inner,
    moment_arm_inner_closed_form,
    moment_arm_outer,
    required_force,
    tendon_pull,
    torque_from_force,
)

__version__ = "0.1.0"
