"""Robot spec files: the JSON schema shared by the CLI and POST /sessions.

Schema (degrees and SI units on the wire, radians internally):

    {
      "links": [{"L_m": 0.33, "D_m": 0.08, "h_m": 0.16, "alpha": 0.5,
                 "mass_kg": 0.15, "axis": "parallel" | "orthogonal"}, ...],
      "limits_deg": [[-150, 150], ...]   # or one number per joint (+/- half range)
      "gravity": [0, -9.81, 0],          # optional, base frame [m/s^2]
      "omega_max_deg_s": 30,             # optional, joint tracking rate limit
      "initial_angles_deg": [0, ...]     # optional, defaults to all zero
    }
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .chain import AxisRelation, ChainSpec, LinkSpec
from .errors import SpecValidationError

DEFAULT_OMEGA_MAX = math.radians(30.0)

# Physical parameters of the fabricated links (one row of the parameter
# table): 330 mm link length, 80 mm joint diameter, 160 mm inflated
# height, 0.15 kg per link, ring at mid-link.
TABLE1_LINK = {"L_m": 0.330, "D_m": 0.080, "h_m": 0.160,
               "alpha": 0.5, "mass_kg": 0.15}

# Membrane values from the same build: 100 kPa internal pressure, 0.35 mm
# tarpaulin, measured modulus band 320-560 MPa.
TABLE1_MEMBRANE = {"pressure_pa": 100e3, "radius_m": 0.080,
                   "youngs_modulus_pa": 560e6, "thickness_m": 0.35e-3}


@dataclass(frozen=True)
class RobotConfig:
    """A chain plus the session-level knobs carried in the same file."""

    chain: ChainSpec
    omega_max: float = DEFAULT_OMEGA_MAX
    initial_angles: tuple = None

    def __post_init__(self):
        if self.omega_max <= 0:
            raise SpecValidationError([("omega_max_deg_s", "must be > 0")])
        init = self.initial_angles
        if init is None:
            init = (0.0,) * self.chain.n_joints
        else:
            init = tuple(float(a) for a in init)
        object.__setattr__(self, "initial_angles", init)


def _require(cond, field_name, message, problems):
    if not cond:
        problems.append((field_name, message))
    return cond


def robot_config_from_dict(data):
    """Parse and validate the wire/file schema into a RobotConfig.

    Raises SpecValidationError carrying every field-level problem found,
    not just the first.
    """
    problems = []
    if not isinstance(data, dict):
        raise SpecValidationError([("$", f"expected an object, got {type(data).__name__}")])

    links_raw = data.get("links")
    links = []
    if not _require(isinstance(links_raw, list) and len(links_raw) >= 1,
                    "links", "must be a non-empty list", problems):
        raise SpecValidationError(problems)

    for i, entry in enumerate(links_raw):
        where = f"links[{i}]"
        if not isinstance(entry, dict):
            problems.append((where, "must be an object"))
            continue
        try:
            axis = entry.get("axis", "parallel")
            link = LinkSpec(
                L=float(entry["L_m"]),
                D=float(entry["D_m"]),
                h=float(entry["h_m"]),
                alpha=float(entry.get("alpha", 0.5)),
                mass=float(entry.get("mass_kg", 0.15)),
                axis_relation=AxisRelation(axis),
            )
            links.append(link)
        except KeyError as exc:
            problems.append((f"{where}.{exc.args[0]}", "missing required field"))
        except SpecValidationError as exc:
            problems.extend((f"{where}.{f}", m) for f, m in exc.problems)
        except (TypeError, ValueError) as exc:
            problems.append((where, str(exc)))

    n = len(links_raw)
    limits = None
    limits_raw = data.get("limits_deg")
    if limits_raw is not None:
        if not isinstance(limits_raw, list) or len(limits_raw) != n:
            problems.append(("limits_deg", f"must list one entry per joint ({n})"))
        else:
            limits = []
            for j, entry in enumerate(limits_raw):
                try:
                    if isinstance(entry, (list, tuple)):
                        lo, hi = (float(entry[0]), float(entry[1]))
                    else:
                        half = abs(float(entry))
                        lo, hi = -half, half
                    limits.append((math.radians(lo), math.radians(hi)))
                except (TypeError, ValueError, IndexError):
                    problems.append((f"limits_deg[{j}]",
                                     "must be a number or a [lo, hi] pair in degrees"))

    gravity = data.get("gravity", [0.0, -9.81, 0.0])
    try:
        gravity = np.asarray([float(v) for v in gravity], dtype=float)
        if gravity.shape != (3,):
            raise ValueError
    except (TypeError, ValueError):
        problems.append(("gravity", "must be a 3-vector [m/s^2]"))
        gravity = np.array([0.0, -9.81, 0.0])

    omega_raw = data.get("omega_max_deg_s", math.degrees(DEFAULT_OMEGA_MAX))
    try:
        omega_max = math.radians(float(omega_raw))
        if omega_max <= 0:
            problems.append(("omega_max_deg_s", "must be > 0"))
    except (TypeError, ValueError):
        problems.append(("omega_max_deg_s", "must be a number [deg/s]"))
        omega_max = DEFAULT_OMEGA_MAX

    initial = data.get("initial_angles_deg")
    if initial is not None:
        try:
            initial = tuple(math.radians(float(a)) for a in initial)
            if len(initial) != n:
                problems.append(("initial_angles_deg", f"must list {n} angles"))
        except (TypeError, ValueError):
            problems.append(("initial_angles_deg", "must be a list of degrees"))
            initial = None

    if problems:
        raise SpecValidationError(problems)

    try:
        chain = ChainSpec(links=tuple(links), joint_limits=limits, gravity=gravity)
        return RobotConfig(chain=chain, omega_max=omega_max, initial_angles=initial)
    except SpecValidationError:
        raise
    except ValueError as exc:
        raise SpecValidationError([("$", str(exc))])


def _deg(radians_value):
    # 9 decimals of a degree (3.6 microdeg) keeps config files readable
    return round(math.degrees(radians_value), 9)


def robot_config_to_dict(config: RobotConfig):
    chain = config.chain
    return {
        "links": [{
            "L_m": link.L, "D_m": link.D, "h_m": link.h, "alpha": link.alpha,
            "mass_kg": link.mass, "axis": link.axis_relation.value,
        } for link in chain.links],
        "limits_deg": [[_deg(lo), _deg(hi)] for lo, hi in chain.joint_limits],
        "gravity": [float(v) for v in chain.gravity],
        "omega_max_deg_s": _deg(config.omega_max),
        "initial_angles_deg": [_deg(a) for a in config.initial_angles],
    }


def load_robot_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return robot_config_from_dict(data)


def save_robot_file(path, config: RobotConfig):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(robot_config_to_dict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")


def table1_chain(n_dof, axes=None):
    """Fabricated-parameter chain with `n_dof` identical links.

    The 3-DoF arm alternates parallel/orthogonal/parallel so the middle
    joint folds out of plane; 1- and 2-DoF arms are planar.
    """
    if axes is None:
        if n_dof == 3:
            axes = ("parallel", "orthogonal", "parallel")
        else:
            axes = ("parallel",) * n_dof
    if len(axes) != n_dof:
        raise ValueError(f"expected {n_dof} axis relations, got {len(axes)}")
    links = tuple(LinkSpec(L=TABLE1_LINK["L_m"], D=TABLE1_LINK["D_m"],
                           h=TABLE1_LINK["h_m"], alpha=TABLE1_LINK["alpha"],
                           mass=TABLE1_LINK["mass_kg"],
                           axis_relation=AxisRelation(ax)) for ax in axes)
    return ChainSpec(links=links)


def table1_config(n_dof, axes=None):
    return RobotConfig(chain=table1_chain(n_dof, axes=axes))


def write_preset_files(directory):
    """Write presets/table1_{1,2,3}dof.json under `directory`; returns paths."""
    import os

    os.makedirs(directory, exist_ok=True)
    paths = []
    for n in (1, 2, 3):
        path = os.path.join(directory, f"table1_{n}dof.json")
        save_robot_file(path, table1_config(n))
        paths.append(path)
    return paths
