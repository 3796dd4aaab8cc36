import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inflatearm.chain import ChainSpec, LinkSpec
from inflatearm.statics import (
    LOAD_PRESETS,
    LoadCase,
    MembraneSpec,
    gravity_torques,
    lift_feasibility,
    load_case_from_preset,
    membrane_elongation,
    payload_position,
    required_tendon_forces,
)
from inflatearm.tendon import TendonSide

G = 9.81
LIMIT = math.radians(150.0)


def massless_chain(n):
    # mass can't be zero by spec, so make it negligible instead
    links = tuple(LinkSpec(L=0.330, D=0.080, h=0.160, mass=1e-12)
                  for _ in range(n))
    return ChainSpec(links=links)


class TestGravityTorques:
    def test_one_dof_point_mass(self):
        chain = massless_chain(1)
        load = LoadCase(mass=5.0, offset=0.25, pose_angles=(0.0,))
        tau = gravity_torques(chain, [0.0], load)
        assert abs(tau[0]) == pytest.approx(5.0 * G * 0.25, rel=1e-9)
        assert tau[0] < 0  # gravity pulls the horizontal arm down

    def test_zero_gravity(self, chain3):
        chain = ChainSpec(links=chain3.links, gravity=[0.0, 0.0, 0.0])
        load = LoadCase(mass=5.0, offset=0.25, pose_angles=(0.0,) * 3)
        assert np.allclose(gravity_torques(chain, np.zeros(3), load), 0.0)

    def test_two_dof_text_scenario(self, chain2):
        load = LoadCase(mass=3.4, offset=0.60, pose_angles=(0.0, 0.0))
        tau = gravity_torques(chain2, [0.0, 0.0], load)
        # point-mass oracle: payload at 0.60 plus link centers at 0.205, 0.615
        oracle = 3.4 * G * 0.60 + 0.15 * G * 0.205 + 0.15 * G * 0.615
        assert abs(tau[0]) == pytest.approx(oracle, rel=1e-9)
        assert abs(tau[0]) == pytest.approx(21.21903, rel=1e-6)

    def test_downstream_only(self, chain2):
        # payload on link 1 exerts no torque about joint 2
        load = LoadCase(mass=5.0, offset=0.25, pose_angles=(0.0, 0.0))
        tau = gravity_torques(chain2, [0.0, 0.0], load)
        link_only = gravity_torques(chain2, [0.0, 0.0], None)
        assert tau[1] == pytest.approx(link_only[1], rel=1e-12)

    def test_linearity_in_mass(self):
        chain = massless_chain(2)
        angles = np.radians([25.0, -40.0])
        one = gravity_torques(chain, angles,
                              LoadCase(2.0, 0.5, tuple(angles)))
        two = gravity_torques(chain, angles,
                              LoadCase(4.0, 0.5, tuple(angles)))
        assert np.allclose(two, 2.0 * one, rtol=1e-12)

    def test_superposition(self, chain2):
        angles = np.radians([30.0, 20.0])
        load = LoadCase(mass=3.4, offset=0.60, pose_angles=tuple(angles))
        combined = gravity_torques(chain2, angles, load)
        links_only = gravity_torques(chain2, angles, None)
        payload_only = gravity_torques(massless_chain(2), angles, load)
        assert np.allclose(combined, links_only + payload_only, atol=1e-12)

    def test_horizontal_pose_maximizes_base_torque(self, chain2):
        load = LoadCase(mass=3.4, offset=0.60, pose_angles=(0.0, 0.0))
        worst = 0.0
        for theta in np.linspace(0.0, LIMIT, 151):
            tau = abs(gravity_torques(chain2, [theta, 0.0], load)[0])
            worst = max(worst, tau)
        at_zero = abs(gravity_torques(chain2, [0.0, 0.0], load)[0])
        assert at_zero == pytest.approx(worst, rel=1e-12)

    def test_payload_position_walks_the_chain(self, chain2):
        load = LoadCase(mass=1.0, offset=0.60, pose_angles=(0.0, 0.0))
        pos = payload_position(chain2, [0.0, 0.0], load)
        assert pos == pytest.approx([0.60, 0.0, 0.0], abs=1e-12)
        # bend joint 2: the attachment rides link 2 rigidly
        pos = payload_position(chain2, [0.0, math.radians(90.0)], load)
        assert np.linalg.norm(pos) < 0.60 + 1e-9


class TestRequiredTendonForces:
    def test_lifting_force(self, chain1):
        demands = required_tendon_forces(chain1, [0.0], [-5.0 * G * 0.25])
        assert demands[0].side is TendonSide.INNER
        assert demands[0].moment_arm == pytest.approx(0.080, rel=1e-12)
        assert demands[0].force == pytest.approx(153.28125, rel=1e-9)
        assert demands[0].feasible

    def test_zero_torque(self, chain1):
        demands = required_tendon_forces(chain1, [0.0], [0.0])
        assert demands[0].force == 0.0
        assert demands[0].feasible

    def test_positive_torque_loads_outer_side(self, chain1):
        demands = required_tendon_forces(chain1, [0.0], [2.0])
        assert demands[0].side is TendonSide.OUTER
        assert demands[0].force == pytest.approx(2.0 / 0.080, rel=1e-12)

    def test_round_trip_with_torque_from_force(self, chain1):
        from inflatearm.tendon import torque_from_force

        demands = required_tendon_forces(chain1, [0.3], [-4.0])
        back = torque_from_force(demands[0].moment_arm, demands[0].force)
        assert back == pytest.approx(4.0, rel=1e-12)

    def test_dimension_mismatch(self, chain2):
        with pytest.raises(ValueError):
            required_tendon_forces(chain2, [0.0, 0.0], [1.0])


class TestMembrane:
    def test_published_parameters(self):
        m = MembraneSpec(pressure=100e3, radius=0.080,
                         youngs_modulus=560e6, thickness=0.35e-3)
        assert membrane_elongation(m) == pytest.approx(0.0032653061224489797,
                                                       rel=1e-12)

    def test_scaling_in_radius(self):
        base = MembraneSpec(pressure=100e3, radius=0.040,
                            youngs_modulus=560e6, thickness=0.35e-3)
        double = MembraneSpec(pressure=100e3, radius=0.080,
                              youngs_modulus=560e6, thickness=0.35e-3)
        assert membrane_elongation(double) == pytest.approx(
            4.0 * membrane_elongation(base), rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            MembraneSpec(pressure=-1.0, radius=0.08,
                         youngs_modulus=560e6, thickness=0.35e-3)
        with pytest.raises(ValueError):
            MembraneSpec(pressure=100e3, radius=0.08,
                         youngs_modulus=1e12, thickness=0.35e-3)

    @settings(max_examples=100, deadline=None)
    @given(p=st.floats(1e2, 1e6), r=st.floats(1e-3, 1.0),
           e=st.floats(1e6, 1e11), t=st.floats(1e-5, 1e-2))
    def test_formula_property(self, p, r, e, t):
        m = MembraneSpec(pressure=p, radius=r, youngs_modulus=e, thickness=t)
        assert membrane_elongation(m) == pytest.approx(p * r * r / (e * t),
                                                       rel=1e-12)


class TestLiftFeasibility:
    def test_presets_available(self):
        assert set(LOAD_PRESETS) == {"1dof-text", "1dof-caption",
                                     "2dof-text", "2dof-caption"}

    def test_worst_case_at_horizontal(self):
        chain = massless_chain(1)
        load = LoadCase(mass=5.0, offset=0.25, pose_angles=(0.0,))
        report = lift_feasibility(chain, load, math.inf,
                                  (0.0, math.radians(45.0)))
        assert report.worst_torque == pytest.approx(5.0 * G * 0.25, rel=1e-9)
        assert report.worst_torque_angle_deg == pytest.approx(0.0, abs=1e-12)
        assert report.feasible

    def test_infinite_budget_always_feasible(self, chain2):
        load = load_case_from_preset("2dof-text", chain2)
        report = lift_feasibility(chain2, load, math.inf,
                                  (0.0, math.radians(45.0)))
        assert report.feasible
        assert report.margin == math.inf

    def test_hundred_newton_crossover(self):
        # Bisection oracle on independently written formulas: the inner
        # tendon force profile crosses 100 N at ~68.47 deg; below that the
        # sweep is infeasible, above it feasible (until the torque flips
        # sign and the outer tendon takes over with small forces).
        chain = massless_chain(1)
        load = LoadCase(mass=5.0, offset=0.25, pose_angles=(0.0,))

        def inner_arm(theta):
            c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
            rear = np.array([-0.165 * c - 0.04 + 0.08 * s, -0.165 * s + 0.08 * c])
            front = np.array([0.165 * c + 0.04 - 0.08 * s, 0.165 * s + 0.08 * c])
            cross = rear[0] * front[1] - rear[1] * front[0]
            return abs(cross) / np.linalg.norm(front - rear)

        def torque(theta):
            # payload fixed to the link at arc 0.25 from the joint center
            c2, s2 = math.cos(0.5 * theta), math.sin(0.5 * theta)
            tip = np.array([-0.04 + 0.37 * math.cos(theta) + 0.08 * c2,
                            0.37 * math.sin(theta) + 0.08 * s2])
            axis = np.array([math.cos(theta), math.sin(theta)])
            point = tip + (0.25 - 0.41) * axis
            center = np.array([-0.04 + 0.04 * c2, 0.04 * s2])
            arm_vec = point - center
            return arm_vec[0] * (-5.0 * G)  # z of cross(arm, m*g), g = -y

        def net(theta):
            return 100.0 * inner_arm(theta) - abs(torque(theta))

        lo, hi = math.radians(60.0), math.radians(90.0)
        assert net(lo) < 0 < net(hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if net(mid) < 0 else (lo, mid)
        root = 0.5 * (lo + hi)
        assert math.degrees(root) == pytest.approx(68.47248559519296, abs=1e-6)

        # sweep below the root: infeasible, worst case at horizontal
        report = lift_feasibility(chain, load, 100.0, (0.0, math.radians(45.0)))
        assert not report.feasible
        assert report.worst_force == pytest.approx(153.28125, rel=1e-6)
        assert report.worst_force_angle_deg == pytest.approx(0.0, abs=1e-12)

        # straddling the root: still infeasible below it
        report = lift_feasibility(chain, load, 100.0,
                                  (root - 0.05, root + 0.05), samples=5)
        assert not report.feasible

        # entirely above the root (up to the torque sign flip): feasible
        report = lift_feasibility(chain, load, 100.0,
                                  (root + 0.01, math.radians(90.0)))
        assert report.feasible

    def test_empty_sweep_rejected(self, chain1):
        load = load_case_from_preset("1dof-text", chain1)
        with pytest.raises(ValueError):
            lift_feasibility(chain1, load, 100.0, (0.5, 0.4))

    def test_report_serializes(self, chain1):
        load = load_case_from_preset("1dof-text", chain1)
        report = lift_feasibility(chain1, load, 200.0, (0.0, math.radians(45.0)))
        text = report.to_text()
        assert "worst_force_n" in text
        data = report.to_dict()
        assert data["feasible"] is (report.margin >= 0)

    def test_unknown_preset(self, chain1):
        with pytest.raises(KeyError):
            load_case_from_preset("9dof-text", chain1)


class TestLoadCaseValidation:
    def test_bounds(self):
        with pytest.raises(ValueError):
            LoadCase(mass=-1.0, offset=0.1)
        with pytest.raises(ValueError):
            LoadCase(mass=1.0, offset=-0.1)
