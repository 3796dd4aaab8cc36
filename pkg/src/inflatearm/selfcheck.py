"""Analytic-identity self tests runnable without a test framework.

`inflatearm check` runs these: quick closed-form identities that must
hold to roundoff if the geometry code is wired correctly. They are a
smoke screen for installs, not a replacement for the pytest suite.
"""

import math

import numpy as np

from . import chain as chain_mod
from . import hillberry, statics, tendon
from .session import Session
from .specio import table1_chain


def _two_arc_strap(D, theta_deg):
    """Independent strap oracle: sum the front and back tangent arcs."""
    return (math.pi * D * (90.0 - theta_deg / 2.0) / 360.0
            + math.pi * D * (90.0 + theta_deg / 2.0) / 360.0)


def run_self_checks():
    """Returns a list of (name, passed, detail) tuples."""
    results = []

    def check(name, passed, detail=""):
        results.append((name, bool(passed), detail))

    D, L, h = 0.080, 0.330, 0.160
    grid_deg = np.linspace(-150.0, 150.0, 301)

    worst = max(abs(_two_arc_strap(D, td) - hillberry.strap_length(D))
                / hillberry.strap_length(D) for td in grid_deg)
    check("strap length constant under bend angle", worst < 1e-12,
          f"worst rel err {worst:.2e}")

    worst = max(abs(np.linalg.norm(hillberry.rotation_center(D, math.radians(td)))
                    - D / 2.0) / (D / 2.0) for td in grid_deg)
    check("rotation center stays on the D/2 locus", worst < 1e-12,
          f"worst rel err {worst:.2e}")

    step = 1e-6
    worst = 0.0
    for td in np.linspace(-149.0, 149.0, 99):
        th = math.radians(td)
        fd = (hillberry.rotation_center(D, th + step)
              - hillberry.rotation_center(D, th - step)) / (2 * step)
        worst = max(worst, abs(np.linalg.norm(fd) - D / 4.0))
    check("rotation center speed equals D/4", worst < 1e-6,
          f"worst abs err {worst:.2e}")

    geom = tendon.TendonJointGeometry.symmetric(L, h, D)
    a0 = tendon.moment_arm_inner(geom, 0.0)
    b0 = tendon.moment_arm_inner_closed_form(L, h, 0.0)
    check("chord and closed-form arms agree at zero bend",
          abs(a0 - h / 2) < 1e-12 and abs(b0 - h / 2) < 1e-12,
          f"chord {a0:.12f}, closed form {b0:.12f}")

    th90 = math.radians(90.0)
    a90 = tendon.moment_arm_inner(geom, th90)
    b90 = tendon.moment_arm_inner_closed_form(L, h, th90)
    check("chord and closed-form arms diverge at 90 deg (documented)",
          abs(a90 - b90) > 0.1, f"chord {a90:.6f} vs closed form {b90:.6f}")

    ok = True
    for td in np.linspace(-150, 150, 61):
        th = math.radians(td)
        f = 7.25
        arm = tendon.moment_arm_outer(h, D, th)
        if abs(tendon.required_force(tendon.torque_from_force(arm, f), arm) - f) > 1e-12 * f:
            ok = False
    check("torque and tension round-trip exactly", ok)

    for n in (1, 2, 3):
        spec = table1_chain(n, axes=("parallel",) * n)
        tip = chain_mod.tip_position(spec, np.zeros(n))
        ok = np.allclose(tip, [0.410 * n, 0.0, 0.0], rtol=0, atol=1e-12)
        check(f"straight {n}-link arm tips at {0.410 * n:.3f} m", ok,
              f"tip {tip}")

    spec1 = table1_chain(1)
    worst = 0.0
    for td in np.linspace(-149.0, 149.0, 31):
        th = math.radians(td)
        jac = chain_mod.numeric_jacobian(spec1, [th])
        ana = chain_mod.link_tip_offset_derivative(spec1.links[0], th)
        worst = max(worst, float(np.max(np.abs(jac[:, 0] - ana))))
    check("numeric Jacobian matches analytic link derivative", worst < 1e-6,
          f"worst abs err {worst:.2e}")

    m = statics.MembraneSpec(pressure=100e3, radius=0.080,
                             youngs_modulus=560e6, thickness=0.35e-3)
    dr = statics.membrane_elongation(m)
    expect = 100e3 * 0.080 ** 2 / (560e6 * 0.35e-3)
    check("membrane elongation formula", abs(dr - expect) < 1e-15,
          f"delta_r {dr * 1e3:.4f} mm")

    sess = Session(table1_chain(1), omega_max=math.radians(30.0))
    sess.set_joint_targets([math.radians(60.0)])
    snap = sess.step(1.0)
    check("rate-limited step clamps to omega_max*dt",
          abs(snap.angles_deg[0] - 30.0) < 1e-12,
          f"angle after 1 s: {snap.angles_deg[0]:.6f} deg")

    return results


def main():
    results = run_self_checks()
    failures = 0
    for name, passed, detail in results:
        tag = "PASS" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"{tag}  {name}{suffix}")
        failures += 0 if passed else 1
    print(f"{len(results) - failures}/{len(results)} self checks passed")
    return 1 if failures else 0
