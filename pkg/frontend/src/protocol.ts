/** Wire types for the simulation service. Degrees, meters, newtons. */

export type AxisRelation = 'parallel' | 'orthogonal';

export type LinkSpec = {
  L_m: number;
  D_m: number;
  h_m: number;
  alpha: number;
  mass_kg: number;
  axis: AxisRelation;
};

export type RobotSpec = {
  links: LinkSpec[];
  limits_deg?: Array<[number, number] | number>;
  gravity?: [number, number, number];
  omega_max_deg_s?: number;
  initial_angles_deg?: number[];
};

export type JointReadout = {
  angle_deg: number;
  target_deg: number;
  moment_arm_inner_m: number;
  moment_arm_outer_m: number;
  tendon_pull_inner_m: number;
  tendon_pull_outer_m: number;
  gravity_torque_nm: number;
  required_force_n: number;
  force_side: 'inner' | 'outer';
  feasible: boolean;
};

export type LinkTransform = {
  rotation: number[][];
  translation_m: [number, number, number];
};

export type RobotSnapshot = {
  time_s: number;
  angles_deg: number[];
  targets_deg: number[];
  tip_m: [number, number, number];
  link_transforms: LinkTransform[];
  joints: JointReadout[];
  payload_kg: number;
  ik: { converged: boolean; residual_m: number };
};

/** Table-parameter 3-DoF arm: parallel / orthogonal / parallel. */
export function defaultRobotSpec(): RobotSpec {
  const link = (axis: AxisRelation): LinkSpec => ({
    L_m: 0.33, D_m: 0.08, h_m: 0.16, alpha: 0.5, mass_kg: 0.15, axis,
  });
  return {
    links: [link('parallel'), link('orthogonal'), link('parallel')],
    limits_deg: [[-150, 150], [-150, 150], [-150, 150]],
    gravity: [0, -9.81, 0],
    omega_max_deg_s: 30,
  };
}

/** Parse one stream frame; returns null for anything malformed. */
export function parseSnapshot(raw: string): RobotSnapshot | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== 'object' || data === null) return null;
  const snap = data as Record<string, unknown>;
  if (typeof snap.time_s !== 'number' || !Array.isArray(snap.angles_deg)
      || !Array.isArray(snap.tip_m) || !Array.isArray(snap.joints)) {
    return null;
  }
  return data as RobotSnapshot;
}

export function vec3Distance(
  a: readonly number[], b: readonly number[],
): number {
  const dx = a[0] - b[0];
  const dy = a[1] - b[1];
  const dz = a[2] - b[2];
  return Math.sqrt(dx * dx + dy * dy + dz * dz);
}
