/** Canvas rendering: the arm in two 2-D projections (side x-y, top x-z),
 * links drawn as capsules of their inflated height, plus the target
 * marker and the live overlay table. */

import { RobotSnapshot } from './protocol.js';
import { ViewModel } from './viewmodel.js';

type Axis = 1 | 2; // snapshot vector component drawn on the screen y axis

export class Projection {
  readonly canvas: HTMLCanvasElement;
  private readonly ctx: CanvasRenderingContext2D;
  private readonly vAxis: Axis;
  private readonly label: string;
  /** pixels per meter and screen origin, fixed for a desk-scale arm */
  private readonly scale: number;
  private readonly originPx: [number, number];

  constructor(canvas: HTMLCanvasElement, vAxis: Axis, label: string) {
    this.canvas = canvas;
    const ctx = canvas.getContext('2d');
    if (ctx === null) throw new Error('no 2d context');
    this.ctx = ctx;
    this.vAxis = vAxis;
    this.label = label;
    this.scale = Math.min(canvas.width, canvas.height) / 3.2;
    this.originPx = [canvas.width * 0.5, canvas.height * 0.5];
  }

  toScreen(p: readonly number[]): [number, number] {
    return [
      this.originPx[0] + p[0] * this.scale,
      this.originPx[1] - p[this.vAxis] * this.scale,
    ];
  }

  toWorldDelta(dxPx: number, dyPx: number): { du: number; dv: number } {
    return { du: dxPx / this.scale, dv: -dyPx / this.scale };
  }

  get verticalAxis(): Axis {
    return this.vAxis;
  }

  draw(vm: ViewModel): void {
    const { ctx, canvas } = this;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    this.drawGrid();
    ctx.fillStyle = '#778';
    ctx.font = '13px system-ui';
    ctx.fillText(this.label, 10, 18);
    const snap = vm.snapshot;
    if (snap !== null) {
      this.drawArm(vm, snap);
    }
    this.drawMarker(vm);
  }

  private drawGrid(): void {
    const { ctx, canvas } = this;
    ctx.strokeStyle = '#e4e6ef';
    ctx.lineWidth = 1;
    const stepPx = 0.5 * this.scale;
    for (let x = this.originPx[0] % stepPx; x < canvas.width; x += stepPx) {
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, canvas.height);
      ctx.stroke();
    }
    for (let y = this.originPx[1] % stepPx; y < canvas.height; y += stepPx) {
      ctx.beginPath();
      ctx.moveTo(0, y);
      ctx.lineTo(canvas.width, y);
      ctx.stroke();
    }
    // base mount
    const [bx, by] = this.toScreen([0, 0, 0]);
    ctx.fillStyle = '#445';
    ctx.fillRect(bx - 6, by - 6, 12, 12);
  }

  private drawArm(vm: ViewModel, snap: RobotSnapshot): void {
    const { ctx } = this;
    const points: Array<[number, number]> = [this.toScreen([0, 0, 0])];
    for (const t of snap.link_transforms) {
      points.push(this.toScreen(t.translation_m));
    }
    ctx.lineCap = 'round';
    for (let i = 0; i < points.length - 1; i += 1) {
      const h = vm.spec.links[i]?.h_m ?? 0.16;
      ctx.strokeStyle = i === vm.selectedJoint && vm.mode === 'joint-jog'
        ? 'rgba(70, 130, 230, 0.85)' : 'rgba(120, 140, 180, 0.75)';
      ctx.lineWidth = Math.max(4, h * this.scale);
      ctx.beginPath();
      ctx.moveTo(points[i][0], points[i][1]);
      ctx.lineTo(points[i + 1][0], points[i + 1][1]);
      ctx.stroke();
    }
    // joint circles at the segment ends
    ctx.fillStyle = '#334';
    for (const [x, y] of points.slice(0, -1)) {
      ctx.beginPath();
      ctx.arc(x, y, 5, 0, 2 * Math.PI);
      ctx.fill();
    }
    // tip
    const [tx, ty] = points[points.length - 1];
    ctx.fillStyle = '#16324f';
    ctx.beginPath();
    ctx.arc(tx, ty, 6, 0, 2 * Math.PI);
    ctx.fill();
  }

  private drawMarker(vm: ViewModel): void {
    const { ctx } = this;
    const [mx, my] = this.toScreen(vm.markerM);
    ctx.strokeStyle = vm.markerState() === 'reachable' ? '#1d9e4f' : '#d23f3f';
    ctx.lineWidth = 2.5;
    ctx.beginPath();
    ctx.arc(mx, my, 9, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(mx - 13, my);
    ctx.lineTo(mx + 13, my);
    ctx.moveTo(mx, my - 13);
    ctx.lineTo(mx, my + 13);
    ctx.stroke();
  }
}

const FMT = (v: number, digits = 3) => v.toFixed(digits);

/** Per-joint readout table; every number is verbatim from the snapshot. */
export function renderOverlay(panel: HTMLElement, vm: ViewModel): void {
  const snap = vm.snapshot;
  if (snap === null) {
    panel.innerHTML = '<em>waiting for first snapshot…</em>';
    return;
  }
  const rows = snap.joints.map((j, i) => `
    <tr class="${i === vm.selectedJoint && vm.mode === 'joint-jog' ? 'sel' : ''}">
      <td>${i + 1}</td>
      <td>${FMT(j.angle_deg, 1)} / ${FMT(j.target_deg, 1)}</td>
      <td>${FMT(j.tendon_pull_inner_m * 1000, 1)} / ${FMT(j.tendon_pull_outer_m * 1000, 1)}</td>
      <td>${FMT(j.gravity_torque_nm, 2)}</td>
      <td>${FMT(j.required_force_n, 1)} (${j.force_side})</td>
      <td>${j.feasible ? 'ok' : 'infeasible'}</td>
    </tr>`).join('');
  const ik = snap.ik;
  panel.innerHTML = `
    <table>
      <thead><tr>
        <th>joint</th><th>angle / target [deg]</th><th>pull in/out [mm]</th>
        <th>torque [N·m]</th><th>force [N]</th><th></th>
      </tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <div class="statusline">
      t = ${FMT(snap.time_s, 2)} s ·
      tip (${snap.tip_m.map((v) => FMT(v)).join(', ')}) m ·
      payload ${FMT(snap.payload_kg, 2)} kg ·
      IK ${ik.converged ? 'converged' : `unreachable (residual ${FMT(ik.residual_m, 3)} m)`}
    </div>`;
}
