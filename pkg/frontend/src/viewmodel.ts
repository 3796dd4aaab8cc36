/** UI state derived from the snapshot stream plus operator inputs.
 *
 * Physics values shown in the overlay come verbatim from snapshots; the
 * view model never recomputes them. The target marker always exists and
 * carries the last IK convergence flag for its coloring.
 */

import { ConnectionStatus } from './client.js';
import { RobotSnapshot, RobotSpec } from './protocol.js';

export type InputMode = 'joint-jog' | 'tip-drag';

export type Toast = {
  seq: number;
  text: string;
  kind: 'info' | 'error';
};

export class ViewModel {
  readonly spec: RobotSpec;
  snapshot: RobotSnapshot | null = null;
  status: ConnectionStatus = 'closed';
  mode: InputMode = 'tip-drag';
  payloadKg = 0.0;
  selectedJoint = 0;

  /** marker the operator drags; initialized from the first snapshot */
  markerM: [number, number, number] = [0, 0, 0];
  markerInitialized = false;
  lastCommandConverged = true;

  framesApplied = 0;
  toasts: Toast[] = [];
  private toastSeq = 0;

  constructor(spec: RobotSpec) {
    this.spec = spec;
  }

  applySnapshot(snap: RobotSnapshot): void {
    this.snapshot = snap;
    this.framesApplied += 1;
    if (!this.markerInitialized) {
      this.markerM = [...snap.tip_m];
      this.markerInitialized = true;
    }
  }

  applyStatus(status: ConnectionStatus): void {
    this.status = status;
  }

  get nJoints(): number {
    return this.spec.links.length;
  }

  jointLimitsDeg(j: number): [number, number] {
    const entry = this.spec.limits_deg?.[j];
    if (entry === undefined) return [-150, 150];
    if (typeof entry === 'number') return [-Math.abs(entry), Math.abs(entry)];
    return entry;
  }

  toggleMode(): InputMode {
    this.mode = this.mode === 'tip-drag' ? 'joint-jog' : 'tip-drag';
    return this.mode;
  }

  selectJoint(j: number): void {
    if (j >= 0 && j < this.nJoints) this.selectedJoint = j;
  }

  setMarker(position: readonly number[]): void {
    this.markerM = [position[0], position[1], position[2]];
    this.markerInitialized = true;
  }

  recordCommandResult(converged: boolean | undefined, detail?: string): void {
    if (converged !== undefined) this.lastCommandConverged = converged;
    if (detail !== undefined) this.pushToast(detail, 'error');
  }

  /** marker color reflects the last IK convergence flag */
  markerState(): 'reachable' | 'unreachable' {
    const snapConverged = this.snapshot?.ik.converged ?? true;
    return this.lastCommandConverged && snapConverged
      ? 'reachable' : 'unreachable';
  }

  pushToast(text: string, kind: Toast['kind'] = 'info'): Toast {
    const toast = { seq: this.toastSeq++, text, kind };
    this.toasts.push(toast);
    if (this.toasts.length > 6) this.toasts.shift();
    return toast;
  }

  dismissToast(seq: number): void {
    this.toasts = this.toasts.filter((t) => t.seq !== seq);
  }
}
