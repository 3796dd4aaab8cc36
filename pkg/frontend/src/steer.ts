/** Input-to-command translation: jog clamping, command rate limiting,
 * and gamepad axis integration. Pure logic, no DOM. */

import { ViewModel } from './viewmodel.js';

/** Clamp a jog increment against the joint's limits client-side. */
export function clampJog(
  vm: ViewModel, joint: number, currentDeg: number, deltaDeg: number,
): number {
  const [lo, hi] = vm.jointLimitsDeg(joint);
  return Math.min(hi, Math.max(lo, currentDeg + deltaDeg));
}

/** Jogged per-joint targets from the latest snapshot. */
export function jogTargets(
  vm: ViewModel, joint: number, deltaDeg: number,
): number[] | null {
  if (vm.snapshot === null) return null;
  const targets = [...vm.snapshot.targets_deg];
  targets[joint] = clampJog(vm, joint, targets[joint], deltaDeg);
  return targets;
}

/** Coalescing rate limiter: at most `hz` sends per second, always the
 * latest value; a trailing send fires once the window reopens. */
export class CommandRateLimiter<T> {
  private readonly minIntervalMs: number;
  private lastSentAt = -Infinity;
  private pending: T | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  sends = 0;

  constructor(
    private readonly send: (value: T) => void,
    hz = 20,
    private readonly now: () => number = () => Date.now(),
  ) {
    this.minIntervalMs = 1000 / hz;
  }

  offer(value: T): void {
    const wait = this.lastSentAt + this.minIntervalMs - this.now();
    if (wait <= 0) {
      this.fire(value);
      return;
    }
    this.pending = value;
    if (this.timer === null) {
      this.timer = setTimeout(() => {
        this.timer = null;
        if (this.pending !== null) {
          const next = this.pending;
          this.pending = null;
          this.fire(next);
        }
      }, wait);
    }
  }

  private fire(value: T): void {
    this.lastSentAt = this.now();
    this.sends += 1;
    this.send(value);
  }

  dispose(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    this.pending = null;
  }
}

/** Integrates gamepad axes into marker velocity in the tip plane:
 * left stick moves x/y (side view), right stick vertical moves z. */
export class GamepadSteering {
  /** m/s at full deflection */
  speed = 0.15;
  deadzone = 0.15;

  constructor(private readonly vm: ViewModel) {}

  integrate(axes: readonly number[], dtS: number): [number, number, number] | null {
    const ax = this.shape(axes[0] ?? 0);
    const ay = this.shape(axes[1] ?? 0);
    const az = this.shape(axes[3] ?? 0);
    if (ax === 0 && ay === 0 && az === 0) return null;
    const m = this.vm.markerM;
    // stick up (negative y axis) raises the marker
    const next: [number, number, number] = [
      m[0] + ax * this.speed * dtS,
      m[1] - ay * this.speed * dtS,
      m[2] + az * this.speed * dtS,
    ];
    this.vm.setMarker(next);
    return next;
  }

  private shape(value: number): number {
    return Math.abs(value) < this.deadzone ? 0 : value;
  }
}
