import { describe, expect, it, vi } from 'vitest';

import { defaultRobotSpec, RobotSnapshot } from '../src/protocol.js';
import { clampJog, CommandRateLimiter, GamepadSteering, jogTargets } from '../src/steer.js';
import { ViewModel } from '../src/viewmodel.js';

function vmWithSnapshot(targetsDeg: number[]): ViewModel {
  const vm = new ViewModel(defaultRobotSpec());
  const snap: RobotSnapshot = {
    time_s: 0,
    angles_deg: [...targetsDeg],
    targets_deg: targetsDeg,
    tip_m: [1.23, 0, 0],
    link_transforms: [],
    joints: [],
    payload_kg: 0,
    ik: { converged: true, residual_m: 0 },
  };
  vm.applySnapshot(snap);
  return vm;
}

describe('jog clamping', () => {
  it('clamps to the joint limits client-side', () => {
    const vm = vmWithSnapshot([149, 0, 0]);
    expect(clampJog(vm, 0, 149, 5)).toBe(150);
    expect(clampJog(vm, 0, -149, -5)).toBe(-150);
    expect(clampJog(vm, 0, 10, 5)).toBe(15);
  });

  it('jogTargets edits only the selected joint', () => {
    const vm = vmWithSnapshot([10, 20, 30]);
    expect(jogTargets(vm, 1, 2)).toEqual([10, 22, 30]);
    expect(jogTargets(new ViewModel(defaultRobotSpec()), 0, 2)).toBeNull();
  });
});

describe('CommandRateLimiter', () => {
  it('never exceeds the configured rate and keeps the latest value', async () => {
    vi.useFakeTimers();
    const sent: number[] = [];
    const limiter = new CommandRateLimiter<number>((v) => sent.push(v), 20);
    for (let i = 0; i < 50; i += 1) {
      limiter.offer(i);
      vi.advanceTimersByTime(10); // 100 Hz of input
    }
    vi.advanceTimersByTime(100);
    // 500 ms of input at 20 Hz budget -> at most ~11 sends, last value wins
    expect(sent.length).toBeLessThanOrEqual(12);
    expect(sent[sent.length - 1]).toBe(49);
    expect(sent[0]).toBe(0);
    limiter.dispose();
    vi.useRealTimers();
  });

  it('sends immediately when idle', () => {
    vi.useFakeTimers();
    const sent: string[] = [];
    const limiter = new CommandRateLimiter<string>((v) => sent.push(v), 20);
    limiter.offer('a');
    expect(sent).toEqual(['a']);
    limiter.dispose();
    vi.useRealTimers();
  });
});

describe('GamepadSteering', () => {
  it('integrates stick deflection into marker motion', () => {
    const vm = vmWithSnapshot([0, 0, 0]);
    const steer = new GamepadSteering(vm);
    const before = [...vm.markerM];
    const moved = steer.integrate([1, 0, 0, 0], 0.5);
    expect(moved).not.toBeNull();
    expect(vm.markerM[0]).toBeCloseTo(before[0] + steer.speed * 0.5, 12);
    // stick up (negative axis value) raises the marker
    steer.integrate([0, -1, 0, 0], 0.5);
    expect(vm.markerM[1]).toBeCloseTo(before[1] + steer.speed * 0.5, 12);
  });

  it('applies the deadzone', () => {
    const vm = vmWithSnapshot([0, 0, 0]);
    const steer = new GamepadSteering(vm);
    expect(steer.integrate([0.05, -0.05, 0, 0.05], 0.5)).toBeNull();
  });
});
