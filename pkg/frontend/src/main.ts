/** App entry: session bring-up, input wiring, render loop.
 *
 * Keys: M toggles joint-jog / tip-drag; 1..9 select a joint; arrows jog
 * the selected joint (jog mode) or nudge the marker (drag mode);
 * PageUp/PageDown move the marker out of plane. Dragging the marker in
 * either projection steers the tip; a gamepad's sticks move the marker
 * in the tip plane. Commands go out at most 20 per second.
 */

import { ServiceClient } from './client.js';
import { defaultRobotSpec, vec3Distance } from './protocol.js';
import { Projection, renderOverlay } from './render.js';
import { CommandRateLimiter, GamepadSteering, jogTargets } from './steer.js';
import { ViewModel } from './viewmodel.js';

const params = new URLSearchParams(window.location.search);
const serviceUrl = params.get('service') ?? 'http://127.0.0.1:8000';

const vm = new ViewModel(defaultRobotSpec());
const client = new ServiceClient(serviceUrl);

const sideCanvas = document.getElementById('side') as HTMLCanvasElement;
const topCanvas = document.getElementById('top') as HTMLCanvasElement;
const overlay = document.getElementById('overlay') as HTMLElement;
const banner = document.getElementById('banner') as HTMLElement;
const modeLabel = document.getElementById('mode') as HTMLElement;
const toastBox = document.getElementById('toasts') as HTMLElement;
const payloadInput = document.getElementById('payload') as HTMLInputElement;

const side = new Projection(sideCanvas, 1, 'view from the side (x-y)');
const top = new Projection(topCanvas, 2, 'view from directly above (x-z)');

const tipLimiter = new CommandRateLimiter<[number, number, number]>(
  (position) => {
    void client.sendTipTarget(position, vm.payloadKg).then((result) => {
      vm.recordCommandResult(result.converged,
                             result.ok ? undefined : result.detail);
    });
  }, 20);

function sendJog(deltaDeg: number): void {
  const targets = jogTargets(vm, vm.selectedJoint, deltaDeg);
  if (targets === null) return;
  void client.sendJointTargets(targets).then((result) => {
    if (!result.ok) vm.recordCommandResult(undefined, result.detail);
  });
}

function bindDrag(projection: Projection): void {
  let dragging = false;
  const canvas = projection.canvas;
  canvas.addEventListener('pointerdown', (ev) => {
    const rect = canvas.getBoundingClientRect();
    const [mx, my] = projection.toScreen(vm.markerM);
    const dx = ev.clientX - rect.left - mx;
    const dy = ev.clientY - rect.top - my;
    if (dx * dx + dy * dy <= 30 * 30) {
      dragging = true;
      canvas.setPointerCapture(ev.pointerId);
    }
  });
  canvas.addEventListener('pointermove', (ev) => {
    if (!dragging || vm.mode !== 'tip-drag') return;
    const { du, dv } = projection.toWorldDelta(ev.movementX, ev.movementY);
    const next: [number, number, number] = [...vm.markerM];
    next[0] += du;
    next[projection.verticalAxis] += dv;
    vm.setMarker(next);
    tipLimiter.offer(next);
  });
  const release = () => { dragging = false; };
  canvas.addEventListener('pointerup', release);
  canvas.addEventListener('pointercancel', release);
}

bindDrag(side);
bindDrag(top);

window.addEventListener('keydown', (ev) => {
  if (ev.key === 'm' || ev.key === 'M') {
    vm.toggleMode();
    return;
  }
  if (/^[1-9]$/.test(ev.key)) {
    vm.selectJoint(Number(ev.key) - 1);
    return;
  }
  const jogStep = ev.shiftKey ? 10.0 : 2.0;
  const nudge = ev.shiftKey ? 0.02 : 0.005;
  if (vm.mode === 'joint-jog') {
    if (ev.key === 'ArrowUp') sendJog(jogStep);
    if (ev.key === 'ArrowDown') sendJog(-jogStep);
  } else {
    const next: [number, number, number] = [...vm.markerM];
    if (ev.key === 'ArrowUp') next[1] += nudge;
    else if (ev.key === 'ArrowDown') next[1] -= nudge;
    else if (ev.key === 'ArrowLeft') next[0] -= nudge;
    else if (ev.key === 'ArrowRight') next[0] += nudge;
    else if (ev.key === 'PageUp') next[2] += nudge;
    else if (ev.key === 'PageDown') next[2] -= nudge;
    else return;
    ev.preventDefault();
    vm.setMarker(next);
    tipLimiter.offer(next);
  }
});

payloadInput.addEventListener('change', () => {
  const value = Number(payloadInput.value);
  vm.payloadKg = Number.isFinite(value) && value >= 0 ? value : 0;
});

const gamepadSteer = new GamepadSteering(vm);
let lastFrameAt = performance.now();

function frame(now: number): void {
  const dtS = Math.min(0.1, (now - lastFrameAt) / 1000);
  lastFrameAt = now;

  const pads = navigator.getGamepads?.() ?? [];
  const pad = pads.find((p) => p !== null);
  if (pad !== undefined && pad !== null && vm.mode === 'tip-drag') {
    const moved = gamepadSteer.integrate(pad.axes, dtS);
    if (moved !== null) tipLimiter.offer(moved);
  }

  side.draw(vm);
  top.draw(vm);
  renderOverlay(overlay, vm);
  banner.textContent = `service: ${serviceUrl} · ${vm.status}`;
  banner.className = vm.status === 'connected' ? 'ok' : 'warn';
  modeLabel.textContent = vm.mode === 'tip-drag'
    ? 'tip-drag (M to switch)' : `joint-jog, joint ${vm.selectedJoint + 1} (M to switch)`;
  toastBox.innerHTML = vm.toasts
    .map((t) => `<div class="toast ${t.kind}">#${t.seq} ${t.text}</div>`)
    .join('');

  // drag the marker along if the arm wandered far while not steering
  if (vm.snapshot !== null && vm.mode === 'joint-jog') {
    const gap = vec3Distance(vm.snapshot.tip_m, vm.markerM);
    if (gap > 0.5) vm.setMarker(vm.snapshot.tip_m);
  }
  requestAnimationFrame(frame);
}

async function start(): Promise<void> {
  banner.textContent = `connecting to ${serviceUrl}…`;
  try {
    await client.createSession(vm.spec);
  } catch (err) {
    banner.textContent = `session creation failed: ${String(err)}`;
    banner.className = 'warn';
    return;
  }
  client.onSnapshot = (snap) => vm.applySnapshot(snap);
  client.onStatus = (status) => vm.applyStatus(status);
  client.connectStream();
  requestAnimationFrame(frame);
}

void start();
