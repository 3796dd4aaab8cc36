/** Service connection: REST commands plus the snapshot stream.
 *
 * The stream reconnects with exponential backoff and resyncs from
 * GET /state after every (re)connect so the view never renders a stale
 * pose for long. Frames older than the last applied simulation time are
 * dropped, never reordered.
 */

import { RobotSnapshot, RobotSpec, parseSnapshot } from './protocol.js';

export type ConnectionStatus = 'connecting' | 'connected' | 'reconnecting' | 'closed';

export type TipCommandResult = {
  ok: boolean;
  converged?: boolean;
  residual_m?: number;
  detail?: string;
};

type WebSocketLike = {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
};

export type WebSocketFactory = (url: string) => WebSocketLike;

export type ClientOptions = {
  /** injectable for Node tests; defaults to the browser WebSocket */
  webSocketFactory?: WebSocketFactory;
  fetchFn?: typeof fetch;
  backoffInitialMs?: number;
  backoffMaxMs?: number;
};

export class ServiceClient {
  readonly baseUrl: string;
  private readonly wsFactory: WebSocketFactory;
  private readonly fetchFn: typeof fetch;
  private readonly backoffInitialMs: number;
  private readonly backoffMaxMs: number;

  sessionId: string | null = null;
  status: ConnectionStatus = 'closed';

  onSnapshot: ((snap: RobotSnapshot) => void) | null = null;
  onStatus: ((status: ConnectionStatus) => void) | null = null;

  private socket: WebSocketLike | null = null;
  private lastTimeS = -Infinity;
  private retryMs: number;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = true;
  droppedFrames = 0;

  constructor(baseUrl: string, options: ClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.wsFactory = options.webSocketFactory
      ?? ((url) => new WebSocket(url) as unknown as WebSocketLike);
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.backoffInitialMs = options.backoffInitialMs ?? 500;
    this.backoffMaxMs = options.backoffMaxMs ?? 8000;
    this.retryMs = this.backoffInitialMs;
  }

  async createSession(spec: RobotSpec): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/sessions`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(spec),
    });
    if (!response.ok) {
      throw new Error(`session rejected (${response.status}): ${await response.text()}`);
    }
    const body = await response.json() as { session_id: string };
    this.sessionId = body.session_id;
    return body.session_id;
  }

  async fetchState(): Promise<RobotSnapshot> {
    const response = await this.fetchFn(
      `${this.baseUrl}/sessions/${this.sessionId}/state`);
    if (!response.ok) throw new Error(`state fetch failed (${response.status})`);
    return await response.json() as RobotSnapshot;
  }

  async sendJointTargets(anglesDeg: number[]): Promise<TipCommandResult> {
    return this.post(`targets/joints`, { angles_deg: anglesDeg });
  }

  async sendTipTarget(
    positionM: readonly number[], payloadKg: number,
  ): Promise<TipCommandResult> {
    return this.post(`targets/tip`,
                     { position_m: [...positionM], payload_kg: payloadKg });
  }

  private async post(path: string, body: unknown): Promise<TipCommandResult> {
    try {
      const response = await this.fetchFn(
        `${this.baseUrl}/sessions/${this.sessionId}/${path}`, {
          method: 'POST',
          headers: { 'content-type': 'application/json' },
          body: JSON.stringify(body),
        });
      const payload = await response.json().catch(() => ({}));
      if (!response.ok) {
        const detail = (payload as { detail?: string }).detail ?? `HTTP ${response.status}`;
        return { ok: false, detail };
      }
      return { ok: true, ...(payload as object) };
    } catch (err) {
      return { ok: false, detail: String(err) };
    }
  }

  /** Open the snapshot stream; keeps retrying until stop() is called. */
  connectStream(): void {
    if (this.sessionId === null) throw new Error('create a session first');
    this.stopped = false;
    this.openSocket('connecting');
  }

  stop(): void {
    this.stopped = true;
    if (this.retryTimer !== null) clearTimeout(this.retryTimer);
    this.retryTimer = null;
    this.socket?.close();
    this.socket = null;
    this.setStatus('closed');
  }

  private wsUrl(): string {
    return `${this.baseUrl.replace(/^http/, 'ws')}/sessions/${this.sessionId}/stream`;
  }

  private openSocket(phase: ConnectionStatus): void {
    this.setStatus(phase);
    const socket = this.wsFactory(this.wsUrl());
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = this.backoffInitialMs;
      this.setStatus('connected');
      // resync in case frames were missed while disconnected
      this.fetchState().then((snap) => this.apply(snap)).catch(() => undefined);
    };
    socket.onmessage = (event) => {
      const snap = parseSnapshot(String(event.data));
      if (snap !== null) this.apply(snap);
    };
    socket.onerror = () => undefined;
    socket.onclose = () => {
      if (this.stopped) return;
      this.scheduleRetry();
    };
  }

  private scheduleRetry(): void {
    this.setStatus('reconnecting');
    const delay = this.retryMs;
    this.retryMs = Math.min(this.retryMs * 2, this.backoffMaxMs);
    this.retryTimer = setTimeout(() => {
      if (!this.stopped) this.openSocket('reconnecting');
    }, delay);
  }

  private apply(snap: RobotSnapshot): void {
    if (snap.time_s < this.lastTimeS) {
      this.droppedFrames += 1;
      return;
    }
    this.lastTimeS = snap.time_s;
    this.onSnapshot?.(snap);
  }

  private setStatus(status: ConnectionStatus): void {
    if (this.status === status) return;
    this.status = status;
    this.onStatus?.(status);
  }
}
