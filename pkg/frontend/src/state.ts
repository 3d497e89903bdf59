// Workspace state: one open session, reconciled with the service's revision
// echo after every command. Commands are serialized (one in flight at a time)
// and a payload older than the rendered revision is never applied.

import {
  ApiClient,
  CommandResult,
  MenuPayload,
  ModelPayload,
  RejectionPayload,
  WsmlPayload,
} from './api';

export interface Viewport {
  panX: number;
  panY: number;
  zoom: number; // percent, 25..400
}

export const MIN_ZOOM = 25;
export const MAX_ZOOM = 400;

export type Listener = () => void;

export interface ExecuteOutcome {
  committed: boolean;
  rejection?: RejectionPayload;
  result?: string | null;
}

export class WorkspaceStore {
  session = '';
  mode: 'standard' | 'advanced' = 'standard';
  revision = -1;
  model: ModelPayload | null = null;
  wsml: WsmlPayload | null = null;
  selection: string | null = null;
  viewport: Viewport = { panX: 0, panY: 0, zoom: 100 };
  busy = false;
  lastError: string | null = null;

  private listeners = new Set<Listener>();
  private queue: Promise<unknown> = Promise.resolve();

  constructor(public api: ApiClient) {}

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  /** Apply a model/wsml snapshot only if it is not older than what we show. */
  private reconcile(revision: number, model?: ModelPayload, wsml?: WsmlPayload): boolean {
    if (revision < this.revision) {
      return false;
    }
    this.revision = revision;
    if (model) this.model = model;
    if (wsml) this.wsml = wsml;
    this.notify();
    return true;
  }

  async openSession(mode: 'standard' | 'advanced'): Promise<void> {
    const payload = await this.api.createSession(mode);
    this.session = payload.session;
    this.mode = payload.mode;
    this.revision = -1;
    this.selection = null;
    this.lastError = null;
    this.reconcile(payload.revision, payload.model, payload.wsml);
  }

  async refresh(): Promise<void> {
    const payload = await this.api.getModel(this.session);
    this.reconcile(payload.revision, payload.model, payload.wsml);
  }

  /** Run one command line; callers queue behind any in-flight command. */
  execute(line: string): Promise<ExecuteOutcome> {
    const job = this.queue.then(async (): Promise<ExecuteOutcome> => {
      this.busy = true;
      this.notify();
      try {
        const res: CommandResult = await this.api.sendCommand(this.session, this.revision, line);
        if (res.committed) {
          this.lastError = null;
          this.reconcile(res.revision, res.model, res.wsml);
          return { committed: true, result: res.result };
        }
        this.lastError = res.rejection ? `${res.rejection.rule}: ${res.rejection.message}` : 'rejected';
        this.notify();
        return { committed: false, rejection: res.rejection };
      } finally {
        this.busy = false;
        this.notify();
      }
    });
    // keep the chain alive after rejections and transport faults
    this.queue = job.catch(() => undefined);
    return job;
  }

  menu(selection: string): Promise<MenuPayload> {
    return this.api.getMenu(this.session, selection);
  }

  select(selection: string | null): void {
    this.selection = selection;
    this.notify();
  }

  setZoom(percent: number): void {
    this.viewport.zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, Math.round(percent)));
    this.notify();
  }

  pan(dx: number, dy: number): void {
    this.viewport.panX += dx;
    this.viewport.panY += dy;
    this.notify();
  }
}
