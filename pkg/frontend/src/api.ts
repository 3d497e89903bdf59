// Typed client for the axiom editing service. All semantic decisions live
// server-side; this module only moves JSON.

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export interface TypePayload {
  kind: string;
  builtin: string | null;
  concept: [string, string] | null;
  conceptName: string | null;
}

export interface SlotPayload {
  name: string;
  constraint: string;
  range: TypePayload;
  origin: [string, string];
  binding: string | null;
}

export interface ParamPayload {
  type: TypePayload;
  binding: string | null;
}

export interface NodePayload {
  id: string;
  kind: 'root' | 'variable' | 'relation' | 'operator' | 'instance';
  x: number;
  y: number;
  name?: string;
  concept?: [string, string];
  shared?: boolean;
  slots?: SlotPayload[];
  relation?: [string, string];
  params?: ParamPayload[];
  op?: 'AND' | 'OR' | 'NOT';
  instance?: [string, string] | null;
  memberOf?: [string, string] | null;
  builtin?: string | null;
  value?: string | null;
}

export interface PortPayload {
  kind: 'root' | 'slot' | 'param' | 'operator';
  node: string;
  index: number | null;
}

export interface ConnectionPayload {
  id: string;
  source: PortPayload;
  target: string;
}

export interface ModelPayload {
  formatVersion: number;
  name: string;
  ontologies: string[];
  nodes: NodePayload[];
  connections: ConnectionPayload[];
}

export interface WsmlPayload {
  complete: boolean;
  text: string | null;
  spans: Record<string, [number, number]>;
  violations: { rule: string; subject: string; message: string }[];
}

export interface SessionPayload {
  session: string;
  mode: 'standard' | 'advanced';
  revision: number;
  model: ModelPayload;
  wsml: WsmlPayload;
}

export interface MenuItem {
  line: string;
  verb: string;
  template: boolean;
}

export interface MenuPayload {
  revision: number;
  selection: string;
  commands: MenuItem[];
}

export interface RejectionPayload {
  rule: string;
  message: string;
}

export interface CommandResult {
  revision: number;
  committed: boolean;
  result?: string | null;
  model?: ModelPayload;
  wsml?: WsmlPayload;
  rejection?: RejectionPayload;
}

export interface TreePayload {
  label: string;
  kind: string;
  children: TreePayload[];
}

export interface OntologyInfo {
  iri: string;
  tree: TreePayload;
}

export class ServiceFault extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = 'transport';
  let message = `HTTP ${response.status}`;
  let detail = '';
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    detail = body.detail ?? '';
  } catch {
    // non-JSON error body; keep the transport defaults
  }
  throw new ServiceFault(response.status, code, message, detail);
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchFn = (input, init) => globalThis.fetch(input, init),
  ) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(this.baseUrl + path).then((r) => unwrap<T>(r));
  }

  createSession(mode: 'standard' | 'advanced'): Promise<SessionPayload> {
    return this.post('/sessions', { mode });
  }

  listOntologies(): Promise<{ ontologies: OntologyInfo[] }> {
    return this.get('/ontologies');
  }

  importOntology(iri: string): Promise<{ iri: string; status: string }> {
    return this.post('/ontologies/import', { iri });
  }

  getModel(session: string): Promise<SessionPayload> {
    return this.get(`/sessions/${session}/model`);
  }

  getWsml(session: string): Promise<{ revision: number; wsml: WsmlPayload }> {
    return this.get(`/sessions/${session}/wsml`);
  }

  getMenu(session: string, selection: string): Promise<MenuPayload> {
    return this.get(`/sessions/${session}/menu?selection=${encodeURIComponent(selection)}`);
  }

  sendCommand(session: string, revision: number, command: string): Promise<CommandResult> {
    return this.post(`/sessions/${session}/commands`, { revision, command });
  }

  saveAxiom(session: string, path: string): Promise<{ revision: number; path: string }> {
    return this.post(`/sessions/${session}/save`, { path });
  }

  loadAxiom(session: string, path: string): Promise<SessionPayload> {
    return this.post(`/sessions/${session}/load`, { path });
  }
}
