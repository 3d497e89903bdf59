import { ModelPayload, NodePayload, SessionPayload, WsmlPayload } from '../src/api';

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

/** A fetch stub fed from a queue of canned responses, recording each request. */
export function makeFetchStub(responses: Response[]) {
  const requests: RecordedRequest[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    requests.push({
      url: input,
      method: init?.method ?? 'GET',
      body: init?.body ? JSON.parse(init.body as string) : null,
    });
    const next = responses.shift();
    if (!next) throw new Error(`no canned response for ${input}`);
    return next;
  };
  return { fetchFn, requests };
}

export function emptyWsml(): WsmlPayload {
  return {
    complete: false,
    text: null,
    spans: {},
    violations: [{ rule: 'empty-axiom', subject: 'n1', message: 'nothing reachable from Start' }],
  };
}

export function completeWsml(text: string): WsmlPayload {
  return { complete: true, text, spans: {}, violations: [] };
}

export function rootNode(): NodePayload {
  return { id: 'n1', kind: 'root', x: 40, y: 40 };
}

export function personNode(id = 'n2'): NodePayload {
  return {
    id,
    kind: 'variable',
    x: 140,
    y: 60,
    name: '?person',
    concept: ['http://example.org/sociology', 'Person'],
    shared: false,
    slots: [
      {
        name: 'hasEmployer',
        constraint: 'ofType',
        range: {
          kind: 'concept',
          builtin: null,
          concept: ['http://example.org/biology', 'Organization'],
          conceptName: 'Organization',
        },
        origin: ['http://example.org/sociology', 'Person'],
        binding: null,
      },
    ],
  };
}

export function makeModel(nodes: NodePayload[], connections: ModelPayload['connections'] = []): ModelPayload {
  return {
    formatVersion: 1,
    name: 'axiom',
    ontologies: ['http://example.org/sociology'],
    nodes,
    connections,
  };
}

export function sessionPayload(revision = 0, mode: 'standard' | 'advanced' = 'standard'): SessionPayload {
  return {
    session: 'abc123',
    mode,
    revision,
    model: makeModel([rootNode()]),
    wsml: emptyWsml(),
  };
}
