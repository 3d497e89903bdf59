import { describe, expect, it } from 'vitest';

import { ApiClient, ServiceFault } from '../src/api';
import { jsonResponse, makeFetchStub, sessionPayload } from './helpers';

describe('ApiClient', () => {
  it('posts the mode when creating a session', async () => {
    const { fetchFn, requests } = makeFetchStub([jsonResponse(sessionPayload(0, 'advanced'))]);
    const api = new ApiClient('http://svc', fetchFn);
    const payload = await api.createSession('advanced');
    expect(requests[0]).toMatchObject({
      url: 'http://svc/sessions',
      method: 'POST',
      body: { mode: 'advanced' },
    });
    expect(payload.session).toBe('abc123');
    expect(payload.revision).toBe(0);
  });

  it('echoes the revision with every command', async () => {
    const { fetchFn, requests } = makeFetchStub([
      jsonResponse({ revision: 4, committed: true, result: 'n2', model: sessionPayload().model, wsml: sessionPayload().wsml }),
    ]);
    const api = new ApiClient('http://svc', fetchFn);
    await api.sendCommand('abc123', 3, 'var p iri#Person');
    expect(requests[0].url).toBe('http://svc/sessions/abc123/commands');
    expect(requests[0].body).toEqual({ revision: 3, command: 'var p iri#Person' });
  });

  it('url-encodes menu selections', async () => {
    const { fetchFn, requests } = makeFetchStub([jsonResponse({ revision: 1, selection: 'slot:n2:0', commands: [] })]);
    const api = new ApiClient('http://svc', fetchFn);
    await api.getMenu('abc123', 'slot:n2:0');
    expect(requests[0].url).toBe('http://svc/sessions/abc123/menu?selection=slot%3An2%3A0');
  });

  it('unwraps service errors into typed faults', async () => {
    const { fetchFn } = makeFetchStub([
      jsonResponse({ code: 'conflict', message: 'revision 0 is stale, session is at 2', detail: '' }, 409),
    ]);
    const api = new ApiClient('http://svc', fetchFn);
    const err = await api.sendCommand('abc123', 0, 'delete n2').catch((e) => e);
    expect(err).toBeInstanceOf(ServiceFault);
    expect(err.status).toBe(409);
    expect(err.code).toBe('conflict');
  });

  it('falls back to a transport fault for non-JSON errors', async () => {
    const { fetchFn } = makeFetchStub([new Response('boom', { status: 502 })]);
    const api = new ApiClient('http://svc', fetchFn);
    const err = await api.listOntologies().catch((e) => e);
    expect(err).toBeInstanceOf(ServiceFault);
    expect(err.code).toBe('transport');
    expect(err.status).toBe(502);
  });
});
