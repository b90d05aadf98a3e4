import { describe, expect, it } from 'vitest';

import { GatewayClient, type FetchLike } from '../src/api.js';
import { ConsultationStore, type StoreConfig } from '../src/session.js';

const ESCALATION =
  'Your condition could be close to critical!\nCall 103 immediately.\n' +
  'Wait for the response, do not hang up!\nBriefly explain what happened.';

const MODERATED =
  "I'm sorry, I didn't understand your response. Could you please provide " +
  'more specific information or rephrase your message?';

const ROUTED_RESULTS = [
  {
    Diagnosis: 'Cervicogenic headache',
    Doctor: 'General practitioner',
    Description: 'Pain in the back of the head may be related to cervical-spine issues.',
  },
  {
    Diagnosis: 'Cervical osteochondrosis',
    Doctor: 'Neurologist',
    Description: 'Neck pathology may provoke occipital pain.',
  },
  {
    Diagnosis: 'Tension headache',
    Doctor: 'Neurologist',
    Description: 'Sustained muscle tension commonly causes pain at the back of the head.',
  },
];

interface ScriptedGateway {
  fetch: FetchLike;
  requests: Array<{ url: string; body: unknown }>;
}

/** Scripted backend: maps the request Text to a canned wire response. */
function scriptedGateway(
  routes: Record<string, { Text: string; Results?: unknown[] } | { status: number; body: string }>,
): ScriptedGateway {
  const requests: ScriptedGateway['requests'] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    if (url.endsWith('/healthz')) {
      return { status: 200, text: async () => '{"status": "ok"}' };
    }
    const body = JSON.parse(init.body ?? '{}') as { Text: string };
    requests.push({ url, body });
    const route = routes[body.Text];
    if (!route) {
      return { status: 500, text: async () => 'unscripted' };
    }
    if ('status' in route) {
      return { status: route.status, text: async () => route.body };
    }
    return {
      status: 200,
      text: async () =>
        JSON.stringify({ Text: route.Text, Results: route.Results ?? [] }),
    };
  };
  return { fetch: fetchImpl, requests };
}

function makeStore(
  gateway: ScriptedGateway,
  config: Partial<StoreConfig> = {},
): ConsultationStore {
  let tick = 1000;
  return new ConsultationStore(config, {
    client: new GatewayClient('http://test.local', gateway.fetch),
    storage: null,
    now: () => tick++,
  });
}

describe('newSession', () => {
  it('fetches the opening greeting', async () => {
    const gateway = scriptedGateway({ '': { Text: "What's bothering you?" } });
    const store = makeStore(gateway);
    await store.newSession();
    const state = store.getState();
    expect(state.offline).toBe(false);
    expect(state.messages).toHaveLength(1);
    expect(state.messages[0]?.role).toBe('system');
    expect(state.messages[0]?.text).toBe("What's bothering you?");
  });

  it('two stores draw distinct session ids', () => {
    const gateway = scriptedGateway({});
    const a = makeStore(gateway).getState().sessionId;
    const b = makeStore(gateway).getState().sessionId;
    expect(a).not.toBe(b);
  });

  it('unreachable backend shows the offline notice and no messages', async () => {
    const failing: FetchLike = async () => {
      throw new Error('connection refused');
    };
    const store = new ConsultationStore({}, {
      client: new GatewayClient('http://test.local', failing),
      storage: null,
    });
    await store.newSession();
    expect(store.getState().offline).toBe(true);
    expect(store.getState().messages).toHaveLength(0);
  });

  it('persists the user id across stores sharing storage', () => {
    const kv = new Map<string, string>();
    const storage = {
      getItem: (k: string) => kv.get(k) ?? null,
      setItem: (k: string, v: string) => void kv.set(k, v),
    };
    const gateway = scriptedGateway({});
    const first = new ConsultationStore({}, {
      client: new GatewayClient('http://x', gateway.fetch),
      storage,
    });
    const second = new ConsultationStore({}, {
      client: new GatewayClient('http://x', gateway.fetch),
      storage,
    });
    expect(first.getState().userId).toBe(second.getState().userId);
    expect(first.getState().sessionId).not.toBe(second.getState().sessionId);
  });
});

describe('sendTurn', () => {
  it('appends the user and system messages in order', async () => {
    const gateway = scriptedGateway({
      'I have a headache.': { Text: 'Where exactly is the pain located?' },
    });
    const store = makeStore(gateway);
    await store.sendTurn('I have a headache.');
    const state = store.getState();
    expect(state.messages.map((m) => m.role)).toEqual(['user', 'system']);
    expect(state.uiState).toBe('chatting');
    expect(state.latestResults).toEqual([]);
  });

  it('posts the exact wire body', async () => {
    const gateway = scriptedGateway({ hello: { Text: 'hi' } });
    const store = makeStore(gateway, { sex: false, age: 52, clientId: 'kiosk' });
    await store.sendTurn('hello');
    const sent = gateway.requests[0]?.body as Record<string, unknown>;
    expect(Object.keys(sent)).toEqual(['Text', 'OuterContext']);
    const ctx = sent.OuterContext as Record<string, unknown>;
    expect(Object.keys(ctx)).toEqual(['Sex', 'Age', 'UserId', 'SessionId', 'ClientId']);
    expect(ctx.Sex).toBe(false);
    expect(ctx.Age).toBe(52);
    expect(ctx.ClientId).toBe('kiosk');
  });

  it('identifiers stay fixed across turns', async () => {
    const gateway = scriptedGateway({
      one: { Text: 'a' },
      two: { Text: 'b' },
    });
    const store = makeStore(gateway);
    await store.sendTurn('one');
    await store.sendTurn('two');
    const contexts = gateway.requests.map(
      (r) => (r.body as { OuterContext: Record<string, unknown> }).OuterContext,
    );
    expect(contexts[0]).toEqual(contexts[1]);
  });

  it('routed turn stores results and flips state', async () => {
    const gateway = scriptedGateway({
      '5 out of 10.': {
        Text: 'Is everything clear? Feel free to ask questions!',
        Results: ROUTED_RESULTS,
      },
    });
    const store = makeStore(gateway);
    await store.sendTurn('5 out of 10.');
    const state = store.getState();
    expect(state.uiState).toBe('routed');
    expect(state.latestResults).toHaveLength(3);
    expect(state.inputDisabled).toBe(false);
  });

  it('emergency turn disables input until confirmed', async () => {
    const gateway = scriptedGateway({ Yes: { Text: ESCALATION } });
    const store = makeStore(gateway);
    await store.sendTurn('Yes');
    expect(store.getState().uiState).toBe('emergency');
    expect(store.getState().inputDisabled).toBe(true);
    store.confirmEmergency();
    expect(store.getState().inputDisabled).toBe(false);
    expect(store.getState().uiState).toBe('emergency');
  });

  it('moderated reply marks the moderated state', async () => {
    const gateway = scriptedGateway({ 'off topic': { Text: MODERATED } });
    const store = makeStore(gateway);
    await store.sendTurn('off topic');
    expect(store.getState().uiState).toBe('moderated');
  });

  it('single-flight: a second send while busy is a no-op', async () => {
    let release: (() => void) | null = null;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const fetchImpl: FetchLike = async (url) => {
      if (url.endsWith('/healthz')) {
        return { status: 200, text: async () => '{}' };
      }
      await gate;
      return {
        status: 200,
        text: async () => JSON.stringify({ Text: 'done', Results: [] }),
      };
    };
    const store = new ConsultationStore({}, {
      client: new GatewayClient('http://x', fetchImpl),
      storage: null,
    });
    const first = store.sendTurn('slow message');
    expect(store.getState().sending).toBe(true);
    await store.sendTurn('ignored while busy');
    expect(store.getState().messages.filter((m) => m.role === 'user')).toHaveLength(1);
    release?.();
    await first;
    expect(store.getState().sending).toBe(false);
    expect(store.getState().messages.map((m) => m.text)).toEqual([
      'slow message',
      'done',
    ]);
  });

  it('4xx shows an inline validation notice without a retry affordance', async () => {
    const gateway = scriptedGateway({
      bad: { status: 400, body: '{"error": "Age must be >= 0"}' },
    });
    const store = makeStore(gateway);
    await store.sendTurn('bad');
    const state = store.getState();
    expect(state.validationNotice).toBe('Age must be >= 0');
    expect(state.retryText).toBeNull();
  });

  it('5xx offers retry without duplicating the user message', async () => {
    let failures = 1;
    const fetchImpl: FetchLike = async (url, init) => {
      if (url.endsWith('/healthz')) return { status: 200, text: async () => '{}' };
      if (failures > 0) {
        failures -= 1;
        return { status: 500, text: async () => 'boom' };
      }
      const body = JSON.parse(init.body ?? '{}') as { Text: string };
      return {
        status: 200,
        text: async () => JSON.stringify({ Text: `echo ${body.Text}`, Results: [] }),
      };
    };
    const store = new ConsultationStore({}, {
      client: new GatewayClient('http://x', fetchImpl),
      storage: null,
    });
    await store.sendTurn('flaky message');
    expect(store.getState().retryText).toBe('flaky message');
    expect(store.getState().messages).toHaveLength(1); // just the user bubble

    await store.retryLastTurn();
    const state = store.getState();
    expect(state.retryText).toBeNull();
    expect(state.messages.map((m) => m.text)).toEqual([
      'flaky message',
      'echo flaky message',
    ]);
    expect(state.messages.filter((m) => m.text === 'flaky message')).toHaveLength(1);
  });

  it('message list is append-only across a full consultation', async () => {
    const gateway = scriptedGateway({
      '': { Text: "What's bothering you?" },
      'I have a headache.': { Text: 'Where exactly is the pain located?' },
      'The back of my head.': {
        Text: 'Is everything clear? Feel free to ask questions!',
        Results: ROUTED_RESULTS,
      },
    });
    const store = makeStore(gateway);
    const seen: number[] = [];
    store.subscribe(() => seen.push(store.getState().messages.length));
    await store.newSession();
    await store.sendTurn('I have a headache.');
    await store.sendTurn('The back of my head.');
    expect(seen.every((n, i) => i === 0 || n >= (seen[i - 1] ?? 0))).toBe(true);
    expect(store.getState().messages).toHaveLength(5);
  });
});
