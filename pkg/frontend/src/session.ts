/**
 * ConsultationStore - framework-agnostic state machine for one chat tab.
 *
 * Owns the session identifiers (fixed for the session's lifetime), the
 * append-only message list, the latest referral results, and the UI
 * state machine: chatting -> routed | emergency | moderated. Exactly
 * one turn may be in flight; the send control stays disabled until the
 * previous turn settles, so the client never provokes a 409.
 *
 * Zero framework dependency: subscribe/getState pairs plug into any
 * rendering layer.
 */

import { GatewayClient, TurnFailure } from './api.js';
import type { OuterContext, ReferralCard } from './wire.js';

export type UiStateName = 'chatting' | 'routed' | 'emergency' | 'moderated';

export interface ChatMessage {
  role: 'user' | 'system';
  text: string;
  timestamp: number;
}

export interface UiSessionState {
  userId: string;
  sessionId: string;
  clientId: string;
  messages: ChatMessage[];
  latestResults: ReferralCard[];
  uiState: UiStateName;
  sending: boolean;
  /** Emergency banner needs explicit confirmation before input re-enables. */
  inputDisabled: boolean;
  offline: boolean;
  validationNotice: string | null;
  /** Set when the last send failed retryably; retry resends this text. */
  retryText: string | null;
}

export interface StoreConfig {
  baseUrl: string;
  sex: boolean;
  age: number;
  clientId: string;
  /** Response text containing this marker switches the UI to emergency. */
  escalationMarker: string;
  /** Response text starting with this marker marks a moderated turn. */
  moderationMarker: string;
}

export const DEFAULT_CONFIG: StoreConfig = {
  baseUrl: 'http://127.0.0.1:8080',
  sex: true,
  age: 30,
  clientId: 'web-chat',
  escalationMarker: 'Call 103 immediately',
  moderationMarker: "I'm sorry, I didn't understand",
};

export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const USER_ID_KEY = 'triage.userId';

type Listener = () => void;

function randomId(prefix: string): string {
  const cryptoApi = (globalThis as { crypto?: Crypto }).crypto;
  if (cryptoApi?.randomUUID) return `${prefix}-${cryptoApi.randomUUID()}`;
  return `${prefix}-${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 10)}`;
}

export class ConsultationStore {
  private readonly config: StoreConfig;
  private readonly client: GatewayClient;
  private readonly storage: KeyValueStorage | null;
  private readonly now: () => number;

  private state: UiSessionState;
  private listeners = new Set<Listener>();

  constructor(
    config: Partial<StoreConfig> = {},
    options: {
      client?: GatewayClient;
      storage?: KeyValueStorage | null;
      now?: () => number;
    } = {},
  ) {
    this.config = { ...DEFAULT_CONFIG, ...config };
    this.client = options.client ?? new GatewayClient(this.config.baseUrl);
    this.storage = options.storage === undefined ? defaultStorage() : options.storage;
    this.now = options.now ?? (() => Date.now());
    this.state = {
      userId: this.loadUserId(),
      sessionId: randomId('session'),
      clientId: this.config.clientId,
      messages: [],
      latestResults: [],
      uiState: 'chatting',
      sending: false,
      inputDisabled: false,
      offline: false,
      validationNotice: null,
      retryText: null,
    };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  getState(): UiSessionState {
    return this.state;
  }

  private setState(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener();
  }

  private loadUserId(): string {
    const stored = this.storage?.getItem(USER_ID_KEY);
    if (stored) return stored;
    const fresh = randomId('user');
    this.storage?.setItem(USER_ID_KEY, fresh);
    return fresh;
  }

  private outerContext(): OuterContext {
    return {
      Sex: this.config.sex,
      Age: this.config.age,
      UserId: this.state.userId,
      SessionId: this.state.sessionId,
      ClientId: this.state.clientId,
    };
  }

  private appendMessage(role: 'user' | 'system', text: string): void {
    this.setState({
      messages: [...this.state.messages, { role, text, timestamp: this.now() }],
    });
  }

  private classifyReply(text: string, results: ReferralCard[]): UiStateName {
    if (results.length > 0) return 'routed';
    if (text.includes(this.config.escalationMarker)) return 'emergency';
    if (text.startsWith(this.config.moderationMarker)) return 'moderated';
    return 'chatting';
  }

  /** Open the session: fetch the greeting with an empty-text ping. */
  async newSession(): Promise<void> {
    if (this.state.sending) return;
    const healthy = await this.client.isHealthy();
    if (!healthy) {
      this.setState({ offline: true });
      return;
    }
    this.setState({ offline: false, sending: true });
    try {
      const reply = await this.client.sendTurn('', this.outerContext());
      this.appendMessage('system', reply.Text);
      this.setState({ sending: false });
    } catch {
      this.setState({ offline: true, sending: false });
    }
  }

  /** Send one user turn; no-op while a turn is already in flight. */
  async sendTurn(text: string): Promise<void> {
    if (this.state.sending || this.state.inputDisabled) return;
    this.appendMessage('user', text);
    await this.transmit(text);
  }

  /** Re-send the last failed text without duplicating the user message. */
  async retryLastTurn(): Promise<void> {
    const text = this.state.retryText;
    if (text === null || this.state.sending) return;
    await this.transmit(text);
  }

  private async transmit(text: string): Promise<void> {
    this.setState({ sending: true, validationNotice: null, retryText: null });
    try {
      const reply = await this.client.sendTurn(text, this.outerContext());
      const uiState = this.classifyReply(reply.Text, reply.Results);
      this.appendMessage('system', reply.Text);
      this.setState({
        sending: false,
        latestResults: reply.Results,
        uiState,
        inputDisabled: uiState === 'emergency',
        offline: false,
      });
    } catch (error) {
      if (error instanceof TurnFailure && error.kind === 'validation') {
        this.setState({ sending: false, validationNotice: error.message });
      } else {
        this.setState({ sending: false, retryText: text });
      }
    }
  }

  /** Acknowledge the emergency banner; input re-enables, banner state stays. */
  confirmEmergency(): void {
    if (this.state.uiState !== 'emergency') return;
    this.setState({ inputDisabled: false });
  }
}

function defaultStorage(): KeyValueStorage | null {
  const candidate = (globalThis as { localStorage?: KeyValueStorage }).localStorage;
  return candidate ?? null;
}
