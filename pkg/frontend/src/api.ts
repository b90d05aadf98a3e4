/**
 * Minimal gateway client: one POST endpoint for turns, one GET for
 * liveness. Failures are classified so the store can distinguish
 * "fix your input" (4xx) from "try again" (5xx / network).
 */

import {
  buildTurnBody,
  parseResponseBody,
  requestBodyErrors,
  type OuterContext,
  type TurnRequestBody,
  type TurnResponseBody,
} from './wire.js';

export type FetchLike = (
  url: string,
  init: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; text(): Promise<string> }>;

export type TurnFailureKind = 'validation' | 'retryable';

export class TurnFailure extends Error {
  readonly kind: TurnFailureKind;
  readonly status: number | null;

  constructor(kind: TurnFailureKind, message: string, status: number | null = null) {
    super(message);
    this.kind = kind;
    this.status = status;
  }
}

export class GatewayClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
    this.fetchImpl =
      fetchImpl ?? ((url, init) => fetch(url, init) as ReturnType<FetchLike>);
  }

  /** Low-level turn post; body shape is validated before it leaves the client. */
  async postTurn(body: TurnRequestBody): Promise<TurnResponseBody> {
    const violations = requestBodyErrors(body);
    if (violations.length > 0) {
      throw new TurnFailure('validation', violations.join('; '));
    }
    let status: number;
    let raw: string;
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/v3/request`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      });
      status = response.status;
      raw = await response.text();
    } catch (error) {
      throw new TurnFailure('retryable', `network failure: ${String(error)}`);
    }
    if (status >= 200 && status < 300) {
      return parseResponseBody(raw);
    }
    if (status >= 400 && status < 500) {
      let detail = raw;
      try {
        const parsed = JSON.parse(raw) as { error?: string };
        if (typeof parsed.error === 'string') detail = parsed.error;
      } catch {
        // keep the raw body as the detail
      }
      throw new TurnFailure('validation', detail, status);
    }
    throw new TurnFailure('retryable', `server error ${status}`, status);
  }

  async sendTurn(text: string, context: OuterContext): Promise<TurnResponseBody> {
    return this.postTurn(buildTurnBody(text, context));
  }

  async isHealthy(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/healthz`, {
        method: 'GET',
      });
      return response.status === 200;
    } catch {
      return false;
    }
  }
}
