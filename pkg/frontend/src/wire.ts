/**
 * Wire types and strict validation for the consultation gateway.
 *
 * The request/response shapes mirror the gateway's schema exactly:
 * unknown fields, missing fields, and wrong types are rejected on both
 * sides, so a body that passes `validateRequestBody` here is accepted
 * by the server byte-for-byte.
 */

export interface OuterContext {
  Sex: boolean;
  Age: number;
  UserId: string;
  SessionId: string;
  ClientId: string;
}

export interface TurnRequestBody {
  Text: string;
  OuterContext: OuterContext;
}

export interface ReferralCard {
  Diagnosis: string;
  Doctor: string;
  Description: string;
}

export interface TurnResponseBody {
  Text: string;
  Results: ReferralCard[];
}

const REQUEST_KEYS = ['Text', 'OuterContext'] as const;
const CONTEXT_KEYS = ['Sex', 'Age', 'UserId', 'SessionId', 'ClientId'] as const;
const RESULT_KEYS = ['Diagnosis', 'Doctor', 'Description'] as const;

function expectExactKeys(
  doc: Record<string, unknown>,
  expected: readonly string[],
  where: string,
): string[] {
  const errors: string[] = [];
  const keys = Object.keys(doc);
  for (const key of keys) {
    if (!expected.includes(key)) errors.push(`unknown field ${key} in ${where}`);
  }
  for (const key of expected) {
    if (!keys.includes(key)) errors.push(`missing field ${key} in ${where}`);
  }
  return errors;
}

function isPlainObject(value: unknown): value is Record<string, unknown> {
  return typeof value === 'object' && value !== null && !Array.isArray(value);
}

/** Validate an already-parsed request body; returns a list of violations. */
export function requestBodyErrors(doc: unknown): string[] {
  if (!isPlainObject(doc)) return ['body must be a JSON object'];
  const errors = expectExactKeys(doc, REQUEST_KEYS, 'request');
  if (typeof doc.Text !== 'string') errors.push('Text must be a string');
  if (!isPlainObject(doc.OuterContext)) {
    errors.push('OuterContext must be an object');
    return errors;
  }
  const ctx = doc.OuterContext;
  errors.push(...expectExactKeys(ctx, CONTEXT_KEYS, 'OuterContext'));
  if (typeof ctx.Sex !== 'boolean') errors.push('Sex must be a boolean');
  if (typeof ctx.Age !== 'number' || !Number.isInteger(ctx.Age) || ctx.Age < 0) {
    errors.push('Age must be a non-negative integer');
  }
  for (const key of ['UserId', 'SessionId', 'ClientId'] as const) {
    const value = ctx[key];
    if (typeof value !== 'string' || value.length === 0) {
      errors.push(`${key} must be a non-empty string`);
    }
  }
  return errors;
}

export function validateRequestBody(doc: unknown): doc is TurnRequestBody {
  return requestBodyErrors(doc).length === 0;
}

/** Parse and validate a response body; throws on schema violations. */
export function parseResponseBody(raw: string): TurnResponseBody {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new Error('response is not valid JSON');
  }
  if (!isPlainObject(doc)) throw new Error('response must be a JSON object');
  const errors = expectExactKeys(doc, ['Text', 'Results'], 'response');
  if (typeof doc.Text !== 'string') errors.push('Text must be a string');
  if (!Array.isArray(doc.Results)) errors.push('Results must be an array');
  if (errors.length > 0) throw new Error(errors.join('; '));
  const results: ReferralCard[] = [];
  for (const item of doc.Results as unknown[]) {
    if (!isPlainObject(item)) throw new Error('Results entries must be objects');
    const itemErrors = expectExactKeys(item, RESULT_KEYS, 'Results entry');
    for (const key of RESULT_KEYS) {
      if (typeof item[key] !== 'string') itemErrors.push(`${key} must be a string`);
    }
    if (itemErrors.length > 0) throw new Error(itemErrors.join('; '));
    results.push({
      Diagnosis: item.Diagnosis as string,
      Doctor: item.Doctor as string,
      Description: item.Description as string,
    });
  }
  return { Text: doc.Text as string, Results: results };
}

/** Build the exact turn body the gateway expects. */
export function buildTurnBody(text: string, context: OuterContext): TurnRequestBody {
  return {
    Text: text,
    OuterContext: {
      Sex: context.Sex,
      Age: context.Age,
      UserId: context.UserId,
      SessionId: context.SessionId,
      ClientId: context.ClientId,
    },
  };
}
