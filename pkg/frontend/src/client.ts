import { PreconditionError, ProtocolError } from './errors';
import { HttpTransport, StdioTransport, Transport } from './transport';

/** Server-side symbolic execution budget; client timeouts must exceed it. */
const SEMANTIC_BUDGET_SECONDS = 30;

export interface ClientConfig {
  /** Service URL ("http://...") or an argv to run it in stdio mode. */
  endpoint: string | string[];
  /** Per-request timeout; must stay above the semantic budget. */
  requestTimeoutSeconds?: number;
  retries?: number;
  /** Mirrors the trainer's sampling width; informational for callers. */
  numGenerations?: number;
  /** Initial retry back-off in milliseconds. */
  baseDelayMs?: number;
}

export interface GroupResult {
  rewards: number[];
  advantages: number[];
  unscorableMask: boolean[];
  /** Exact response bytes, for bit-parity checks against CLI output. */
  raw: string;
}

export interface ScoreResult {
  kind: string;
  value: number | null;
  diagnostics: unknown;
  raw: string;
}

function asNumberArray(value: unknown, field: string, raw: string): number[] {
  if (!Array.isArray(value) || !value.every((v) => typeof v === 'number')) {
    throw new ProtocolError(`field ${field} is not a number array`, raw);
  }
  return value as number[];
}

function asBooleanArray(value: unknown, field: string, raw: string): boolean[] {
  if (!Array.isArray(value) || !value.every((v) => typeof v === 'boolean')) {
    throw new ProtocolError(`field ${field} is not a boolean array`, raw);
  }
  return value as boolean[];
}

export class TrainerClient {
  readonly numGenerations: number;
  private readonly transport: Transport;

  constructor(readonly config: ClientConfig) {
    const timeoutSeconds = config.requestTimeoutSeconds ?? 60;
    if (timeoutSeconds <= SEMANTIC_BUDGET_SECONDS) {
      throw new PreconditionError(
        `requestTimeoutSeconds (${timeoutSeconds}) must exceed the ` +
          `server's ${SEMANTIC_BUDGET_SECONDS}s semantic budget`
      );
    }
    this.numGenerations = config.numGenerations ?? 3;
    const opts = {
      timeoutMs: timeoutSeconds * 1000,
      retries: config.retries ?? 2,
      baseDelayMs: config.baseDelayMs,
    };
    this.transport = Array.isArray(config.endpoint)
      ? new StdioTransport(config.endpoint, opts)
      : new HttpTransport(config.endpoint, opts);
  }

  async health(): Promise<Record<string, unknown>> {
    const { data } = await this.transport.request('health', {});
    return data as Record<string, unknown>;
  }

  async score(reference: string, candidate: string): Promise<ScoreResult> {
    const { raw, data } = await this.transport.request('score', {
      reference,
      candidate,
    });
    const obj = data as Record<string, unknown>;
    if (typeof obj?.kind !== 'string') {
      throw new ProtocolError('score reply is missing "kind"', raw);
    }
    return {
      kind: obj.kind,
      value: (obj.value ?? null) as number | null,
      diagnostics: obj.diagnostics,
      raw,
    };
  }

  /**
   * Score a generation group and return the service payload verbatim:
   * per-candidate rewards, group-normalized advantages, and the mask of
   * candidates the pipeline could not analyze.
   */
  async scoreGroup(
    reference: string,
    candidates: string[]
  ): Promise<GroupResult> {
    if (candidates.length === 0) {
      throw new PreconditionError('candidates must not be empty');
    }
    const { raw, data } = await this.transport.request('score_group', {
      reference,
      candidates,
    });
    const obj = data as Record<string, unknown>;
    const rewards = asNumberArray(obj?.rewards, 'rewards', raw);
    const advantages = asNumberArray(obj?.advantages, 'advantages', raw);
    const unscorableMask = asBooleanArray(
      obj?.unscorable_mask,
      'unscorable_mask',
      raw
    );
    if (
      rewards.length !== candidates.length ||
      advantages.length !== candidates.length ||
      unscorableMask.length !== candidates.length
    ) {
      throw new ProtocolError('reply arrays do not match group size', raw);
    }
    return { rewards, advantages, unscorableMask, raw };
  }
}

/**
 * Adapter for group-based policy-optimization trainers: a stateless
 * callable mapping (reference, candidates) to per-candidate rewards.
 * Advantages are discarded; trainers that normalize internally only
 * need the raw rewards.
 */
export function asRewardFn(
  config: ClientConfig
): (reference: string, candidates: string[]) => Promise<number[]> {
  const client = new TrainerClient(config);
  return async (reference, candidates) =>
    (await client.scoreGroup(reference, candidates)).rewards;
}
