import { spawn } from 'node:child_process';

import { ProtocolError, TransportError } from './errors';

/** A single JSON request/response exchange; `raw` is the exact body text. */
export interface Exchange {
  raw: string;
  data: unknown;
}

export interface Transport {
  request(op: string, body: Record<string, unknown>): Promise<Exchange>;
}

const TRANSIENT_STATUSES = new Set([429, 500, 502, 503, 504]);

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export interface HttpTransportOptions {
  timeoutMs: number;
  retries: number;
  /** Initial back-off delay; doubles per attempt. Small values for tests. */
  baseDelayMs?: number;
}

/**
 * JSON-over-HTTP transport with exponential back-off on transient
 * failures (network errors, timeouts, 429 and 5xx responses).
 */
export class HttpTransport implements Transport {
  constructor(
    private readonly baseUrl: string,
    private readonly opts: HttpTransportOptions
  ) {}

  async request(op: string, body: Record<string, unknown>): Promise<Exchange> {
    const url = new URL(op === 'health' ? '/health' : `/${op}`, this.baseUrl);
    const baseDelay = this.opts.baseDelayMs ?? 250;
    let lastError: unknown = null;

    for (let attempt = 0; attempt <= this.opts.retries; attempt++) {
      if (attempt > 0) await sleep(baseDelay * 2 ** (attempt - 1));
      let response: Response;
      try {
        const controller = new AbortController();
        const timer = setTimeout(
          () => controller.abort(),
          this.opts.timeoutMs
        );
        try {
          response = await fetch(url, {
            method: op === 'health' ? 'GET' : 'POST',
            headers: { 'content-type': 'application/json' },
            body: op === 'health' ? undefined : JSON.stringify(body),
            signal: controller.signal,
          });
        } finally {
          clearTimeout(timer);
        }
      } catch (err) {
        lastError = err; // network error or timeout: retry
        continue;
      }

      const raw = await response.text();
      if (response.ok) {
        try {
          return { raw, data: JSON.parse(raw) };
        } catch (err) {
          throw new ProtocolError('response body is not valid JSON', raw);
        }
      }
      if (!TRANSIENT_STATUSES.has(response.status)) {
        throw new ProtocolError(
          `service rejected request with HTTP ${response.status}: ${raw}`,
          raw
        );
      }
      lastError = new Error(`HTTP ${response.status}`);
    }
    throw new TransportError(
      `request to ${url} failed after ${this.opts.retries + 1} attempts`,
      lastError
    );
  }
}

export interface StdioTransportOptions {
  timeoutMs: number;
  retries: number;
  baseDelayMs?: number;
}

/**
 * Transport that spawns the reward service in NDJSON stdio mode for each
 * exchange. Stateless by construction: one request line, one reply line,
 * then an explicit exit op.
 */
export class StdioTransport implements Transport {
  constructor(
    private readonly command: string[],
    private readonly opts: StdioTransportOptions
  ) {
    if (command.length === 0) {
      throw new TransportError('stdio command must not be empty');
    }
  }

  async request(op: string, body: Record<string, unknown>): Promise<Exchange> {
    const baseDelay = this.opts.baseDelayMs ?? 250;
    let lastError: unknown = null;
    for (let attempt = 0; attempt <= this.opts.retries; attempt++) {
      if (attempt > 0) await sleep(baseDelay * 2 ** (attempt - 1));
      try {
        return await this.exchangeOnce(op, body);
      } catch (err) {
        if (err instanceof ProtocolError) throw err;
        lastError = err;
      }
    }
    throw new TransportError(
      `stdio exchange failed after ${this.opts.retries + 1} attempts`,
      lastError
    );
  }

  private exchangeOnce(
    op: string,
    body: Record<string, unknown>
  ): Promise<Exchange> {
    const [cmd, ...args] = this.command;
    return new Promise<Exchange>((resolve, reject) => {
      const child = spawn(cmd, args, { stdio: ['pipe', 'pipe', 'pipe'] });
      const timer = setTimeout(() => {
        child.kill();
        reject(new TransportError(`stdio request timed out for op ${op}`));
      }, this.opts.timeoutMs);

      let stdout = '';
      let stderr = '';
      let settled = false;
      const finish = (fn: () => void) => {
        if (settled) return;
        settled = true;
        clearTimeout(timer);
        fn();
      };

      child.stdout.on('data', (chunk: Buffer) => {
        stdout += chunk.toString('utf8');
        const newline = stdout.indexOf('\n');
        if (newline < 0) return;
        const raw = stdout.slice(0, newline);
        finish(() => {
          child.stdin.end(); // after the exit op below this is a no-op
          child.kill();
          try {
            resolve({ raw, data: JSON.parse(raw) });
          } catch {
            reject(new ProtocolError('reply line is not valid JSON', raw));
          }
        });
      });
      child.stderr.on('data', (chunk: Buffer) => {
        stderr += chunk.toString('utf8');
      });
      child.on('error', (err) =>
        finish(() => reject(new TransportError(`spawn failed: ${err}`, err)))
      );
      child.on('close', (code) =>
        finish(() =>
          reject(
            new TransportError(
              `service exited with code ${code} before replying: ${stderr}`
            )
          )
        )
      );

      child.stdin.write(JSON.stringify({ op, ...body }) + '\n');
      child.stdin.write(JSON.stringify({ op: 'exit' }) + '\n');
    });
  }
}
