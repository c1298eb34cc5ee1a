import { execFileSync, spawn, ChildProcess } from 'node:child_process';
import { readFileSync, mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { TrainerClient } from '../src/client';
import { stringify } from '../src/serialize';

const PYTHON = process.env.DSCORE_PYTHON ?? 'python3';
const STDIO_CMD = [PYTHON, '-m', 'dscore.cli', 'serve', '--stdio'];
const FIXTURES = resolve(__dirname, '..', '..', 'tests', 'fixtures');

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, `${name}.c`), 'utf8');
}

function cliScoreGroup(reference: string, candidates: string[]): string {
  const dir = mkdtempSync(join(tmpdir(), 'dscore-parity-'));
  const refPath = join(dir, 'ref.c');
  writeFileSync(refPath, reference);
  const candPaths = candidates.map((src, i) => {
    const p = join(dir, `cand${i}.c`);
    writeFileSync(p, src);
    return p;
  });
  return execFileSync(
    PYTHON,
    ['-m', 'dscore.cli', 'score-group', refPath, ...candPaths],
    { encoding: 'utf8' }
  ).trimEnd();
}

function stdioClient(): TrainerClient {
  return new TrainerClient({ endpoint: STDIO_CMD, retries: 1 });
}

describe('stdio parity with the scoring CLI', () => {
  it('identity group scores all zeros', async () => {
    const ref = fixture('fig9_original');
    const result = await stdioClient().scoreGroup(ref, [ref, ref, ref]);
    expect(result.rewards).toEqual([0, 0, 0]);
    expect(result.advantages).toEqual([0, 0, 0]);
    expect(result.unscorableMask).toEqual([false, false, false]);
  });

  it('syntax-failing candidate in a group of one', async () => {
    const result = await stdioClient().scoreGroup(fixture('fig7_original'), [
      fixture('fig7_baseline'),
    ]);
    expect(result.rewards).toEqual([-3]);
    expect(result.advantages).toEqual([0]); // zero-variance group
  });

  it('re-serialization reproduces the service bytes', async () => {
    const ref = fixture('fig9_original');
    const result = await stdioClient().scoreGroup(ref, [
      fixture('fig9_baseline'),
      fixture('fig9_finetuned'),
      ref,
    ]);
    const reencoded = stringify({
      rewards: result.rewards,
      advantages: result.advantages,
      unscorable_mask: result.unscorableMask,
    });
    expect(reencoded).toBe(result.raw);
  });

  it('matches CLI bytes on every fixture group', async () => {
    const client = stdioClient();
    for (const fig of ['fig7', 'fig8', 'fig9', 'fig10']) {
      const ref = fixture(`${fig}_original`);
      const candidates = [
        fixture(`${fig}_baseline`),
        fixture(`${fig}_finetuned`),
        ref,
      ];
      const result = await client.scoreGroup(ref, candidates);
      expect(result.raw).toBe(cliScoreGroup(ref, candidates));
    }
  });

  it('matches CLI bytes on the unscorable-mask path', async () => {
    const ref = 'int f(int a) { return a; }';
    const candidates = [
      'float f(float x) { return x; }', // unsupported: unscorable
      ref,
      'int f(int a) { return a + 1; }',
    ];
    const result = await stdioClient().scoreGroup(ref, candidates);
    expect(result.unscorableMask).toEqual([true, false, false]);
    expect(result.rewards[0]).toBe(-2);
    expect(result.raw).toBe(cliScoreGroup(ref, candidates));
    expect(
      stringify({
        rewards: result.rewards,
        advantages: result.advantages,
        unscorable_mask: result.unscorableMask,
      })
    ).toBe(result.raw);
  });
});

describe('HTTP parity', () => {
  let server: ChildProcess;
  let baseUrl: string;

  beforeAll(async () => {
    const port = 18000 + Math.floor(Math.random() * 2000);
    baseUrl = `http://127.0.0.1:${port}`;
    server = spawn(
      PYTHON,
      ['-m', 'dscore.cli', 'serve', '--host', '127.0.0.1', '--port', `${port}`],
      { stdio: ['ignore', 'pipe', 'pipe'] }
    );
    const deadline = Date.now() + 45_000;
    for (;;) {
      try {
        const resp = await fetch(`${baseUrl}/health`);
        if (resp.ok) break;
      } catch {
        /* not up yet */
      }
      if (Date.now() > deadline) throw new Error('service did not start');
      await new Promise((r) => setTimeout(r, 250));
    }
  });

  afterAll(() => {
    server?.kill();
  });

  it('HTTP body matches the stdio reply and re-serialization', async () => {
    const ref = fixture('fig10_original');
    const candidates = [
      fixture('fig10_baseline'),
      fixture('fig10_finetuned'),
      ref,
    ];
    const httpResult = await new TrainerClient({
      endpoint: baseUrl,
    }).scoreGroup(ref, candidates);
    const stdioResult = await stdioClient().scoreGroup(ref, candidates);
    expect(httpResult.raw).toBe(stdioResult.raw);
    expect(
      stringify({
        rewards: httpResult.rewards,
        advantages: httpResult.advantages,
        unscorable_mask: httpResult.unscorableMask,
      })
    ).toBe(httpResult.raw);
  });

  it('health reports the resolved toolchain', async () => {
    const health = await new TrainerClient({ endpoint: baseUrl }).health();
    expect(health.status).toBe('ok');
    expect(typeof health.compiler).toBe('string');
  });
});
