import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    testTimeout: 120_000,
    hookTimeout: 60_000,
    // the parity suite drives a real scoring service; keep runs serial
    pool: 'forks',
    poolOptions: { forks: { singleFork: true } },
  },
});
