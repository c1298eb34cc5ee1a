import { describe, expect, it } from 'vitest';

import { formatNumber, stringify } from '../src/serialize';

// expected strings are the reward service's own emitter output for the
// same values, captured once and frozen here
const FLOAT_CASES: Array<[number, string]> = [
  [0.0, '0'],
  [-0.0, '-0'],
  [1.0, '1'],
  [-1.0, '-1'],
  [0.1, '0.1'],
  [2.5, '2.5'],
  [-2.0, '-2'],
  [1e15, '1000000000000000'],
  [1e16, '1e+16'],
  [-1.0190493307301363, '-1.0190493307301363'],
  [0.4661414248259509, '0.4661414248259509'],
  [1.3587324409735149, '1.3587324409735149'],
  [1e-4, '0.0001'],
  [1e-5, '1e-05'],
  [123456789.123, '123456789.123'],
  [0.3025764654409778, '0.3025764654409778'],
  [5e-324, '5e-324'],
  [1.7976931348623157e308, '1.7976931348623157e+308'],
];

describe('formatNumber', () => {
  it('matches the service emitter on frozen cases', () => {
    for (const [value, expected] of FLOAT_CASES) {
      expect(formatNumber(value)).toBe(expected);
    }
  });

  it('round-trips every emitted value exactly', () => {
    for (const [value] of FLOAT_CASES) {
      expect(Number(formatNumber(value))).toBe(value);
    }
  });

  it('round-trips random doubles', () => {
    for (let i = 0; i < 2000; i++) {
      const x = (Math.random() - 0.5) * Math.pow(10, (i % 61) - 30);
      expect(Number(formatNumber(x))).toBe(x);
    }
  });

  it('rejects non-finite values', () => {
    expect(() => formatNumber(Infinity)).toThrow();
    expect(() => formatNumber(NaN)).toThrow();
  });
});

describe('stringify', () => {
  it('matches the service emitter on a reward payload', () => {
    const payload = {
      rewards: [-2.0, 0.4661414248259509, 0.0],
      advantages: [-1.391656209986672],
      unscorable_mask: [false, true],
    };
    expect(stringify(payload)).toBe(
      '{"rewards":[-2,0.4661414248259509,0],' +
        '"advantages":[-1.391656209986672],' +
        '"unscorable_mask":[false,true]}'
    );
  });

  it('preserves key insertion order and emits no whitespace', () => {
    expect(stringify({ b: 1, a: [null, true, 'x'] })).toBe(
      '{"b":1,"a":[null,true,"x"]}'
    );
  });
});
