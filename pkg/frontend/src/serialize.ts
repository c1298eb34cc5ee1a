/**
 * Deterministic JSON emission matching the reward service's Python emitter
 * byte for byte, so client-side re-serialization can be compared against
 * raw server payloads.
 *
 * Numbers use the shortest decimal form that round-trips, with integral
 * floats written without a trailing ".0". Fixed-point notation is used when
 * the decimal point lands within [-3, 16] of the first digit, scientific
 * notation (two-digit, signed exponent) otherwise.
 */

export function formatNumber(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite number ${x} is not valid JSON`);
  }
  if (Object.is(x, -0)) return '-0';
  if (x === 0) return '0';

  const neg = x < 0;
  // toExponential() with no argument yields the shortest uniquely
  // round-tripping digit string
  const exp = Math.abs(x).toExponential();
  const m = /^(\d)(?:\.(\d+))?e([+-]\d+)$/.exec(exp);
  if (!m) throw new Error(`unexpected exponential form ${exp}`);
  const digits = m[1] + (m[2] ?? '');
  const e = parseInt(m[3], 10); // position of the leading digit
  const decpt = e + 1;          // digits before the decimal point

  let body: string;
  if (decpt >= -3 && decpt <= 16) {
    if (decpt <= 0) {
      body = '0.' + '0'.repeat(-decpt) + digits;
    } else if (decpt >= digits.length) {
      body = digits + '0'.repeat(decpt - digits.length);
    } else {
      body = digits.slice(0, decpt) + '.' + digits.slice(decpt);
    }
  } else {
    const mantissa =
      digits.length > 1 ? digits[0] + '.' + digits.slice(1) : digits;
    const sign = e < 0 ? '-' : '+';
    const mag = Math.abs(e).toString().padStart(2, '0');
    body = `${mantissa}e${sign}${mag}`;
  }
  return neg ? '-' + body : body;
}

type JsonValue =
  | null
  | boolean
  | number
  | string
  | JsonValue[]
  | { [key: string]: JsonValue };

/** Serialize with object keys in insertion order and no whitespace. */
export function stringify(value: JsonValue): string {
  if (value === null) return 'null';
  if (typeof value === 'boolean') return value ? 'true' : 'false';
  if (typeof value === 'number') return formatNumber(value);
  if (typeof value === 'string') return JSON.stringify(value);
  if (Array.isArray(value)) {
    return '[' + value.map(stringify).join(',') + ']';
  }
  const parts = Object.entries(value).map(
    ([k, v]) => JSON.stringify(k) + ':' + stringify(v)
  );
  return '{' + parts.join(',') + '}';
}
