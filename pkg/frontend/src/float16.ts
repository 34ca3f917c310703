// IEEE 754 binary16 conversions. doubleToHalf implements round-to-nearest-
// even directly on the double's bit pattern so shortest-decimal rendering
// picks the same digits as the reference toolchain.

const view = new DataView(new ArrayBuffer(8));

export function halfToDouble(bits: number): number {
  const sign = (bits >> 15) & 1;
  const exp = (bits >> 10) & 0x1f;
  const frac = bits & 0x3ff;
  let value: number;
  if (exp === 0) {
    value = frac * 2 ** -24;
  } else if (exp === 31) {
    value = frac ? NaN : Infinity;
  } else {
    value = (1 + frac / 1024) * 2 ** (exp - 15);
  }
  return sign ? -value : value;
}

export function doubleToHalf(x: number): number {
  if (Number.isNaN(x)) return 0x7e00;
  const sign = x < 0 || Object.is(x, -0) ? 0x8000 : 0;
  const mag = Math.abs(x);
  if (mag >= 65520) return sign | 0x7c00; // rounds to infinity
  if (mag === 0) return sign;

  view.setFloat64(0, mag);
  const hi = view.getUint32(0);
  const lo = view.getUint32(4);
  const dExp = (hi >>> 20) & 0x7ff; // biased, never 0/0x7ff here
  const dFrac = (BigInt(hi & 0xfffff) << 32n) | BigInt(lo >>> 0);
  const exp = dExp - 1023;

  let mantissa: bigint; // value = mantissa * 2^(shiftedExp), integer mantissa
  let drop: number; // how many low bits to round away
  let hExp: number;
  if (exp >= -14) {
    // normal half: 10 fraction bits
    mantissa = (1n << 52n) | dFrac;
    drop = 42;
    hExp = exp + 15;
  } else {
    // subnormal: align to 2^-24 steps
    mantissa = (1n << 52n) | dFrac;
    drop = 42 + (-14 - exp);
    hExp = 0;
    if (drop > 63) return sign; // underflows to zero regardless of rounding
  }

  const keep = mantissa >> BigInt(drop);
  const rem = mantissa & ((1n << BigInt(drop)) - 1n);
  const half = 1n << BigInt(drop - 1);
  let rounded = keep;
  if (rem > half || (rem === half && (keep & 1n) === 1n)) {
    rounded += 1n;
  }

  let frac = Number(rounded);
  if (hExp === 0) {
    if (frac >= 1024) return sign | (1 << 10); // rounded up into normal range
    return sign | frac;
  }
  frac -= 1024; // remove implicit leading 1
  if (frac >= 1024) {
    frac = 0;
    hExp += 1;
  }
  if (hExp >= 31) return sign | 0x7c00;
  return sign | (hExp << 10) | frac;
}

export function roundF16(x: number): number {
  return halfToDouble(doubleToHalf(x));
}
