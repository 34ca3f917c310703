// Canonical decimal rendering of floats, shared with the CLI toolchain:
// the shortest digit string that re-rounds to the stored value at its own
// width, positional for decimal exponents in [-4, 16), otherwise
// scientific with a mandatory exponent sign.

import { roundF16 } from "./float16";

export type FloatWidth = 16 | 32 | 64;

function reround(x: number, width: FloatWidth): number {
  if (width === 16) return roundF16(x);
  if (width === 32) return Math.fround(x);
  return x;
}

export function renderFloat(v: number, width: FloatWidth = 64): string {
  if (Number.isNaN(v)) return "NaN";
  if (v === Infinity) return "Infinity";
  if (v === -Infinity) return "-Infinity";
  if (v === 0) return Object.is(v, -0) ? "-0.0" : "0.0";

  let digits = "";
  let exp = 0;
  for (let prec = 1; prec <= 17; prec++) {
    const s = v.toExponential(prec - 1);
    if (Object.is(reround(parseFloat(s), width), v)) {
      const [mant, e] = s.split("e");
      digits = mant.replace(".", "").replace("-", "").replace(/0+$/, "") || "0";
      exp = parseInt(e, 10);
      break;
    }
  }
  if (!digits) throw new Error(`no shortest representation for ${v}`);

  const sign = v < 0 ? "-" : "";
  const n = digits.length;
  let body: string;
  if (exp >= -4 && exp < 16) {
    if (exp >= n - 1) {
      body = digits + "0".repeat(exp - (n - 1)) + ".0";
    } else if (exp >= 0) {
      body = digits.slice(0, exp + 1) + "." + digits.slice(exp + 1);
    } else {
      body = "0." + "0".repeat(-exp - 1) + digits;
    }
  } else {
    const mant = digits[0] + (n > 1 ? "." + digits.slice(1) : "");
    body = `${mant}e${exp >= 0 ? "+" : "-"}${Math.abs(exp)}`;
  }
  return sign + body;
}
