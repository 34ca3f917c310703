"""Half/single-precision rounding and the canonical decimal rendering of floats.

Register values and NNLAYER coefficients are stored at binary16 or binary32
width but computed on as Python doubles, so every float that enters the
system is immediately rounded to its storage width. Rendering must be
reproducible across hosts (the web runner prints the same transcripts), so
it is defined here as a fixed algorithm instead of delegating to repr().
"""

from __future__ import annotations

import math
import struct

F16_MAX = 65504.0
# Smallest magnitude that rounds to infinity in binary16 (round-to-nearest-even).
F16_OVERFLOW = 65520.0
F32_OVERFLOW = 3.4028235677973366e38


def round_f32(x: float) -> float:
    """Round a double to the nearest binary32 value (returned as a double)."""
    if math.isnan(x) or math.isinf(x):
        return x
    if abs(x) >= F32_OVERFLOW:
        return math.copysign(math.inf, x)
    return struct.unpack("<f", struct.pack("<f", x))[0]


def round_f16(x: float) -> float:
    """Round a double to the nearest binary16 value (returned as a double).

    struct's 'e' format raises OverflowError instead of rounding to
    infinity, so the overflow boundary is handled explicitly.
    """
    if math.isnan(x) or math.isinf(x):
        return x
    if abs(x) >= F16_OVERFLOW:
        return math.copysign(math.inf, x)
    return struct.unpack("<e", struct.pack("<e", x))[0]


def f16_bits(x: float) -> int:
    """IEEE 754 binary16 bit pattern of x (x must already be f16-exact)."""
    if math.isinf(x):
        return 0x7C00 if x > 0 else 0xFC00
    if math.isnan(x):
        return 0x7E00
    return struct.unpack("<H", struct.pack("<e", x))[0]


def f16_from_bits(bits: int) -> float:
    return struct.unpack("<e", struct.pack("<H", bits))[0]


def f32_bits(x: float) -> int:
    return struct.unpack("<I", struct.pack("<f", x))[0]


def f32_from_bits(bits: int) -> float:
    return struct.unpack("<f", struct.pack("<I", bits))[0]


def f64_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", x))[0]


_REROUND = {16: round_f16, 32: round_f32, 64: lambda x: x}


def render_float(v: float, width: int = 64) -> str:
    """Shortest decimal string that re-rounds to v at the given width.

    Fixed notation rules (shared verbatim by the web runner's renderer):
    NaN/Infinity spelled out; positional form when the decimal exponent is
    in [-4, 16) with at least one fractional digit; otherwise scientific
    `mEsN` with a mandatory exponent sign and no zero padding.
    """
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    if v == 0.0:
        return "-0.0" if math.copysign(1.0, v) < 0 else "0.0"

    reround = _REROUND[width]
    digits = ""
    exp = 0
    for prec in range(1, 18):
        s = f"{v:.{prec - 1}e}"
        if reround(float(s)) == v:
            mant, _, e = s.partition("e")
            digits = mant.replace(".", "").lstrip("-").rstrip("0") or "0"
            exp = int(e)
            break
    assert digits, f"no shortest representation found for {v!r}"

    sign = "-" if v < 0 else ""
    n = len(digits)
    if -4 <= exp < 16:
        if exp >= n - 1:
            body = digits + "0" * (exp - (n - 1)) + ".0"
        elif exp >= 0:
            body = digits[: exp + 1] + "." + digits[exp + 1 :]
        else:
            body = "0." + "0" * (-exp - 1) + digits
    else:
        mant = digits[0] + ("." + digits[1:] if n > 1 else "")
        body = f"{mant}e{'+' if exp >= 0 else '-'}{abs(exp)}"
    return sign + body
