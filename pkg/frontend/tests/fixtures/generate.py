#!/usr/bin/env python3
"""Regenerate the web runner's conformance fixtures from the qrind
toolchain (install the package first: pip install -e ../.. ).

Everything the browser consumes crosses a public interface: .eqr
bytecode, QR PNGs, the JSONL session protocol, and printed transcripts.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path

from qrind import ir
from qrind.codec import assemble, encode_f16
from qrind.floats import render_float
from qrind.ir import Kind, Program, RegisterRef, Value
from qrind.mlp import Activation
from qrind.parser import parse_ir
from qrind.protocol import serve
from qrind.qr import EcLevel, QrParams, emit_qr
from qrind.vm import run_to_completion

HERE = Path(__file__).parent
FIG3 = HERE.parent.parent.parent / "tests" / "data" / "fig3.qri"


def fig3_fixtures() -> None:
    program = parse_ir(FIG3.read_text(encoding="utf-8"))
    data = assemble(program)
    (HERE / "fig3.eqr").write_bytes(data)
    (HERE / "fig3.png").write_bytes(
        emit_qr(data, QrParams(ec_level=EcLevel.MEDIUM, module_pixel_size=8))
    )

    transcript = run_to_completion(program, [60.0, 1000.0, True])
    (HERE / "fig3_transcript.txt").write_text(
        "\n".join(transcript.outputs) + "\n", encoding="utf-8"
    )

    lines: list = []
    inputs = iter(
        json.dumps({"type": "input", "value": v}) for v in (60.0, 1000.0, True)
    )
    serve(program, lambda: next(inputs, None), lines.append)
    (HERE / "fig3_protocol.jsonl").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )


def print_parity_fixtures() -> None:
    """A program that prints every rendering-relevant value shape."""
    values = [
        Value.f32(0.1),
        Value.f16(0.1),
        Value.f32(2.0),
        Value.f32(-0.0),
        Value.f16(65504.0),
        Value.f32(1e21),
        Value.f32(1e-7),
        Value.f16(5.960464477539063e-08),  # smallest f16 subnormal
        Value.f32(1.401298464324817e-45),  # smallest f32 subnormal
        Value.f32(123456.789),
        Value.f32(float("inf")),
        Value.f16(float("-inf")),
        Value.int8(-128),
        Value.int16(32767),
        Value.boolean(True),
        Value.boolean(False),
        Value(ir.STR_A7, "plain ascii"),
        Value(ir.STR_U8, "unicode °C λ 漢"),
        Value.hom_array(Kind.FLOAT16, (Value.f16(1.5), Value.f16(-0.25))),
        Value.het_array((Value.int8(1), Value.boolean(True), Value(ir.STR_A7, "s"))),
    ]
    program = Program(tuple(ir.Print(v) for v in values))
    data = assemble(program)
    (HERE / "values_print.eqr").write_bytes(data)
    transcript = run_to_completion(program, [])
    (HERE / "values_print_transcript.txt").write_text(
        "\n".join(transcript.outputs) + "\n", encoding="utf-8"
    )


def f16_cases() -> None:
    """Double -> binary16 rounding cases, including exact tie midpoints."""
    import random

    rng = random.Random(1618)
    cases = []

    def add(x: float) -> None:
        cases.append([repr(x), encode_f16(x)])

    for _ in range(500):
        add(rng.uniform(-70000, 70000) * 10 ** rng.randint(-8, 2))
    # ties between consecutive halves round to even
    for _ in range(200):
        bits = rng.randrange(0, 0x7BFF)
        if (bits >> 10) & 0x1F == 0x1F:
            continue
        lo = struct.unpack("<e", struct.pack("<H", bits))[0]
        hi = struct.unpack("<e", struct.pack("<H", bits + 1))[0]
        add((lo + hi) / 2.0)
    for x in (65519.9, 65520.0, -65520.0, 6.103515625e-05, 2.0 ** -25,
              2.0 ** -24, 1.5 * 2.0 ** -25, 0.0, -0.0):
        add(x)
    (HERE / "f16_cases.json").write_text(json.dumps(cases), encoding="utf-8")


def floatfmt_cases() -> None:
    from qrind.floats import round_f16, round_f32

    cases = []

    def add(x: float, width: int) -> None:
        cases.append([repr(x), width, render_float(x, width)])

    interesting = [
        0.1, 2.0, -0.0, 0.5, 1.0 / 3.0, 123456.789, 1e15, 1e16, 1e21,
        1e-4, 1e-5, 1e-7, 9.999999747378752e-06, 65504.0, 0.25,
        3.141592653589793, 2.5, 0.995, 1e38, 5e-324, 1.7976931348623157e308,
    ]
    for x in interesting:
        add(round_f16(x), 16)
        add(round_f32(x), 32)
        add(x, 64)
        add(round_f32(-x), 32)
    (HERE / "floatfmt_cases.json").write_text(json.dumps(cases), encoding="utf-8")


if __name__ == "__main__":
    fig3_fixtures()
    print_parity_fixtures()
    f16_cases()
    floatfmt_cases()
    print("fixtures written to", HERE)
