"""Deterministic random-program generators shared by the property suites.

random_program() produces validate-clean programs within the acceptance
envelope (instruction count <= 50, register indices <= 100, string
lengths <= 40, MLP dims <= 8). jump_heavy_program() produces fault-free
control-flow programs whose jump targets may overshoot the end, for the
implicit-exit property.
"""

from __future__ import annotations

import random

from qrind import ir
from qrind.ir import CmpOp, Kind, MlKind, Program, RegisterRef, Value
from qrind.mlp import Activation

_ASCII = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    " !#$%&'()*+,-./:;<=>?@[]^_`{|}~\"\\"
)
_UNICODE_EXTRA = "°éßλ漢😀"


def random_string(rng: random.Random, max_len: int = 40, ascii_only: bool = False) -> str:
    pool = _ASCII if ascii_only else _ASCII + _UNICODE_EXTRA
    n = rng.randint(0, max_len)
    s = "".join(rng.choice(pool) for _ in range(n))
    if rng.random() < 0.1:
        s += rng.choice("\n\t\r")
    return s[:max_len]


def random_scalar(rng: random.Random, kind: Kind) -> Value:
    if kind is Kind.BOOL:
        return Value.boolean(rng.random() < 0.5)
    if kind is Kind.INT8:
        return Value.int8(rng.choice([-128, -1, 0, 1, 127, rng.randint(-128, 127)]))
    if kind is Kind.INT16:
        return Value.int16(
            rng.choice([-32768, -129, 128, 32767, rng.randint(-32768, 32767)])
        )
    if kind is Kind.FLOAT16:
        if rng.random() < 0.05:
            return Value.f16(rng.choice([float("inf"), float("-inf"), 65504.0]))
        return Value.f16(rng.uniform(-1000, 1000))
    if kind is Kind.FLOAT32:
        if rng.random() < 0.05:
            return Value.f32(rng.choice([float("inf"), float("-inf"), -0.0]))
        return Value.f32(rng.uniform(-1e6, 1e6) * 10 ** rng.randint(-6, 6))
    if kind is Kind.STR_A7:
        return Value(ir.STR_A7, random_string(rng, ascii_only=True))
    if kind is Kind.STR_U8:
        return Value(ir.STR_U8, random_string(rng))
    raise ValueError(kind)


def random_value(rng: random.Random) -> Value:
    roll = rng.random()
    if roll < 0.75:
        return random_scalar(rng, rng.choice(ir.SCALAR_KINDS))
    if roll < 0.9:
        elem = rng.choice(ir.SCALAR_KINDS)
        items = tuple(random_scalar(rng, elem) for _ in range(rng.randint(0, 6)))
        return Value.hom_array(elem, items)
    items = tuple(
        random_scalar(rng, rng.choice(ir.SCALAR_KINDS))
        for _ in range(rng.randint(0, 6))
    )
    return Value.het_array(items)


def random_register(rng: random.Random, max_index: int = 100) -> RegisterRef:
    index = rng.randint(0, max_index)
    if rng.random() < 0.3:
        return RegisterRef(index, rng.randint(0, 20))
    return RegisterRef(index)


def _random_operand(rng: random.Random):
    if rng.random() < 0.5:
        return random_register(rng)
    return random_value(rng)


def _random_ml_block(rng: random.Random) -> list:
    arity = rng.randint(1, 8)
    block = [ir.MlInput(MlKind.MLP, arity, random_register(rng))]
    fan_in = arity
    for _ in range(rng.randint(1, 3)):
        neurons = rng.randint(1, 8)
        encoding = rng.choice([Kind.FLOAT16, Kind.FLOAT32])
        count = neurons * (fan_in + 1)
        if encoding is Kind.FLOAT16:
            coeffs = tuple(
                Value.f16(rng.uniform(-4, 4)).payload for _ in range(count)
            )
        else:
            coeffs = tuple(
                Value.f32(rng.uniform(-4, 4)).payload for _ in range(count)
            )
        block.append(
            ir.NnLayer(neurons, rng.choice(list(Activation)), encoding, coeffs)
        )
        fan_in = neurons
    block.append(ir.MlOutput(random_register(rng)))
    return block


def random_program(rng: random.Random, max_instructions: int = 50) -> Program:
    """A validate-clean program; jump targets land in [0, len]."""
    target_len = rng.randint(0, max_instructions)
    instructions: list = []
    jump_slots: list = []
    while len(instructions) < target_len:
        roll = rng.random()
        if roll < 0.22:
            instructions.append(ir.Set(random_register(rng), random_value(rng)))
        elif roll < 0.38:
            kind = rng.choice(ir.SCALAR_KINDS)
            instructions.append(
                ir.Input(ir.ValueType(kind), random_register(rng))
            )
        elif roll < 0.56:
            instructions.append(ir.Print(_random_operand(rng)))
        elif roll < 0.72:
            jump_slots.append(len(instructions))
            instructions.append(
                ir.TreeCondition(
                    _random_operand(rng), rng.choice(list(CmpOp)),
                    _random_operand(rng), -1,
                )
            )
        elif roll < 0.82:
            jump_slots.append(len(instructions))
            instructions.append(ir.TreeJump(-1))
        elif len(instructions) + 3 <= target_len + 2:
            instructions.extend(_random_ml_block(rng))

    n = len(instructions)
    for slot in jump_slots:
        target = rng.randint(0, n)
        instr = instructions[slot]
        if isinstance(instr, ir.TreeJump):
            instructions[slot] = ir.TreeJump(target)
        else:
            instructions[slot] = ir.TreeCondition(
                instr.lhs, instr.op, instr.rhs, target
            )
    return Program(tuple(instructions))


def jump_heavy_program(rng: random.Random, max_instructions: int = 12) -> Program:
    """Fault-free by construction: numeric-literal comparisons, no INPUT,
    no ML. Jump targets sampled in [0, len + 3] (overshoots legal)."""
    n = rng.randint(1, max_instructions)
    instructions: list = []
    for _ in range(n):
        roll = rng.random()
        if roll < 0.25:
            instructions.append(
                ir.Set(RegisterRef(rng.randint(0, 5)), Value.integer(rng.randint(-5, 5)))
            )
        elif roll < 0.45:
            instructions.append(ir.Print(Value.text("x")))
        elif roll < 0.75:
            instructions.append(
                ir.TreeCondition(
                    random_scalar(rng, rng.choice([Kind.INT8, Kind.FLOAT32])),
                    rng.choice(list(CmpOp)),
                    random_scalar(rng, rng.choice([Kind.INT16, Kind.FLOAT16])),
                    rng.randint(0, n + 3),
                )
            )
        else:
            instructions.append(ir.TreeJump(rng.randint(0, n + 3)))
    return Program(tuple(instructions))
