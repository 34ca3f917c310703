"""Instruction and value domain model for the QRind intermediate representation.

The eight instruction forms, the typed value domain, and the canonical
pretty-printer live here. Parsing is in parser.py, static checks in
validator.py, and the binary layout in codec.py.

Equality on values and programs is bit-exact for floats (NaN equals NaN,
-0.0 differs from 0.0) so that text and bytecode round trips can be
asserted with plain ==.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Union

from .floats import f64_bits, render_float, round_f16, round_f32
from .mlp import Activation


class Kind(IntEnum):
    """Value type tags. The enum value is the 4-bit wire code."""

    BOOL = 0
    INT8 = 1
    INT16 = 2
    FLOAT16 = 3
    FLOAT32 = 4
    STR_A7 = 5
    STR_U8 = 6
    ARRAY_HOM = 7
    ARRAY_HET = 8


SCALAR_KINDS = (
    Kind.BOOL, Kind.INT8, Kind.INT16, Kind.FLOAT16, Kind.FLOAT32,
    Kind.STR_A7, Kind.STR_U8,
)

# Canonical spelling of each scalar kind in source text, plus the aliases
# used by the running example (INPUT FLOAT, INPUT BOOL, ...).
KIND_NAMES = {
    Kind.BOOL: "BOOL",
    Kind.INT8: "INT8",
    Kind.INT16: "INT16",
    Kind.FLOAT16: "FLOAT16",
    Kind.FLOAT32: "FLOAT32",
    Kind.STR_A7: "STRA7",
    Kind.STR_U8: "STRU8",
}
KIND_ALIASES = {
    "INT": Kind.INT16,
    "FLOAT": Kind.FLOAT32,
    "STRING": Kind.STR_U8,
}
# Rendering of INPUT types prefers the example's short spellings.
INPUT_KEYWORDS = {
    Kind.BOOL: "BOOL",
    Kind.INT16: "INT",
    Kind.FLOAT32: "FLOAT",
    Kind.STR_U8: "STRING",
    Kind.INT8: "INT8",
    Kind.FLOAT16: "FLOAT16",
    Kind.STR_A7: "STRA7",
}


def lookup_kind(name: str) -> Kind | None:
    name = name.upper()
    if name in KIND_ALIASES:
        return KIND_ALIASES[name]
    for kind, spelled in KIND_NAMES.items():
        if name == spelled:
            return kind
    return None


@dataclass(frozen=True, slots=True)
class ValueType:
    """A scalar tag, or ARRAY_HOM with its element tag, or ARRAY_HET."""

    kind: Kind
    element: Kind | None = None

    def __post_init__(self) -> None:
        if self.kind is Kind.ARRAY_HOM:
            if self.element is None or self.element not in SCALAR_KINDS:
                raise ValueError("homogeneous array needs a scalar element kind")
        elif self.element is not None:
            raise ValueError(f"{self.kind.name} carries no element kind")

    @property
    def is_array(self) -> bool:
        return self.kind in (Kind.ARRAY_HOM, Kind.ARRAY_HET)

    def __str__(self) -> str:
        if self.kind is Kind.ARRAY_HOM:
            return f"ARRAY<{KIND_NAMES[self.element]}>"
        if self.kind is Kind.ARRAY_HET:
            return "HET"
        return KIND_NAMES[self.kind]


BOOL = ValueType(Kind.BOOL)
INT8 = ValueType(Kind.INT8)
INT16 = ValueType(Kind.INT16)
FLOAT16 = ValueType(Kind.FLOAT16)
FLOAT32 = ValueType(Kind.FLOAT32)
STR_A7 = ValueType(Kind.STR_A7)
STR_U8 = ValueType(Kind.STR_U8)
ARRAY_HET = ValueType(Kind.ARRAY_HET)


def array_of(element: Kind) -> ValueType:
    return ValueType(Kind.ARRAY_HOM, element)


@dataclass(frozen=True, slots=True, eq=False)
class Value:
    """A tagged runtime datum. Construct through the factories below;
    the constructor validates ranges, character sets and float widths."""

    vtype: ValueType
    payload: Union[bool, int, float, str, tuple]

    def __post_init__(self) -> None:
        k, p = self.vtype.kind, self.payload
        if k is Kind.BOOL:
            if not isinstance(p, bool):
                raise ValueError("BOOL payload must be a bool")
        elif k is Kind.INT8:
            if not isinstance(p, int) or isinstance(p, bool) or not -128 <= p <= 127:
                raise ValueError(f"INT8 payload out of range: {p!r}")
        elif k is Kind.INT16:
            if not isinstance(p, int) or isinstance(p, bool) or not -32768 <= p <= 32767:
                raise ValueError(f"INT16 payload out of range: {p!r}")
        elif k is Kind.FLOAT16:
            if not isinstance(p, float) or not _same_float(round_f16(p), p):
                raise ValueError(f"FLOAT16 payload not binary16-exact: {p!r}")
        elif k is Kind.FLOAT32:
            if not isinstance(p, float) or not _same_float(round_f32(p), p):
                raise ValueError(f"FLOAT32 payload not binary32-exact: {p!r}")
        elif k is Kind.STR_A7:
            if not isinstance(p, str) or any(ord(c) >= 128 for c in p):
                raise ValueError("STR_A7 payload must be ASCII-7 text")
        elif k is Kind.STR_U8:
            if not isinstance(p, str):
                raise ValueError("STR_U8 payload must be text")
        elif k is Kind.ARRAY_HOM:
            if not isinstance(p, tuple):
                raise ValueError("array payload must be a tuple of Values")
            elem = self.vtype.element
            for v in p:
                if not isinstance(v, Value) or v.vtype.kind is not elem:
                    raise ValueError(f"homogeneous array element is not {elem.name}")
        elif k is Kind.ARRAY_HET:
            if not isinstance(p, tuple):
                raise ValueError("array payload must be a tuple of Values")
            for v in p:
                if not isinstance(v, Value):
                    raise ValueError("array element is not a Value")
                if v.vtype.is_array:
                    raise ValueError("arrays nest at most one level")

    # -- factories ----------------------------------------------------

    @staticmethod
    def boolean(b: bool) -> "Value":
        return Value(BOOL, bool(b))

    @staticmethod
    def int8(i: int) -> "Value":
        return Value(INT8, i)

    @staticmethod
    def int16(i: int) -> "Value":
        return Value(INT16, i)

    @staticmethod
    def integer(i: int) -> "Value":
        """Narrowest int kind that fits (the untyped-literal rule)."""
        return Value(INT8 if -128 <= i <= 127 else INT16, i)

    @staticmethod
    def f16(x: float) -> "Value":
        x = round_f16(x)
        return Value(FLOAT16, float("nan") if math.isnan(x) else x)

    @staticmethod
    def f32(x: float) -> "Value":
        x = round_f32(x)
        return Value(FLOAT32, float("nan") if math.isnan(x) else x)

    @staticmethod
    def text(s: str) -> "Value":
        """ASCII-7 when possible, UTF-8 otherwise (the untyped-literal rule)."""
        return Value(STR_A7 if all(ord(c) < 128 for c in s) else STR_U8, s)

    @staticmethod
    def hom_array(element: Kind, items: tuple) -> "Value":
        return Value(array_of(element), tuple(items))

    @staticmethod
    def het_array(items: tuple) -> "Value":
        return Value(ARRAY_HET, tuple(items))

    # -- equality (bit-exact for floats) ------------------------------

    def _key(self):
        k = self.vtype.kind
        if k in (Kind.FLOAT16, Kind.FLOAT32):
            return (self.vtype, f64_bits(self.payload))
        if self.vtype.is_array:
            return (self.vtype, tuple(v._key() for v in self.payload))
        return (self.vtype, self.payload)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Value):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def is_numeric(self) -> bool:
        return self.vtype.kind in (Kind.INT8, Kind.INT16, Kind.FLOAT16, Kind.FLOAT32)

    def __repr__(self) -> str:
        return f"Value({self.vtype}, {self.payload!r})"


@dataclass(frozen=True, slots=True)
class RegisterRef:
    """Rn or Rn[i]; indices are unbounded above."""

    index: int
    element: int | None = None

    def __post_init__(self) -> None:
        if self.index < 0 or (self.element is not None and self.element < 0):
            raise ValueError("register indices are non-negative")

    def __str__(self) -> str:
        if self.element is None:
            return f"R{self.index}"
        return f"R{self.index}[{self.element}]"


class CmpOp(IntEnum):
    """Comparison operators. The enum value is the 3-bit wire code."""

    EQ = 0
    NE = 1
    LT = 2
    LE = 3
    GT = 4
    GE = 5


CMP_SYMBOLS = {
    CmpOp.EQ: "==", CmpOp.NE: "!=", CmpOp.LT: "<",
    CmpOp.LE: "<=", CmpOp.GT: ">", CmpOp.GE: ">=",
}
CMP_BY_SYMBOL = {s: op for op, s in CMP_SYMBOLS.items()}


class MlKind(IntEnum):
    """ML model families; only MLP (wire code 000) is defined."""

    MLP = 0


Operand = Union[RegisterRef, Value]


@dataclass(frozen=True, slots=True)
class Set:
    target: RegisterRef
    value: Value


@dataclass(frozen=True, slots=True)
class Input:
    input_type: ValueType
    target: RegisterRef


@dataclass(frozen=True, slots=True)
class Print:
    source: Operand


@dataclass(frozen=True, slots=True)
class TreeCondition:
    lhs: Operand
    op: CmpOp
    rhs: Operand
    target_index: int


@dataclass(frozen=True, slots=True)
class TreeJump:
    target_index: int


@dataclass(frozen=True, slots=True)
class MlInput:
    ml_type: MlKind
    arity: int
    source: RegisterRef


@dataclass(frozen=True, slots=True, eq=False)
class NnLayer:
    neuron_count: int
    activation: Activation
    encoding: Kind  # FLOAT16 or FLOAT32
    coefficients: tuple

    def __post_init__(self) -> None:
        if self.neuron_count < 1:
            raise ValueError("layer needs at least one neuron")
        if self.encoding not in (Kind.FLOAT16, Kind.FLOAT32):
            raise ValueError("coefficient encoding is FLOAT16 or FLOAT32")

    def _key(self):
        return (
            self.neuron_count, self.activation, self.encoding,
            tuple(f64_bits(c) for c in self.coefficients),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, NnLayer):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


@dataclass(frozen=True, slots=True)
class MlOutput:
    target: RegisterRef


Instruction = Union[
    Set, Input, Print, TreeCondition, TreeJump, MlInput, NnLayer, MlOutput
]


@dataclass(frozen=True)
class Program:
    """Ordered instruction list; source_lines carry diagnostics text only
    and never participate in equality."""

    instructions: tuple
    source_lines: tuple | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.instructions)

    def line_for(self, index: int) -> str:
        if self.source_lines is not None and 0 <= index < len(self.source_lines):
            return self.source_lines[index]
        if 0 <= index < len(self.instructions):
            return render_instruction(self.instructions[index])
        return "<out of range>"


def _same_float(a: float, b: float) -> bool:
    return f64_bits(a) == f64_bits(b)


# ---------------------------------------------------------------------------
# Canonical rendering

def _infers_to(v: Value) -> bool:
    """Would the untyped-literal rule reproduce this value's type?"""
    k = v.vtype.kind
    if k is Kind.BOOL or k is Kind.FLOAT32:
        return True
    if k is Kind.INT8:
        return True
    if k is Kind.INT16:
        return not -128 <= v.payload <= 127
    if k is Kind.STR_A7:
        return True
    if k is Kind.STR_U8:
        return any(ord(c) >= 128 for c in v.payload)
    return False


def quote(s: str) -> str:
    out = ['"']
    for c in s:
        if c == '"':
            out.append('\\"')
        elif c == "\\":
            out.append("\\\\")
        elif c == "\n":
            out.append("\\n")
        elif c == "\t":
            out.append("\\t")
        elif c == "\r":
            out.append("\\r")
        else:
            out.append(c)
    out.append('"')
    return "".join(out)


def _render_scalar_payload(v: Value) -> str:
    k = v.vtype.kind
    if k is Kind.BOOL:
        return "TRUE" if v.payload else "FALSE"
    if k in (Kind.INT8, Kind.INT16):
        return str(v.payload)
    if k is Kind.FLOAT16:
        return render_float(v.payload, 16)
    if k is Kind.FLOAT32:
        return render_float(v.payload, 32)
    return quote(v.payload)


def render_literal(v: Value) -> str:
    k = v.vtype.kind
    if k is Kind.ARRAY_HOM:
        inner = ", ".join(_render_scalar_payload(e) for e in v.payload)
        return f"[{inner}]:{v.vtype}"
    if k is Kind.ARRAY_HET:
        return "[" + ", ".join(render_literal(e) for e in v.payload) + "]"
    body = _render_scalar_payload(v)
    if _infers_to(v):
        return body
    return f"{body}:{KIND_NAMES[k]}"


def _render_operand(op: Operand) -> str:
    return str(op) if isinstance(op, RegisterRef) else render_literal(op)


def render_instruction(instr: Instruction) -> str:
    if isinstance(instr, Set):
        return f"SET {instr.target} TO {render_literal(instr.value)}"
    if isinstance(instr, Input):
        return f"INPUT {INPUT_KEYWORDS[instr.input_type.kind]} INTO {instr.target}"
    if isinstance(instr, Print):
        return f"PRINT {_render_operand(instr.source)}"
    if isinstance(instr, TreeCondition):
        return (
            f"TREECONDITION {_render_operand(instr.lhs)} "
            f"{CMP_SYMBOLS[instr.op]} {_render_operand(instr.rhs)} "
            f"({instr.target_index})"
        )
    if isinstance(instr, TreeJump):
        return f"TREEJUMP ({instr.target_index})"
    if isinstance(instr, MlInput):
        return f"MLINPUT {instr.ml_type.name} {instr.arity} FROM {instr.source}"
    if isinstance(instr, NnLayer):
        weights = ", ".join(
            render_float(c, 16 if instr.encoding is Kind.FLOAT16 else 32)
            for c in instr.coefficients
        )
        return (
            f"NNLAYER {instr.neuron_count} {instr.activation.name} "
            f"{KIND_NAMES[instr.encoding]} {weights}"
        )
    if isinstance(instr, MlOutput):
        return f"MLOUTPUT INTO {instr.target}"
    raise TypeError(f"not an instruction: {instr!r}")


def render(program: Program) -> str:
    """Canonical text form; parse_ir(render(p)) == p for every valid p."""
    width = len(f"({len(program.instructions) - 1})") if program.instructions else 3
    lines = [
        f"{f'({i})':<{width}} {render_instruction(instr)}"
        for i, instr in enumerate(program.instructions)
    ]
    return "\n".join(lines) + ("\n" if lines else "")
