"""Bit-exact assembler/disassembler between Program and eQRbytecode.

Layout summary (all fields MSB-first, every field self-delimiting):

  header byte       version nibble 0001, dialect nibble 0010
  opcode            4 bits (SET=0, INPUT=1, PRINT=2, TREECONDITION=3,
                    TREEJUMP=4, MLINPUT=5, NNLAYER=6, MLOUTPUT=7)
  varint            Elias gamma of (v+1): small register indices and jump
                    targets cost fewest bits
  register          varint(index), subscript flag bit, [varint(element)]
  value type        4-bit tag; ARRAY_HOM adds a nested element tag
  value             tag + payload (BOOL 1 bit, INT8/16 two's complement,
                    floats IEEE bits, STRA7 7 bits/char, STRU8 UTF-8
                    bytes, arrays varint(count) + elements)
  (reg|lit)         1 discriminator bit (0=register, 1=literal)
  NNLAYER           varint(neurons), 3-bit activation, 1-bit encoding,
                    coefficients; fan-in comes from block context

The stream is zero-padded to a byte boundary; decoders reject non-zero
padding so every Program has exactly one byte encoding.
"""

from __future__ import annotations

import math
import struct

from . import ir
from .bits import BitReader, BitWriter, TruncatedStream
from .floats import round_f16, round_f32
from .ir import (
    CmpOp, Kind, MlKind, Program, RegisterRef, Value, ValueType,
)
from .mlp import Activation

HEADER_BYTE = 0x12  # format version 0001, dialect id 0010 (QRind)
QR_MAX_PAYLOAD = 2953

OPCODES = {
    ir.Set: 0, ir.Input: 1, ir.Print: 2, ir.TreeCondition: 3,
    ir.TreeJump: 4, ir.MlInput: 5, ir.NnLayer: 6, ir.MlOutput: 7,
}


class CodecError(ValueError):
    pass


class ProgramInvalid(CodecError):
    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__(
            "program failed validation: "
            + "; ".join(str(d) for d in diagnostics)
        )


class CapacityExceeded(CodecError):
    pass


class BadHeader(CodecError):
    pass


class UnknownOpcode(CodecError):
    pass


# ---------------------------------------------------------------------------
# Variable-length integers (Elias gamma of v+1)

def encode_varint(value: int) -> list:
    """Bits of the exponential code: (k-1) zeros then the k bits of v+1."""
    if value < 0:
        raise CodecError(f"varint cannot encode negative value {value}")
    n = value + 1
    k = n.bit_length()
    bits = [0] * (k - 1)
    for shift in range(k - 1, -1, -1):
        bits.append((n >> shift) & 1)
    return bits


def decode_varint(reader: BitReader) -> int:
    zeros = 0
    while True:
        bit = reader.read_bit()
        if bit:
            break
        zeros += 1
    n = 1
    for _ in range(zeros):
        n = (n << 1) | reader.read_bit()
    return n - 1


def varint_bit_length(value: int) -> int:
    return 2 * (value + 1).bit_length() - 1


# ---------------------------------------------------------------------------
# IEEE float fields

def encode_f16(x: float) -> int:
    """binary16 bit pattern, round-to-nearest-even, overflow to infinity."""
    x = round_f16(x)
    if math.isnan(x):
        return 0x7E00
    if math.isinf(x):
        return 0x7C00 if x > 0 else 0xFC00
    return struct.unpack("<H", struct.pack("<e", x))[0]


def decode_f16(bits: int) -> float:
    return struct.unpack("<e", struct.pack("<H", bits))[0]


def encode_f32(x: float) -> int:
    x = round_f32(x)
    if math.isnan(x):
        return 0x7FC00000
    if math.isinf(x):
        return 0x7F800000 if x > 0 else 0xFF800000
    return struct.unpack("<I", struct.pack("<f", x))[0]


def decode_f32(bits: int) -> float:
    return struct.unpack("<f", struct.pack("<I", bits))[0]


# ---------------------------------------------------------------------------
# Field writers

def _write_register(w: BitWriter, reg: RegisterRef) -> None:
    w.write_bits(encode_varint(reg.index))
    if reg.element is None:
        w.write_bit(0)
    else:
        w.write_bit(1)
        w.write_bits(encode_varint(reg.element))


def _write_type(w: BitWriter, vtype: ValueType) -> None:
    w.write_uint(vtype.kind, 4)
    if vtype.kind is Kind.ARRAY_HOM:
        w.write_uint(vtype.element, 4)


def _write_scalar_payload(w: BitWriter, value: Value) -> None:
    k = value.vtype.kind
    if k is Kind.BOOL:
        w.write_bit(1 if value.payload else 0)
    elif k is Kind.INT8:
        w.write_uint(value.payload & 0xFF, 8)
    elif k is Kind.INT16:
        w.write_uint(value.payload & 0xFFFF, 16)
    elif k is Kind.FLOAT16:
        w.write_uint(encode_f16(value.payload), 16)
    elif k is Kind.FLOAT32:
        w.write_uint(encode_f32(value.payload), 32)
    elif k is Kind.STR_A7:
        w.write_bits(encode_varint(len(value.payload)))
        for c in value.payload:
            w.write_uint(ord(c), 7)
    elif k is Kind.STR_U8:
        raw = value.payload.encode("utf-8")
        w.write_bits(encode_varint(len(raw)))
        w.write_bytes(raw)
    else:
        raise CodecError(f"not a scalar kind: {k.name}")


def _write_value(w: BitWriter, value: Value) -> None:
    _write_type(w, value.vtype)
    k = value.vtype.kind
    if k is Kind.ARRAY_HOM:
        w.write_bits(encode_varint(len(value.payload)))
        for elem in value.payload:
            _write_scalar_payload(w, elem)
    elif k is Kind.ARRAY_HET:
        w.write_bits(encode_varint(len(value.payload)))
        for elem in value.payload:
            _write_value(w, elem)
    else:
        _write_scalar_payload(w, value)


def _write_operand(w: BitWriter, operand) -> None:
    if isinstance(operand, RegisterRef):
        w.write_bit(0)
        _write_register(w, operand)
    else:
        w.write_bit(1)
        _write_value(w, operand)


# ---------------------------------------------------------------------------
# Field readers

def _read_register(r: BitReader) -> RegisterRef:
    index = decode_varint(r)
    if r.read_bit():
        return RegisterRef(index, decode_varint(r))
    return RegisterRef(index)


def _read_type(r: BitReader) -> ValueType:
    code = r.read_uint(4)
    try:
        kind = Kind(code)
    except ValueError:
        raise CodecError(f"unknown type tag {code:04b}") from None
    if kind is Kind.ARRAY_HOM:
        elem_code = r.read_uint(4)
        try:
            elem = Kind(elem_code)
        except ValueError:
            raise CodecError(f"unknown element tag {elem_code:04b}") from None
        if elem in (Kind.ARRAY_HOM, Kind.ARRAY_HET):
            raise CodecError("nested array element tag")
        return ir.array_of(elem)
    return ValueType(kind)


def _read_scalar_payload(r: BitReader, kind: Kind) -> Value:
    if kind is Kind.BOOL:
        return Value.boolean(bool(r.read_bit()))
    if kind is Kind.INT8:
        raw = r.read_uint(8)
        return Value.int8(raw - 256 if raw >= 128 else raw)
    if kind is Kind.INT16:
        raw = r.read_uint(16)
        return Value.int16(raw - 65536 if raw >= 32768 else raw)
    if kind is Kind.FLOAT16:
        return Value.f16(decode_f16(r.read_uint(16)))
    if kind is Kind.FLOAT32:
        return Value.f32(decode_f32(r.read_uint(32)))
    if kind is Kind.STR_A7:
        length = decode_varint(r)
        return Value(ir.STR_A7, "".join(chr(r.read_uint(7)) for _ in range(length)))
    if kind is Kind.STR_U8:
        length = decode_varint(r)
        try:
            return Value(ir.STR_U8, r.read_bytes(length).decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise CodecError(f"bad UTF-8 in string payload: {exc}") from None
    raise CodecError(f"not a scalar kind: {kind.name}")


def _read_value(r: BitReader) -> Value:
    vtype = _read_type(r)
    if vtype.kind is Kind.ARRAY_HOM:
        count = decode_varint(r)
        elems = tuple(_read_scalar_payload(r, vtype.element) for _ in range(count))
        return Value(vtype, elems)
    if vtype.kind is Kind.ARRAY_HET:
        count = decode_varint(r)
        elems = []
        for _ in range(count):
            elem = _read_value(r)
            if elem.vtype.is_array:
                raise CodecError("nested array in heterogeneous payload")
            elems.append(elem)
        return Value(vtype, tuple(elems))
    return _read_scalar_payload(r, vtype.kind)


def _read_operand(r: BitReader):
    if r.read_bit():
        return _read_value(r)
    return _read_register(r)


# ---------------------------------------------------------------------------
# Instructions

def _write_instruction(w: BitWriter, instr) -> None:
    w.write_uint(OPCODES[type(instr)], 4)
    if isinstance(instr, ir.Set):
        _write_register(w, instr.target)
        _write_value(w, instr.value)
    elif isinstance(instr, ir.Input):
        _write_type(w, instr.input_type)
        _write_register(w, instr.target)
    elif isinstance(instr, ir.Print):
        _write_operand(w, instr.source)
    elif isinstance(instr, ir.TreeCondition):
        _write_operand(w, instr.lhs)
        w.write_uint(instr.op, 3)
        _write_operand(w, instr.rhs)
        w.write_bits(encode_varint(instr.target_index))
    elif isinstance(instr, ir.TreeJump):
        w.write_bits(encode_varint(instr.target_index))
    elif isinstance(instr, ir.MlInput):
        w.write_uint(instr.ml_type, 3)
        w.write_bits(encode_varint(instr.arity))
        _write_register(w, instr.source)
    elif isinstance(instr, ir.NnLayer):
        w.write_bits(encode_varint(instr.neuron_count))
        w.write_uint(instr.activation, 3)
        if instr.encoding is Kind.FLOAT16:
            w.write_bit(0)
            for c in instr.coefficients:
                w.write_uint(encode_f16(c), 16)
        else:
            w.write_bit(1)
            for c in instr.coefficients:
                w.write_uint(encode_f32(c), 32)
    elif isinstance(instr, ir.MlOutput):
        _write_register(w, instr.target)
    else:
        raise CodecError(f"not an instruction: {instr!r}")


def _read_instruction(r: BitReader, ml_fan_in: int | None):
    """Returns (instruction, new ml_fan_in context)."""
    opcode = r.read_uint(4)
    if opcode == 0:
        target = _read_register(r)
        return ir.Set(target, _read_value(r)), ml_fan_in
    if opcode == 1:
        vtype = _read_type(r)
        return ir.Input(vtype, _read_register(r)), ml_fan_in
    if opcode == 2:
        return ir.Print(_read_operand(r)), ml_fan_in
    if opcode == 3:
        lhs = _read_operand(r)
        op_code = r.read_uint(3)
        try:
            op = CmpOp(op_code)
        except ValueError:
            raise CodecError(f"unknown comparison code {op_code:03b}") from None
        rhs = _read_operand(r)
        return ir.TreeCondition(lhs, op, rhs, decode_varint(r)), ml_fan_in
    if opcode == 4:
        return ir.TreeJump(decode_varint(r)), ml_fan_in
    if opcode == 5:
        kind_code = r.read_uint(3)
        try:
            ml_type = MlKind(kind_code)
        except ValueError:
            raise CodecError(f"unknown ML type code {kind_code:03b}") from None
        arity = decode_varint(r)
        return ir.MlInput(ml_type, arity, _read_register(r)), arity
    if opcode == 6:
        neuron_count = decode_varint(r)
        act_code = r.read_uint(3)
        try:
            activation = Activation(act_code)
        except ValueError:
            raise CodecError(f"unknown activation code {act_code:03b}") from None
        if ml_fan_in is None:
            raise CodecError("NNLAYER outside an ML block: fan-in unknown")
        count = neuron_count * (ml_fan_in + 1)
        if r.read_bit():
            coeffs = tuple(decode_f32(r.read_uint(32)) for _ in range(count))
            encoding = Kind.FLOAT32
        else:
            coeffs = tuple(decode_f16(r.read_uint(16)) for _ in range(count))
            encoding = Kind.FLOAT16
        return ir.NnLayer(neuron_count, activation, encoding, coeffs), neuron_count
    if opcode == 7:
        return ir.MlOutput(_read_register(r)), None
    raise UnknownOpcode(f"opcode {opcode:04b}")


# ---------------------------------------------------------------------------
# Public API

def assemble(program: Program) -> bytes:
    """Program -> eQRbytecode. Deterministic: equal programs give equal bytes."""
    from .validator import validate

    diags = validate(program)
    if diags:
        raise ProgramInvalid(diags)
    w = BitWriter()
    for instr in program.instructions:
        _write_instruction(w, instr)
    body = w.to_bytes()
    out = bytes([HEADER_BYTE]) + body
    if len(out) > QR_MAX_PAYLOAD:
        raise CapacityExceeded(
            f"bytecode is {len(out)} bytes; QR symbols hold at most "
            f"{QR_MAX_PAYLOAD}"
        )
    return out


def disassemble(data: bytes) -> Program:
    """eQRbytecode -> Program. Exact inverse of assemble (sans source text)."""
    if not data:
        raise BadHeader("empty stream")
    if data[0] != HEADER_BYTE:
        raise BadHeader(
            f"header byte 0x{data[0]:02X} (want 0x{HEADER_BYTE:02X}: "
            "format version 1, dialect 2)"
        )
    r = BitReader(data[1:])
    instructions = []
    ml_fan_in: int | None = None
    # Padding is at most 7 zero bits; a short final instruction (TREEJUMP
    # can be 5 bits) may also end the stream, so non-zero tails must be
    # decoded rather than rejected outright.
    while not (r.remaining() < 8 and r.rest_is_zero()):
        in_tail = r.remaining() < 8
        try:
            instr, ml_fan_in = _read_instruction(r, ml_fan_in)
        except TruncatedStream:
            if in_tail:
                raise CodecError("trailing non-zero padding bits") from None
            raise
        instructions.append(instr)
    while r.remaining():
        if r.read_bit():
            raise CodecError("non-zero padding bits")
    return Program(tuple(instructions))
