"""Session-based interpreter for QRind programs.

A Session executes one instruction per step() and suspends at INPUT, so a
frontend (terminal or browser) can drive it interactively. step() returns
the events produced by that instruction; the session's status tells the
driver what to do next. Any control transfer to an index at or past the
end of the program is the implicit exit.

Registers hold either a scalar Value or a mutable array of scalar Values;
writing Rn[i] into an undefined or scalar register replaces it with an
array grown to i+1 (unset slots are holes, and reading a hole or an
undefined register is a fault, never a default).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import ir, mlp
from .codec import ProgramInvalid
from .floats import render_float, round_f16, round_f32
from .ir import Kind, Program, RegisterRef, Value, ValueType
from .validator import validate

DEFAULT_STEP_BUDGET = 1_000_000


class Status(enum.Enum):
    RUNNING = "running"
    AWAITING_INPUT = "awaiting_input"
    HALTED = "halted"
    FAULTED = "faulted"


@dataclass(frozen=True)
class Output:
    text: str


@dataclass(frozen=True)
class InputRequest:
    expected: ValueType
    prompt_context: str | None


@dataclass(frozen=True)
class Halted:
    pass


@dataclass(frozen=True)
class Fault:
    reason: str
    pc: int
    instruction: str


SessionEvent = Output | InputRequest | Halted | Fault


class VmError(Exception):
    pass


class TypeMismatch(VmError):
    pass


class InputsExhausted(VmError):
    pass


class BudgetExceeded(VmError):
    pass


class _FaultSignal(Exception):
    """Internal: converted to a Fault event by step()."""

    def __init__(self, reason: str):
        self.reason = reason


def render_value(v) -> str:
    """PRINT rendering: TRUE/FALSE, decimal ints, shortest floats,
    bracketed arrays, holes as UNDEFINED."""
    if v is None:
        return "UNDEFINED"
    if isinstance(v, list):
        return "[" + ", ".join(render_value(e) for e in v) + "]"
    k = v.vtype.kind
    if k is Kind.BOOL:
        return "TRUE" if v.payload else "FALSE"
    if k in (Kind.INT8, Kind.INT16):
        return str(v.payload)
    if k is Kind.FLOAT16:
        return render_float(v.payload, 16)
    if k is Kind.FLOAT32:
        return render_float(v.payload, 32)
    if k in (Kind.STR_A7, Kind.STR_U8):
        return v.payload
    return "[" + ", ".join(render_value(e) for e in v.payload) + "]"


class Session:
    def __init__(self, program: Program):
        self.program = program
        self.pc = 0
        self.registers: dict = {}
        self.ml_buffer: list | None = None
        self.status = Status.RUNNING if program.instructions else Status.HALTED
        self.awaiting: tuple | None = None  # (target ref, expected type)
        self.last_output: str | None = None
        self.fault: Fault | None = None

    # -- register file -------------------------------------------------

    def _read(self, ref: RegisterRef):
        cur = self.registers.get(ref.index)
        if cur is None:
            raise _FaultSignal(f"UndefinedRegister: R{ref.index} was never set")
        if ref.element is None:
            return cur
        if not isinstance(cur, list):
            raise _FaultSignal(
                f"TypeMismatch: R{ref.index} is scalar, cannot index [{ref.element}]"
            )
        if ref.element >= len(cur) or cur[ref.element] is None:
            raise _FaultSignal(
                f"UndefinedRegister: R{ref.index}[{ref.element}] was never set"
            )
        return cur[ref.element]

    def _write(self, ref: RegisterRef, value: Value) -> None:
        if ref.element is None:
            if value.vtype.is_array:
                self.registers[ref.index] = list(value.payload)
            else:
                self.registers[ref.index] = value
            return
        if value.vtype.is_array:
            raise _FaultSignal(
                "TypeMismatch: array elements hold scalars, not arrays"
            )
        cur = self.registers.get(ref.index)
        if not isinstance(cur, list):
            cur = []  # undefined or scalar: replaced by a fresh array
            self.registers[ref.index] = cur
        while len(cur) <= ref.element:
            cur.append(None)
        cur[ref.element] = value

    # -- operand evaluation ---------------------------------------------

    def _operand(self, op):
        if isinstance(op, RegisterRef):
            return self._read(op)
        if op.vtype.is_array:
            return list(op.payload)
        return op

    # -- stepping --------------------------------------------------------

    def step(self) -> list:
        """Execute the instruction at pc. Returns the events it produced."""
        if self.status is not Status.RUNNING:
            raise VmError(f"cannot step a session in status {self.status.value}")
        instr = self.program.instructions[self.pc]
        try:
            return self._execute(instr)
        except _FaultSignal as f:
            self.status = Status.FAULTED
            self.fault = Fault(f.reason, self.pc, self.program.line_for(self.pc))
            return [self.fault]

    def _advance(self, to: int) -> list:
        if to >= len(self.program.instructions):
            self.pc = len(self.program.instructions)
            self.status = Status.HALTED
            return [Halted()]
        self.pc = to
        return []

    def _execute(self, instr) -> list:
        if isinstance(instr, ir.Set):
            self._write(instr.target, instr.value)
            return self._advance(self.pc + 1)

        if isinstance(instr, ir.Input):
            self.status = Status.AWAITING_INPUT
            self.awaiting = (instr.target, instr.input_type)
            return [InputRequest(instr.input_type, self.last_output)]

        if isinstance(instr, ir.Print):
            text = render_value(self._operand(instr.source))
            self.last_output = text
            events = [Output(text)]
            events.extend(self._advance(self.pc + 1))
            return events

        if isinstance(instr, ir.TreeCondition):
            lhs = self._operand(instr.lhs)
            rhs = self._operand(instr.rhs)
            taken = _compare(lhs, instr.op, rhs)
            return self._advance(instr.target_index if taken else self.pc + 1)

        if isinstance(instr, ir.TreeJump):
            return self._advance(instr.target_index)

        if isinstance(instr, ir.MlInput):
            vec = self._operand(instr.source)
            if not isinstance(vec, list):
                raise _FaultSignal(
                    "TypeMismatch: MLINPUT source must be an array register"
                )
            xs = []
            for i, elem in enumerate(vec):
                if elem is None:
                    raise _FaultSignal(
                        f"UndefinedRegister: R{instr.source.index}[{i}] was never set"
                    )
                if not elem.is_numeric():
                    raise _FaultSignal(
                        f"TypeMismatch: ML input element {i} is {elem.vtype}, not numeric"
                    )
                xs.append(float(elem.payload))
            if len(xs) != instr.arity:
                raise _FaultSignal(
                    f"MlArityMismatch: declared {instr.arity} inputs, register "
                    f"holds {len(xs)}"
                )
            self.ml_buffer = xs
            return self._advance(self.pc + 1)

        if isinstance(instr, ir.NnLayer):
            if self.ml_buffer is None:
                raise _FaultSignal("MlSequenceError: NNLAYER with no ML data path")
            fan_in = len(self.ml_buffer)
            expected = instr.neuron_count * (fan_in + 1)
            if len(instr.coefficients) != expected:
                raise _FaultSignal(
                    f"MlArityMismatch: layer needs {expected} coefficients "
                    f"for fan-in {fan_in}, has {len(instr.coefficients)}"
                )
            layer = mlp.unflatten_layer(
                instr.coefficients, fan_in, instr.neuron_count, instr.activation
            )
            self.ml_buffer = mlp.layer_forward(layer, self.ml_buffer)
            return self._advance(self.pc + 1)

        if isinstance(instr, ir.MlOutput):
            if self.ml_buffer is None:
                raise _FaultSignal("MlSequenceError: MLOUTPUT with no ML data path")
            if len(self.ml_buffer) == 1:
                self._write(instr.target, Value.f32(self.ml_buffer[0]))
            else:
                if instr.target.element is not None:
                    raise _FaultSignal(
                        "TypeMismatch: vector MLOUTPUT into an array element"
                    )
                self.registers[instr.target.index] = [
                    Value.f32(x) for x in self.ml_buffer
                ]
            self.ml_buffer = None
            return self._advance(self.pc + 1)

        raise _FaultSignal(f"unknown instruction {type(instr).__name__}")


def _compare(lhs, op: ir.CmpOp, rhs) -> bool:
    if isinstance(lhs, list) or isinstance(rhs, list):
        raise _FaultSignal("TypeMismatch: arrays cannot be compared")
    lk, rk = lhs.vtype.kind, rhs.vtype.kind
    if lhs.is_numeric() and rhs.is_numeric():
        a, b = float(lhs.payload), float(rhs.payload)
        return _cmp_table(op, a, b)
    if lk is Kind.BOOL and rk is Kind.BOOL:
        if op not in (ir.CmpOp.EQ, ir.CmpOp.NE):
            raise _FaultSignal(
                f"TypeMismatch: BOOL supports == and != only, not "
                f"{ir.CMP_SYMBOLS[op]}"
            )
        return (lhs.payload == rhs.payload) == (op is ir.CmpOp.EQ)
    if lk in (Kind.STR_A7, Kind.STR_U8) and rk in (Kind.STR_A7, Kind.STR_U8):
        if op not in (ir.CmpOp.EQ, ir.CmpOp.NE):
            raise _FaultSignal(
                f"TypeMismatch: strings support == and != only, not "
                f"{ir.CMP_SYMBOLS[op]}"
            )
        return (lhs.payload == rhs.payload) == (op is ir.CmpOp.EQ)
    raise _FaultSignal(
        f"TypeMismatch: cannot compare {lhs.vtype} with {rhs.vtype}"
    )


def _cmp_table(op: ir.CmpOp, a: float, b: float) -> bool:
    if op is ir.CmpOp.EQ:
        return a == b
    if op is ir.CmpOp.NE:
        return a != b
    if op is ir.CmpOp.LT:
        return a < b
    if op is ir.CmpOp.LE:
        return a <= b
    if op is ir.CmpOp.GT:
        return a > b
    return a >= b


# ---------------------------------------------------------------------------
# Public driver API

def create_session(program: Program, strict: bool = True) -> Session:
    """New session at pc 0. strict enforces empty validate() diagnostics;
    the execution chain may disable it and rely on runtime checks plus the
    implicit-exit rule."""
    if strict:
        diags = validate(program)
        if diags:
            raise ProgramInvalid(diags)
    return Session(program)


def coerce_input(expected: ValueType, raw) -> Value:
    """Check/coerce a resume value against the awaited type.

    Strict: BOOL takes only booleans, ints take only in-range integers,
    floats take any real (rounded to width), strings take text (ASCII-7
    enforced for STRA7). Raises TypeMismatch otherwise.
    """
    if isinstance(raw, Value):
        if raw.vtype.is_array:
            raise TypeMismatch("array is not a scalar input")
        raw = raw.payload
    kind = expected.kind
    if kind is Kind.BOOL:
        if isinstance(raw, bool):
            return Value.boolean(raw)
        raise TypeMismatch(f"expected BOOL, got {raw!r}")
    if kind in (Kind.INT8, Kind.INT16):
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise TypeMismatch(f"expected {ir.KIND_NAMES[kind]}, got {raw!r}")
        lo, hi = (-128, 127) if kind is Kind.INT8 else (-32768, 32767)
        if not lo <= raw <= hi:
            raise TypeMismatch(
                f"{ir.KIND_NAMES[kind]} input out of range: {raw}"
            )
        return Value(ValueType(kind), raw)
    if kind in (Kind.FLOAT16, Kind.FLOAT32):
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise TypeMismatch(f"expected {ir.KIND_NAMES[kind]}, got {raw!r}")
        x = float(raw)
        return Value(
            ValueType(kind),
            round_f16(x) if kind is Kind.FLOAT16 else round_f32(x),
        )
    if kind in (Kind.STR_A7, Kind.STR_U8):
        if not isinstance(raw, str):
            raise TypeMismatch(f"expected {ir.KIND_NAMES[kind]}, got {raw!r}")
        if kind is Kind.STR_A7 and any(ord(c) >= 128 for c in raw):
            raise TypeMismatch("STRA7 input must be ASCII-7")
        return Value(ValueType(kind), raw)
    raise TypeMismatch(f"cannot input values of type {expected}")


def resume_with_input(session: Session, raw) -> Session:
    """Store one awaited input and return to RUNNING. On TypeMismatch the
    session is left AWAITING_INPUT so the frontend can re-prompt."""
    if session.status is not Status.AWAITING_INPUT:
        raise VmError("session is not awaiting input")
    target, expected = session.awaiting
    value = coerce_input(expected, raw)
    session.awaiting = None
    session.status = Status.RUNNING
    try:
        session._write(target, value)
    except _FaultSignal as f:
        session.status = Status.FAULTED
        session.fault = Fault(
            f.reason, session.pc, session.program.line_for(session.pc)
        )
        return session
    if session.pc + 1 >= len(session.program.instructions):
        session.pc = len(session.program.instructions)
        session.status = Status.HALTED
    else:
        session.pc += 1
    return session


@dataclass(frozen=True)
class Transcript:
    outputs: tuple
    status: Status
    fault: Fault | None = None


def run_to_completion(
    program: Program,
    inputs,
    step_budget: int = DEFAULT_STEP_BUDGET,
    strict: bool = True,
) -> Transcript:
    """Batch driver: feeds inputs in order, collects Output texts."""
    if step_budget <= 0:
        raise ValueError("step budget must be positive")
    session = create_session(program, strict=strict)
    pending = list(inputs)
    steps = 0
    outputs: list = []
    while True:
        if session.status is Status.RUNNING:
            if steps >= step_budget:
                raise BudgetExceeded(f"no halt within {step_budget} steps")
            steps += 1
            for event in session.step():
                if isinstance(event, Output):
                    outputs.append(event.text)
        elif session.status is Status.AWAITING_INPUT:
            if not pending:
                raise InputsExhausted(
                    f"program wants input at instruction {session.pc}, "
                    "none left"
                )
            resume_with_input(session, pending.pop(0))
        else:
            break
    return Transcript(tuple(outputs), session.status, session.fault)
