// Session VM conformant to the toolchain's session protocol: step() emits
// the same message objects ({type: "output"|"input_request"|"halted"|
// "fault", text, expected_type}) that the CLI's --protocol mode writes,
// and resume values follow the {type: "input", value} schema.

import {
  CmpOp, Instruction, Operand, Program, Reg,
} from "./codec";
import { renderFloat } from "./floatfmt";
import { roundF16 } from "./float16";
import { layerForward } from "./mlp";
import { isNumeric, ScalarKind, ScalarValue, Value } from "./values";

export type Status = "running" | "awaiting_input" | "halted" | "faulted";

export interface OutputMessage {
  type: "output";
  text: string;
}
export interface InputRequestMessage {
  type: "input_request";
  expected_type: ScalarKind;
  text: string | null;
}
export interface HaltedMessage {
  type: "halted";
}
export interface FaultMessage {
  type: "fault";
  text: string;
}
export type SessionMessage =
  | OutputMessage
  | InputRequestMessage
  | HaltedMessage
  | FaultMessage;

export class TypeMismatch extends Error {}

type RegisterSlot = ScalarValue | (ScalarValue | null)[];

class FaultSignal extends Error {
  constructor(public reason: string) {
    super(reason);
  }
}

export function renderValue(v: ScalarValue | (ScalarValue | null)[] | null): string {
  if (v === null) return "UNDEFINED";
  if (Array.isArray(v)) {
    return "[" + v.map(renderValue).join(", ") + "]";
  }
  switch (v.kind) {
    case "BOOL":
      return v.value ? "TRUE" : "FALSE";
    case "INT8":
    case "INT16":
      return String(v.value);
    case "FLOAT16":
      return renderFloat(v.value as number, 16);
    case "FLOAT32":
      return renderFloat(v.value as number, 32);
    default:
      return v.value as string;
  }
}

function compare(lhs: ScalarValue, op: CmpOp, rhs: ScalarValue): boolean {
  if (isNumeric(lhs) && isNumeric(rhs)) {
    const a = lhs.value as number;
    const b = rhs.value as number;
    switch (op) {
      case "==": return a === b;
      case "!=": return a !== b;
      case "<": return a < b;
      case "<=": return a <= b;
      case ">": return a > b;
      case ">=": return a >= b;
    }
  }
  const bothBool = lhs.kind === "BOOL" && rhs.kind === "BOOL";
  const bothString =
    (lhs.kind === "STRA7" || lhs.kind === "STRU8") &&
    (rhs.kind === "STRA7" || rhs.kind === "STRU8");
  if (bothBool || bothString) {
    if (op !== "==" && op !== "!=") {
      throw new FaultSignal(
        `TypeMismatch: ${bothBool ? "BOOL" : "strings"} support == and != only, not ${op}`,
      );
    }
    return (lhs.value === rhs.value) === (op === "==");
  }
  throw new FaultSignal(
    `TypeMismatch: cannot compare ${lhs.kind} with ${rhs.kind}`,
  );
}

export function coerceInput(expected: ScalarKind, raw: unknown): ScalarValue {
  switch (expected) {
    case "BOOL":
      if (typeof raw === "boolean") return { kind: "BOOL", value: raw };
      throw new TypeMismatch(`expected BOOL, got ${JSON.stringify(raw)}`);
    case "INT8":
    case "INT16": {
      if (typeof raw !== "number" || !Number.isInteger(raw)) {
        throw new TypeMismatch(`expected ${expected}, got ${JSON.stringify(raw)}`);
      }
      const [lo, hi] = expected === "INT8" ? [-128, 127] : [-32768, 32767];
      if (raw < lo || raw > hi) {
        throw new TypeMismatch(`${expected} input out of range: ${raw}`);
      }
      return { kind: expected, value: raw };
    }
    case "FLOAT16":
    case "FLOAT32": {
      if (typeof raw !== "number") {
        throw new TypeMismatch(`expected ${expected}, got ${JSON.stringify(raw)}`);
      }
      const rounded = expected === "FLOAT16" ? roundF16(raw) : Math.fround(raw);
      return { kind: expected, value: rounded };
    }
    case "STRA7":
    case "STRU8": {
      if (typeof raw !== "string") {
        throw new TypeMismatch(`expected ${expected}, got ${JSON.stringify(raw)}`);
      }
      if (expected === "STRA7" && [...raw].some((c) => c.codePointAt(0)! >= 128)) {
        throw new TypeMismatch("STRA7 input must be ASCII-7");
      }
      return { kind: expected, value: raw };
    }
  }
}

export class Session {
  pc = 0;
  status: Status;
  registers = new Map<number, RegisterSlot>();
  mlBuffer: number[] | null = null;
  awaiting: { target: Reg; expected: ScalarKind } | null = null;
  lastOutput: string | null = null;
  faultText: string | null = null;

  constructor(public readonly program: Program) {
    this.status = program.length ? "running" : "halted";
  }

  private read(ref: Reg): RegisterSlot {
    const slot = this.registers.get(ref.index);
    if (slot === undefined) {
      throw new FaultSignal(`UndefinedRegister: R${ref.index} was never set`);
    }
    if (ref.element === null) return slot;
    if (!Array.isArray(slot)) {
      throw new FaultSignal(
        `TypeMismatch: R${ref.index} is scalar, cannot index [${ref.element}]`,
      );
    }
    const elem = slot[ref.element];
    if (elem === undefined || elem === null) {
      throw new FaultSignal(
        `UndefinedRegister: R${ref.index}[${ref.element}] was never set`,
      );
    }
    return elem;
  }

  write(ref: Reg, value: Value): void {
    if (ref.element === null) {
      if (value.kind === "ARRAY") {
        this.registers.set(ref.index, value.items.slice());
      } else {
        this.registers.set(ref.index, value);
      }
      return;
    }
    if (value.kind === "ARRAY") {
      throw new FaultSignal("TypeMismatch: array elements hold scalars, not arrays");
    }
    let slot = this.registers.get(ref.index);
    if (!Array.isArray(slot)) {
      slot = [];
      this.registers.set(ref.index, slot);
    }
    while (slot.length <= ref.element) slot.push(null);
    slot[ref.element] = value;
  }

  private operand(op: Operand): RegisterSlot {
    if ("reg" in op) return this.read(op.reg);
    if (op.lit.kind === "ARRAY") return op.lit.items.slice();
    return op.lit;
  }

  step(): SessionMessage[] {
    if (this.status !== "running") {
      throw new Error(`cannot step a session in status ${this.status}`);
    }
    const instr = this.program[this.pc];
    try {
      return this.execute(instr);
    } catch (err) {
      if (err instanceof FaultSignal) {
        this.status = "faulted";
        this.faultText = `${err.reason} at instruction ${this.pc}`;
        return [{ type: "fault", text: this.faultText }];
      }
      throw err;
    }
  }

  private advance(to: number): SessionMessage[] {
    if (to >= this.program.length) {
      this.pc = this.program.length;
      this.status = "halted";
      return [{ type: "halted" }];
    }
    this.pc = to;
    return [];
  }

  private execute(instr: Instruction): SessionMessage[] {
    switch (instr.op) {
      case "SET":
        this.write(instr.target, instr.value);
        return this.advance(this.pc + 1);
      case "INPUT": {
        this.status = "awaiting_input";
        this.awaiting = { target: instr.target, expected: instr.inputType };
        return [
          { type: "input_request", expected_type: instr.inputType, text: this.lastOutput },
        ];
      }
      case "PRINT": {
        const text = renderValue(this.operand(instr.source) as never);
        this.lastOutput = text;
        const events: SessionMessage[] = [{ type: "output", text }];
        events.push(...this.advance(this.pc + 1));
        return events;
      }
      case "TREECONDITION": {
        const lhs = this.operand(instr.lhs);
        const rhs = this.operand(instr.rhs);
        if (Array.isArray(lhs) || Array.isArray(rhs)) {
          throw new FaultSignal("TypeMismatch: arrays cannot be compared");
        }
        const taken = compare(lhs, instr.cmp, rhs);
        return this.advance(taken ? instr.target : this.pc + 1);
      }
      case "TREEJUMP":
        return this.advance(instr.target);
      case "MLINPUT": {
        const vec = this.operand({ reg: instr.source });
        if (!Array.isArray(vec)) {
          throw new FaultSignal("TypeMismatch: MLINPUT source must be an array register");
        }
        const xs: number[] = [];
        for (let i = 0; i < vec.length; i++) {
          const elem = vec[i];
          if (elem === null) {
            throw new FaultSignal(
              `UndefinedRegister: R${instr.source.index}[${i}] was never set`,
            );
          }
          if (!isNumeric(elem)) {
            throw new FaultSignal(
              `TypeMismatch: ML input element ${i} is ${elem.kind}, not numeric`,
            );
          }
          xs.push(elem.value as number);
        }
        if (xs.length !== instr.arity) {
          throw new FaultSignal(
            `MlArityMismatch: declared ${instr.arity} inputs, register holds ${xs.length}`,
          );
        }
        this.mlBuffer = xs;
        return this.advance(this.pc + 1);
      }
      case "NNLAYER": {
        if (this.mlBuffer === null) {
          throw new FaultSignal("MlSequenceError: NNLAYER with no ML data path");
        }
        const expected = instr.neurons * (this.mlBuffer.length + 1);
        if (instr.coefficients.length !== expected) {
          throw new FaultSignal(
            `MlArityMismatch: layer needs ${expected} coefficients for ` +
              `fan-in ${this.mlBuffer.length}, has ${instr.coefficients.length}`,
          );
        }
        this.mlBuffer = layerForward(
          instr.coefficients, instr.neurons, instr.activation, this.mlBuffer,
        );
        return this.advance(this.pc + 1);
      }
      case "MLOUTPUT": {
        if (this.mlBuffer === null) {
          throw new FaultSignal("MlSequenceError: MLOUTPUT with no ML data path");
        }
        if (this.mlBuffer.length === 1) {
          this.write(instr.target, {
            kind: "FLOAT32",
            value: Math.fround(this.mlBuffer[0]),
          });
        } else {
          if (instr.target.element !== null) {
            throw new FaultSignal("TypeMismatch: vector MLOUTPUT into an array element");
          }
          this.registers.set(
            instr.target.index,
            this.mlBuffer.map((x) => ({
              kind: "FLOAT32" as const,
              value: Math.fround(x),
            })),
          );
        }
        this.mlBuffer = null;
        return this.advance(this.pc + 1);
      }
    }
  }

  resume(raw: unknown): SessionMessage[] {
    if (this.status !== "awaiting_input" || this.awaiting === null) {
      throw new Error("session is not awaiting input");
    }
    const { target, expected } = this.awaiting;
    const value = coerceInput(expected, raw); // throws TypeMismatch, state kept
    this.awaiting = null;
    this.status = "running";
    try {
      this.write(target, value);
    } catch (err) {
      if (err instanceof FaultSignal) {
        this.status = "faulted";
        this.faultText = `${err.reason} at instruction ${this.pc}`;
        return [{ type: "fault", text: this.faultText }];
      }
      throw err;
    }
    return this.advance(this.pc + 1);
  }
}
