// eQRbytecode disassembler: the execution-chain half of the codec.
// Field layout mirrors the toolchain's normative format: one header byte
// (version nibble 0001, dialect nibble 0010), then bit-packed
// instructions with Elias-gamma varints, zero-padded to a byte.

import { BitReader, TruncatedStream } from "./bits";
import { halfToDouble } from "./float16";
import {
  ArrayValue, KIND_CODES, ScalarKind, ScalarValue, Value,
} from "./values";

export const HEADER_BYTE = 0x12;

export class CodecError extends Error {}

export interface Reg {
  index: number;
  element: number | null;
}

export type Operand = { reg: Reg } | { lit: Value };

export type CmpOp = "==" | "!=" | "<" | "<=" | ">" | ">=";
const CMP_OPS: readonly CmpOp[] = ["==", "!=", "<", "<=", ">", ">="];

export type ActivationName =
  | "LINEAR"
  | "SIGMOID"
  | "TANH"
  | "RELU"
  | "LEAKY_RELU"
  | "SOFTMAX";
const ACTIVATIONS: readonly ActivationName[] = [
  "LINEAR", "SIGMOID", "TANH", "RELU", "LEAKY_RELU", "SOFTMAX",
];

export type Instruction =
  | { op: "SET"; target: Reg; value: Value }
  | { op: "INPUT"; inputType: ScalarKind; target: Reg }
  | { op: "PRINT"; source: Operand }
  | { op: "TREECONDITION"; lhs: Operand; cmp: CmpOp; rhs: Operand; target: number }
  | { op: "TREEJUMP"; target: number }
  | { op: "MLINPUT"; arity: number; source: Reg }
  | {
      op: "NNLAYER";
      neurons: number;
      activation: ActivationName;
      float32: boolean;
      coefficients: number[];
    }
  | { op: "MLOUTPUT"; target: Reg };

export type Program = Instruction[];

function decodeVarint(r: BitReader): number {
  let zeros = 0;
  while (r.readBit() === 0) zeros += 1;
  let n = 1;
  for (let i = 0; i < zeros; i++) n = n * 2 + r.readBit();
  return n - 1;
}

function readRegister(r: BitReader): Reg {
  const index = decodeVarint(r);
  if (r.readBit()) return { index, element: decodeVarint(r) };
  return { index, element: null };
}

function readKind(r: BitReader): ScalarKind | "ARRAY_HOM" | "ARRAY_HET" {
  const code = r.readUint(4);
  if (code >= KIND_CODES.length) {
    throw new CodecError(`unknown type tag ${code}`);
  }
  return KIND_CODES[code];
}

function readF32(r: BitReader): number {
  const view = new DataView(new ArrayBuffer(4));
  view.setUint32(0, r.readUint(32));
  return view.getFloat32(0);
}

function readScalarPayload(r: BitReader, kind: ScalarKind): ScalarValue {
  switch (kind) {
    case "BOOL":
      return { kind, value: r.readBit() === 1 };
    case "INT8": {
      const raw = r.readUint(8);
      return { kind, value: raw >= 128 ? raw - 256 : raw };
    }
    case "INT16": {
      const raw = r.readUint(16);
      return { kind, value: raw >= 32768 ? raw - 65536 : raw };
    }
    case "FLOAT16":
      return { kind, value: halfToDouble(r.readUint(16)) };
    case "FLOAT32":
      return { kind, value: readF32(r) };
    case "STRA7": {
      const length = decodeVarint(r);
      let s = "";
      for (let i = 0; i < length; i++) s += String.fromCharCode(r.readUint(7));
      return { kind, value: s };
    }
    case "STRU8": {
      const length = decodeVarint(r);
      const bytes = new Uint8Array(length);
      for (let i = 0; i < length; i++) bytes[i] = r.readUint(8);
      return { kind, value: new TextDecoder("utf-8", { fatal: true }).decode(bytes) };
    }
  }
}

function readValue(r: BitReader): Value {
  const kind = readKind(r);
  if (kind === "ARRAY_HOM") {
    const elemKind = readKind(r);
    if (elemKind === "ARRAY_HOM" || elemKind === "ARRAY_HET") {
      throw new CodecError("nested array element tag");
    }
    const count = decodeVarint(r);
    const items: ScalarValue[] = [];
    for (let i = 0; i < count; i++) items.push(readScalarPayload(r, elemKind));
    return { kind: "ARRAY", items } as ArrayValue;
  }
  if (kind === "ARRAY_HET") {
    const count = decodeVarint(r);
    const items: ScalarValue[] = [];
    for (let i = 0; i < count; i++) {
      const elem = readValue(r);
      if (elem.kind === "ARRAY") throw new CodecError("nested array");
      items.push(elem);
    }
    return { kind: "ARRAY", items };
  }
  return readScalarPayload(r, kind);
}

function readOperand(r: BitReader): Operand {
  if (r.readBit()) return { lit: readValue(r) };
  return { reg: readRegister(r) };
}

function readInstruction(
  r: BitReader,
  mlFanIn: number | null,
): [Instruction, number | null] {
  const opcode = r.readUint(4);
  switch (opcode) {
    case 0:
      return [{ op: "SET", target: readRegister(r), value: readValue(r) }, mlFanIn];
    case 1: {
      const kind = readKind(r);
      if (kind === "ARRAY_HOM" || kind === "ARRAY_HET") {
        throw new CodecError("INPUT type must be scalar");
      }
      return [{ op: "INPUT", inputType: kind, target: readRegister(r) }, mlFanIn];
    }
    case 2:
      return [{ op: "PRINT", source: readOperand(r) }, mlFanIn];
    case 3: {
      const lhs = readOperand(r);
      const cmpCode = r.readUint(3);
      if (cmpCode >= CMP_OPS.length) {
        throw new CodecError(`unknown comparison code ${cmpCode}`);
      }
      const rhs = readOperand(r);
      return [
        { op: "TREECONDITION", lhs, cmp: CMP_OPS[cmpCode], rhs, target: decodeVarint(r) },
        mlFanIn,
      ];
    }
    case 4:
      return [{ op: "TREEJUMP", target: decodeVarint(r) }, mlFanIn];
    case 5: {
      const mlType = r.readUint(3);
      if (mlType !== 0) throw new CodecError(`unknown ML type ${mlType}`);
      const arity = decodeVarint(r);
      return [{ op: "MLINPUT", arity, source: readRegister(r) }, arity];
    }
    case 6: {
      const neurons = decodeVarint(r);
      const actCode = r.readUint(3);
      if (actCode >= ACTIVATIONS.length) {
        throw new CodecError(`unknown activation code ${actCode}`);
      }
      if (mlFanIn === null) {
        throw new CodecError("NNLAYER outside an ML block: fan-in unknown");
      }
      const count = neurons * (mlFanIn + 1);
      const float32 = r.readBit() === 1;
      const coefficients: number[] = [];
      for (let i = 0; i < count; i++) {
        coefficients.push(float32 ? readF32(r) : halfToDouble(r.readUint(16)));
      }
      return [
        { op: "NNLAYER", neurons, activation: ACTIVATIONS[actCode], float32, coefficients },
        neurons,
      ];
    }
    case 7:
      return [{ op: "MLOUTPUT", target: readRegister(r) }, null];
    default:
      throw new CodecError(`unknown opcode ${opcode}`);
  }
}

export function disassemble(data: Uint8Array): Program {
  if (data.length === 0) throw new CodecError("empty stream");
  if (data[0] !== HEADER_BYTE) {
    throw new CodecError(
      `bad header byte 0x${data[0].toString(16)} (want 0x12)`,
    );
  }
  const r = new BitReader(data.subarray(1));
  const program: Program = [];
  let mlFanIn: number | null = null;
  while (!(r.remaining() < 8 && r.restIsZero())) {
    const inTail = r.remaining() < 8;
    try {
      const [instr, next] = readInstruction(r, mlFanIn);
      program.push(instr);
      mlFanIn = next;
    } catch (err) {
      if (inTail && err instanceof TruncatedStream) {
        throw new CodecError("trailing non-zero padding bits");
      }
      throw err;
    }
  }
  return program;
}
