// Value domain of the QRind VM: scalar kinds mirror the bytecode's 4-bit
// type tags; runtime register arrays hold scalar values with null holes.

export type ScalarKind =
  | "BOOL"
  | "INT8"
  | "INT16"
  | "FLOAT16"
  | "FLOAT32"
  | "STRA7"
  | "STRU8";

export const SCALAR_KINDS: readonly ScalarKind[] = [
  "BOOL",
  "INT8",
  "INT16",
  "FLOAT16",
  "FLOAT32",
  "STRA7",
  "STRU8",
];

// 4-bit wire codes, in tag order; 7 = homogeneous array, 8 = heterogeneous.
export const KIND_CODES: readonly (ScalarKind | "ARRAY_HOM" | "ARRAY_HET")[] = [
  "BOOL",
  "INT8",
  "INT16",
  "FLOAT16",
  "FLOAT32",
  "STRA7",
  "STRU8",
  "ARRAY_HOM",
  "ARRAY_HET",
];

export interface ScalarValue {
  kind: ScalarKind;
  value: boolean | number | string;
}

export interface ArrayValue {
  kind: "ARRAY";
  items: ScalarValue[];
}

export type Value = ScalarValue | ArrayValue;

export function isNumeric(v: ScalarValue): boolean {
  return (
    v.kind === "INT8" ||
    v.kind === "INT16" ||
    v.kind === "FLOAT16" ||
    v.kind === "FLOAT32"
  );
}
