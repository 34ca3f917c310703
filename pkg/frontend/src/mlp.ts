// Run-forward inference for NNLAYER instructions. Accumulation is
// sequential left to right (same order as the reference VM) so both hosts
// compute identical doubles.

import { ActivationName } from "./codec";

function sigmoid(z: number): number {
  if (z >= 0) return 1 / (1 + Math.exp(-z));
  const e = Math.exp(z);
  return e / (1 + e);
}

export function applyActivation(kind: ActivationName, pre: number[]): number[] {
  switch (kind) {
    case "SOFTMAX": {
      const m = Math.max(...pre);
      const exps = pre.map((z) => Math.exp(z - m));
      let total = 0;
      for (const e of exps) total += e;
      return exps.map((e) => e / total);
    }
    case "LINEAR":
      return pre.slice();
    case "SIGMOID":
      return pre.map(sigmoid);
    case "TANH":
      return pre.map(Math.tanh);
    case "RELU":
      return pre.map((z) => (z > 0 ? z : 0));
    case "LEAKY_RELU":
      return pre.map((z) => (z >= 0 ? z : 0.01 * z));
  }
}

export function layerForward(
  coefficients: number[],
  neurons: number,
  activation: ActivationName,
  x: number[],
): number[] {
  const fanIn = x.length;
  if (coefficients.length !== neurons * (fanIn + 1)) {
    throw new Error(
      `layer needs ${neurons * (fanIn + 1)} coefficients for fan-in ${fanIn}, ` +
        `has ${coefficients.length}`,
    );
  }
  const pre: number[] = [];
  for (let i = 0; i < neurons; i++) {
    const base = i * (fanIn + 1);
    let acc = 0;
    for (let j = 0; j < fanIn; j++) {
      acc += coefficients[base + j] * x[j];
    }
    pre.push(acc + coefficients[base + fanIn]);
  }
  return applyActivation(activation, pre);
}
