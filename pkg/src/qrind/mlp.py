"""Multilayer-perceptron representation and run-forward inference.

Inference folds one layer at a time: each output neuron accumulates its
weighted inputs left to right, adds the bias, then applies the layer's
activation. All arithmetic is on 64-bit floats regardless of how the
coefficients are stored in the bytecode; the accumulation order is fixed
(sequential) so every conformant host computes bit-identical sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

LEAKY_SLOPE = 0.01


class Activation(IntEnum):
    """Neuron activation kinds. The enum value is the 3-bit wire code."""

    LINEAR = 0
    SIGMOID = 1
    TANH = 2
    RELU = 3
    LEAKY_RELU = 4
    SOFTMAX = 5


class DimensionMismatch(ValueError):
    pass


def _sigmoid(z: float) -> float:
    # Split on sign so exp() never overflows.
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def apply_activation(activation: Activation, pre: list) -> list:
    """Apply an activation to a layer's pre-activation vector.

    SOFTMAX normalizes across the whole vector (with max subtraction);
    every other kind is element-wise.
    """
    if activation is Activation.SOFTMAX:
        m = max(pre)
        exps = [math.exp(z - m) for z in pre]
        total = 0.0
        for e in exps:
            total += e
        return [e / total for e in exps]
    if activation is Activation.LINEAR:
        return list(pre)
    if activation is Activation.SIGMOID:
        return [_sigmoid(z) for z in pre]
    if activation is Activation.TANH:
        return [math.tanh(z) for z in pre]
    if activation is Activation.RELU:
        return [z if z > 0.0 else 0.0 for z in pre]
    if activation is Activation.LEAKY_RELU:
        return [z if z >= 0.0 else LEAKY_SLOPE * z for z in pre]
    raise ValueError(f"unknown activation {activation!r}")


@dataclass(frozen=True)
class MlpLayer:
    """One dense layer: weights is fan_out rows of fan_in entries."""

    weights: tuple  # tuple of fan_out rows, each a tuple of fan_in floats
    biases: tuple  # fan_out floats
    activation: Activation

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("need one bias per neuron and at least one neuron")
        fan_in = len(self.weights[0])
        if fan_in < 1 or any(len(row) != fan_in for row in self.weights):
            raise ValueError("ragged weight rows")

    @property
    def fan_in(self) -> int:
        return len(self.weights[0])

    @property
    def fan_out(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class MlpModel:
    input_arity: int
    layers: tuple  # tuple of MlpLayer

    def __post_init__(self) -> None:
        if self.input_arity < 1:
            raise ValueError("input arity must be positive")
        expect = self.input_arity
        for i, layer in enumerate(self.layers):
            if layer.fan_in != expect:
                raise ValueError(
                    f"layer {i} fan_in {layer.fan_in} != expected {expect}"
                )
            expect = layer.fan_out


def layer_forward(layer: MlpLayer, x: list) -> list:
    """out_i = f(sum_j w_ij * x_j + b_i) for each neuron i."""
    if len(x) != layer.fan_in:
        raise DimensionMismatch(
            f"layer expects {layer.fan_in} inputs, got {len(x)}"
        )
    pre = []
    for row, bias in zip(layer.weights, layer.biases):
        acc = 0.0
        for w, xj in zip(row, x):
            acc += w * xj
        pre.append(acc + bias)
    return apply_activation(layer.activation, pre)


def model_forward(model: MlpModel, x: list) -> list:
    if len(x) != model.input_arity:
        raise DimensionMismatch(
            f"model expects {model.input_arity} inputs, got {len(x)}"
        )
    out = [float(v) for v in x]
    for layer in model.layers:
        out = layer_forward(layer, out)
    return out


def flatten_layer(layer: MlpLayer) -> list:
    """Coefficients in wire order: per neuron, its weights left to right,
    then its bias."""
    flat = []
    for row, bias in zip(layer.weights, layer.biases):
        flat.extend(row)
        flat.append(bias)
    return flat


def unflatten_layer(
    coefficients, fan_in: int, neuron_count: int, activation: Activation
) -> MlpLayer:
    """Inverse of flatten_layer given the layer geometry."""
    expected = neuron_count * (fan_in + 1)
    if len(coefficients) != expected:
        raise ValueError(
            f"need {expected} coefficients for {neuron_count}x({fan_in}+1), "
            f"got {len(coefficients)}"
        )
    weights = []
    biases = []
    for i in range(neuron_count):
        group = coefficients[i * (fan_in + 1) : (i + 1) * (fan_in + 1)]
        weights.append(tuple(float(w) for w in group[:fan_in]))
        biases.append(float(group[fan_in]))
    return MlpLayer(tuple(weights), tuple(biases), activation)


def coefficient_count(model: MlpModel) -> int:
    return sum(l.fan_out * (l.fan_in + 1) for l in model.layers)


def storage_bytes(model: MlpModel, float16: bool) -> int:
    return coefficient_count(model) * (2 if float16 else 4)
