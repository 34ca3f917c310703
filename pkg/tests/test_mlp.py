"""MLP inference against an independent numpy oracle, activation ranges,
weight ordering, and the storage arithmetic."""

import math
import random
import struct

import numpy as np
import pytest

from qrind.mlp import (
    Activation, DimensionMismatch, MlpLayer, MlpModel, coefficient_count,
    flatten_layer, layer_forward, model_forward, storage_bytes,
    unflatten_layer,
)


def _np_activation(kind: Activation, z: np.ndarray) -> np.ndarray:
    if kind is Activation.LINEAR:
        return z
    if kind is Activation.SIGMOID:
        return 1.0 / (1.0 + np.exp(-z))
    if kind is Activation.TANH:
        return np.tanh(z)
    if kind is Activation.RELU:
        return np.maximum(z, 0.0)
    if kind is Activation.LEAKY_RELU:
        return np.where(z >= 0, z, 0.01 * z)
    e = np.exp(z - np.max(z))
    return e / e.sum()


def _np_forward(model: MlpModel, x) -> np.ndarray:
    """Matrix-algebra oracle, independent of the loop implementation."""
    out = np.asarray(x, dtype=np.float64)
    for layer in model.layers:
        w = np.asarray(layer.weights, dtype=np.float64)
        b = np.asarray(layer.biases, dtype=np.float64)
        out = _np_activation(layer.activation, w @ out + b)
    return out


def _random_model(rng: random.Random, max_dim: int = 8) -> MlpModel:
    arity = rng.randint(1, max_dim)
    layers = []
    fan_in = arity
    for _ in range(rng.randint(1, 3)):
        fan_out = rng.randint(1, max_dim)
        weights = tuple(
            tuple(rng.uniform(-2, 2) for _ in range(fan_in))
            for _ in range(fan_out)
        )
        biases = tuple(rng.uniform(-1, 1) for _ in range(fan_out))
        layers.append(MlpLayer(weights, biases, rng.choice(list(Activation))))
        fan_in = fan_out
    return MlpModel(arity, tuple(layers))


class TestLayerForward:
    def test_running_example(self):
        # 2-input sigmoid neuron with the example's weights
        layer = MlpLayer(((0.01, 0.001),), (-1.5,), Activation.SIGMOID)
        (out,) = layer_forward(layer, [60.0, 1000.0])
        assert abs(out - 0.525) < 1e-3
        assert abs(out - 1.0 / (1.0 + math.exp(-0.1))) < 1e-9

    def test_linear_zero(self):
        layer = MlpLayer(((0.0, 0.0), (0.0, 0.0)), (0.0, 0.0), Activation.LINEAR)
        assert layer_forward(layer, [3.0, -17.5]) == [0.0, 0.0]

    def test_softmax_normalizes(self):
        rng = random.Random(1)
        for _ in range(50):
            n = rng.randint(1, 8)
            layer = MlpLayer(
                tuple(tuple(rng.uniform(-5, 5) for _ in range(3)) for _ in range(n)),
                tuple(rng.uniform(-5, 5) for _ in range(n)),
                Activation.SOFTMAX,
            )
            out = layer_forward(layer, [rng.uniform(-10, 10) for _ in range(3)])
            assert abs(sum(out) - 1.0) <= 1e-9
            assert all(0.0 <= v <= 1.0 for v in out)

    def test_coefficient_order_rows_then_bias(self):
        # fan_in=2, fan_out=3: w11,w12,b1,w21,w22,b2,w31,w32,b3
        flat = [11, 12, 1, 21, 22, 2, 31, 32, 3]
        layer = unflatten_layer(flat, fan_in=2, neuron_count=3,
                                activation=Activation.LINEAR)
        assert layer.weights == ((11.0, 12.0), (21.0, 22.0), (31.0, 32.0))
        assert layer.biases == (1.0, 2.0, 3.0)
        assert flatten_layer(layer) == [float(c) for c in flat]

    def test_dimension_mismatch(self):
        layer = MlpLayer(((1.0, 2.0),), (0.0,), Activation.LINEAR)
        with pytest.raises(DimensionMismatch):
            layer_forward(layer, [1.0])

    def test_sigmoid_extreme_inputs_do_not_overflow(self):
        layer = MlpLayer(((1.0,),), (0.0,), Activation.SIGMOID)
        assert layer_forward(layer, [-10000.0]) == [0.0]
        assert layer_forward(layer, [10000.0]) == [1.0]


class TestModelForward:
    def test_single_layer_eq2(self):
        model = MlpModel(2, (
            MlpLayer(((0.01, 0.001),), (-1.5,), Activation.SIGMOID),
        ))
        (out,) = model_forward(model, [60.0, 1000.0])
        assert abs(out - 0.52498) < 1e-4

    def test_identity_linear(self):
        eye = tuple(
            tuple(1.0 if i == j else 0.0 for j in range(4)) for i in range(4)
        )
        model = MlpModel(4, (MlpLayer(eye, (0.0,) * 4, Activation.LINEAR),))
        x = [1.5, -2.0, 0.0, 9.25]
        assert model_forward(model, x) == x

    def test_100_random_models_match_oracle(self):
        rng = random.Random(123)
        for _ in range(100):
            model = _random_model(rng)
            x = [rng.uniform(-3, 3) for _ in range(model.input_arity)]
            mine = model_forward(model, x)
            oracle = _np_forward(model, x)
            np.testing.assert_allclose(mine, oracle, rtol=1e-12, atol=1e-300)

    def test_activation_ranges(self):
        rng = random.Random(7)
        for kind, check in [
            (Activation.SIGMOID, lambda v: 0.0 < v < 1.0),
            (Activation.TANH, lambda v: -1.0 < v < 1.0),
            (Activation.RELU, lambda v: v >= 0.0),
        ]:
            for _ in range(30):
                layer = MlpLayer(
                    tuple(
                        tuple(rng.uniform(-3, 3) for _ in range(2))
                        for _ in range(3)
                    ),
                    tuple(rng.uniform(-2, 2) for _ in range(3)),
                    kind,
                )
                out = layer_forward(layer, [rng.uniform(-4, 4), rng.uniform(-4, 4)])
                assert all(check(v) for v in out), kind

    def test_flatten_rebuild_identity(self):
        rng = random.Random(55)
        for _ in range(50):
            model = _random_model(rng)
            rebuilt_layers = []
            fan_in = model.input_arity
            for layer in model.layers:
                flat = flatten_layer(layer)
                rebuilt_layers.append(
                    unflatten_layer(flat, fan_in, layer.fan_out, layer.activation)
                )
                fan_in = layer.fan_out
            assert MlpModel(model.input_arity, tuple(rebuilt_layers)) == model


class TestStorageArithmetic:
    def test_paper_capacity_example(self):
        # 20 inputs, 25 hidden, 1 output
        l1 = MlpLayer(
            tuple(tuple(0.0 for _ in range(20)) for _ in range(25)),
            (0.0,) * 25, Activation.RELU,
        )
        l2 = MlpLayer(((0.0,) * 25,), (0.0,), Activation.SIGMOID)
        model = MlpModel(20, (l1, l2))
        assert coefficient_count(model) == 551
        assert storage_bytes(model, float16=True) == 1102
        assert storage_bytes(model, float16=False) == 2204

    def test_single_neuron(self):
        model = MlpModel(2, (
            MlpLayer(((0.01, 0.001),), (-1.5,), Activation.SIGMOID),
        ))
        assert coefficient_count(model) == 3

    def test_zero_layers(self):
        assert coefficient_count(MlpModel(3, ())) == 0

    def test_float16_storage_is_bit_stable(self):
        rng = random.Random(99)
        from qrind.codec import decode_f16, encode_f16

        for _ in range(500):
            bits = rng.randrange(1 << 16)
            if (bits >> 10) & 0x1F == 0x1F:
                continue
            x = decode_f16(bits)
            assert encode_f16(x) == bits
            assert struct.pack("<e", x) == struct.pack("<H", bits)


class TestShapeValidation:
    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            MlpLayer(((1.0, 2.0), (1.0,)), (0.0, 0.0), Activation.LINEAR)

    def test_bias_count_mismatch(self):
        with pytest.raises(ValueError):
            MlpLayer(((1.0,),), (0.0, 0.0), Activation.LINEAR)

    def test_layer_chain_mismatch(self):
        l1 = MlpLayer(((1.0, 2.0),), (0.0,), Activation.LINEAR)  # fan_out 1
        l2 = MlpLayer(((1.0, 2.0),), (0.0,), Activation.LINEAR)  # fan_in 2
        with pytest.raises(ValueError):
            MlpModel(2, (l1, l2))

    def test_bad_coefficient_count(self):
        with pytest.raises(ValueError):
            unflatten_layer([1.0, 2.0], 2, 1, Activation.LINEAR)
