"""Import an externally trained MLP into QRind IR instructions.

The interchange file is JSON:

    {
      "input_arity": 2,
      "layers": [
        {"neuron_count": 1,
         "activation": "SIGMOID",
         "encoding": "FLOAT32",
         "weights": [[0.01, 0.001]],
         "biases": [-1.5]}
      ]
    }

Weights are row-per-neuron; the emitted NNLAYER flattens each neuron's
weights left to right followed by its bias.
"""

from __future__ import annotations

import json

from . import ir, mlp
from .floats import round_f16, round_f32
from .ir import Kind, RegisterRef


class ImportSpecError(ValueError):
    pass


def _layer_from_obj(obj: dict, index: int, override: str | None) -> tuple:
    try:
        count = int(obj["neuron_count"])
        act_name = str(obj["activation"]).upper()
        weights = obj["weights"]
        biases = obj["biases"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ImportSpecError(f"layer {index}: {exc}") from None
    try:
        activation = mlp.Activation[act_name]
    except KeyError:
        raise ImportSpecError(
            f"layer {index}: unknown activation {act_name!r}"
        ) from None
    enc_name = (override or str(obj.get("encoding", "FLOAT32"))).upper()
    enc_name = {"F16": "FLOAT16", "F32": "FLOAT32"}.get(enc_name, enc_name)
    if enc_name == "FLOAT16":
        encoding, rounder = Kind.FLOAT16, round_f16
    elif enc_name == "FLOAT32":
        encoding, rounder = Kind.FLOAT32, round_f32
    else:
        raise ImportSpecError(f"layer {index}: bad encoding {enc_name!r}")
    if len(weights) != count or len(biases) != count:
        raise ImportSpecError(
            f"layer {index}: {count} neurons but {len(weights)} weight rows "
            f"and {len(biases)} biases"
        )
    rows = tuple(tuple(float(w) for w in row) for row in weights)
    layer = mlp.MlpLayer(rows, tuple(float(b) for b in biases), activation)
    coeffs = tuple(rounder(c) for c in mlp.flatten_layer(layer))
    return layer, ir.NnLayer(count, activation, encoding, coeffs)


def load_model(text: str, encoding_override: str | None = None) -> tuple:
    """JSON text -> (MlpModel, list of NnLayer instructions)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ImportSpecError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ImportSpecError("top level must be an object")
    try:
        arity = int(obj["input_arity"])
    except (KeyError, TypeError, ValueError):
        raise ImportSpecError("input_arity missing or not an int") from None
    raw_layers = obj.get("layers")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ImportSpecError("layers must be a non-empty list")
    layers = []
    instructions = []
    for i, entry in enumerate(raw_layers):
        layer, instr = _layer_from_obj(entry, i, encoding_override)
        layers.append(layer)
        instructions.append(instr)
    try:
        model = mlp.MlpModel(arity, tuple(layers))
    except ValueError as exc:
        raise ImportSpecError(str(exc)) from None
    return model, instructions


def emit_fragment(
    model: mlp.MlpModel,
    nnlayers: list,
    source_reg: int = 0,
    target_reg: int = 1,
) -> str:
    """IR text: MLINPUT, the NNLAYERs, MLOUTPUT."""
    lines = [
        ir.render_instruction(
            ir.MlInput(ir.MlKind.MLP, model.input_arity, RegisterRef(source_reg))
        )
    ]
    lines.extend(ir.render_instruction(instr) for instr in nnlayers)
    lines.append(ir.render_instruction(ir.MlOutput(RegisterRef(target_reg))))
    return "\n".join(lines) + "\n"


def size_report(model: mlp.MlpModel) -> str:
    count = mlp.coefficient_count(model)
    return (
        f"{count} coefficients, {mlp.storage_bytes(model, True)} bytes (f16) "
        f"/ {mlp.storage_bytes(model, False)} bytes (f32)"
    )
