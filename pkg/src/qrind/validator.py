"""Static checks on parsed programs.

validate() returns diagnostics instead of raising: an empty list means the
program is well-formed. Checks cover jump bounds, ML block shape
(MLINPUT, one or more NNLAYERs, MLOUTPUT, contiguous), the coefficient
count chain, and INPUT type scalarity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ir import Input, MlInput, MlOutput, NnLayer, Program, TreeCondition, TreeJump


@dataclass(frozen=True)
class Diagnostic:
    code: str
    index: int
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] instruction {self.index}: {self.message}"


def validate(program: Program) -> list:
    diags = []
    n = len(program.instructions)

    def jump_ok(target: int) -> bool:
        return 0 <= target <= n

    ml_fan_in: int | None = None  # inside an ML block: current vector width
    ml_layers_seen = 0

    for i, instr in enumerate(program.instructions):
        if isinstance(instr, (TreeJump, TreeCondition)):
            target = instr.target_index
            if not jump_ok(target):
                diags.append(Diagnostic(
                    "InvalidJumpTarget", i,
                    f"target ({target}) outside [0, {n}]",
                ))
        if isinstance(instr, Input) and instr.input_type.is_array:
            diags.append(Diagnostic(
                "InputTypeNotScalar", i,
                f"INPUT type {instr.input_type} is not scalar",
            ))

        if isinstance(instr, MlInput):
            if ml_fan_in is not None:
                diags.append(Diagnostic(
                    "MlSequenceError", i,
                    "MLINPUT inside an unfinished ML block",
                ))
            ml_fan_in = instr.arity
            ml_layers_seen = 0
        elif isinstance(instr, NnLayer):
            if ml_fan_in is None:
                diags.append(Diagnostic(
                    "MlSequenceError", i,
                    "NNLAYER outside an MLINPUT..MLOUTPUT block",
                ))
            else:
                expected = instr.neuron_count * (ml_fan_in + 1)
                if len(instr.coefficients) != expected:
                    diags.append(Diagnostic(
                        "BadCoefficientCount", i,
                        f"{instr.neuron_count} neurons with fan-in {ml_fan_in} "
                        f"need {expected} coefficients, got "
                        f"{len(instr.coefficients)}",
                    ))
                ml_fan_in = instr.neuron_count
                ml_layers_seen += 1
        elif isinstance(instr, MlOutput):
            if ml_fan_in is None:
                diags.append(Diagnostic(
                    "MlSequenceError", i,
                    "MLOUTPUT without a preceding MLINPUT",
                ))
            elif ml_layers_seen == 0:
                diags.append(Diagnostic(
                    "MlSequenceError", i,
                    "MLOUTPUT with no NNLAYER in the block",
                ))
            ml_fan_in = None
            ml_layers_seen = 0
        elif ml_fan_in is not None:
            diags.append(Diagnostic(
                "MlSequenceError", i,
                f"{type(instr).__name__.upper()} interrupts an ML block",
            ))
            ml_fan_in = None
            ml_layers_seen = 0

    if ml_fan_in is not None:
        diags.append(Diagnostic(
            "MlSequenceError", n - 1,
            "program ends inside an ML block",
        ))
    return diags
