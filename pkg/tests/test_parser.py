"""Parsing the textual IR: the running example, literal typing, labels,
errors, and the render round trip."""

import random

import pytest

from genprog import random_program
from qrind import ir
from qrind.ir import (
    CmpOp, Kind, MlKind, Program, RegisterRef, Value, render,
    render_instruction,
)
from qrind.mlp import Activation
from qrind.parser import ParseError, parse_ir


class TestExamples:
    def test_set_float_literal(self):
        p = parse_ir("SET R0 TO 0.5")
        assert p.instructions == (
            ir.Set(RegisterRef(0), Value.f32(0.5)),
        )

    def test_treejump_to_len_is_valid(self):
        p = parse_ir("\n".join(["PRINT 1"] * 14 + ["TREEJUMP (15)"]))
        assert p.instructions[14] == ir.TreeJump(15)

    def test_empty_input(self):
        assert parse_ir("") == Program(())
        assert parse_ir("\n  \n# only a comment\n") == Program(())

    def test_nnlayer_example_order(self):
        p = parse_ir("NNLAYER SIGMOID 1 FLOAT32 0.01, 0.001, -1.5")
        (layer,) = p.instructions
        assert layer.neuron_count == 1
        assert layer.activation is Activation.SIGMOID
        assert layer.encoding is Kind.FLOAT32
        assert layer.coefficients == (
            Value.f32(0.01).payload, Value.f32(0.001).payload, -1.5,
        )

    def test_nnlayer_accepts_both_operand_orders(self):
        a = parse_ir("NNLAYER SIGMOID 1 FLOAT32 0.5, 0.5, 0.5")
        b = parse_ir("NNLAYER 1 SIGMOID FLOAT32 0.5, 0.5, 0.5")
        assert a == b

    def test_fig3_shapes(self, fig3_program):
        p = fig3_program
        assert len(p.instructions) == 15
        assert p.instructions[2] == ir.Input(ir.FLOAT32, RegisterRef(1, 0))
        assert p.instructions[5] == ir.MlInput(MlKind.MLP, 2, RegisterRef(1))
        assert p.instructions[8] == ir.TreeCondition(
            RegisterRef(2), CmpOp.GE, RegisterRef(0), 11
        )
        assert p.instructions[13] == ir.TreeCondition(
            RegisterRef(3), CmpOp.EQ, Value.boolean(False), 15
        )


class TestLiterals:
    def test_integer_narrowing(self):
        p = parse_ir("SET R0 TO 100\nSET R1 TO 200\nSET R2 TO -32768")
        kinds = [i.value.vtype.kind for i in p.instructions]
        assert kinds == [Kind.INT8, Kind.INT16, Kind.INT16]

    def test_integer_overflow_rejected(self):
        with pytest.raises(ParseError):
            parse_ir("SET R0 TO 40000")

    def test_annotations(self):
        p = parse_ir(
            'SET R0 TO 5:INT16\n'
            'SET R1 TO 0.5:FLOAT16\n'
            'SET R2 TO "hi":STRU8\n'
        )
        assert p.instructions[0].value == Value.int16(5)
        assert p.instructions[1].value == Value.f16(0.5)
        assert p.instructions[2].value == Value(ir.STR_U8, "hi")

    def test_string_inference(self):
        p = parse_ir('SET R0 TO "ascii"\nSET R1 TO "°C"')
        assert p.instructions[0].value.vtype.kind is Kind.STR_A7
        assert p.instructions[1].value.vtype.kind is Kind.STR_U8

    def test_string_escapes(self):
        p = parse_ir(r'PRINT "a\"b\\c\nd"')
        assert p.instructions[0].source.payload == 'a"b\\c\nd'

    def test_hash_inside_string_is_not_comment(self):
        p = parse_ir('PRINT "a # b"  # real comment')
        assert p.instructions[0].source.payload == "a # b"

    def test_hom_array_literal(self):
        p = parse_ir("SET R0 TO [1, 2, 3]:ARRAY<INT16>")
        v = p.instructions[0].value
        assert v.vtype == ir.array_of(Kind.INT16)
        assert [e.payload for e in v.payload] == [1, 2, 3]

    def test_het_array_literal(self):
        p = parse_ir('SET R0 TO [1, TRUE, "x", 2.5]')
        v = p.instructions[0].value
        assert v.vtype.kind is Kind.ARRAY_HET
        assert [e.vtype.kind for e in v.payload] == [
            Kind.INT8, Kind.BOOL, Kind.STR_A7, Kind.FLOAT32,
        ]

    def test_empty_arrays(self):
        p = parse_ir("SET R0 TO []\nSET R1 TO []:ARRAY<BOOL>")
        assert p.instructions[0].value == Value.het_array(())
        assert p.instructions[1].value == Value.hom_array(Kind.BOOL, ())

    def test_nested_array_rejected(self):
        with pytest.raises(ParseError):
            parse_ir("SET R0 TO [[1]]")

    def test_bool_keywords_case_insensitive(self):
        p = parse_ir("SET R0 TO true\nSET R1 TO False")
        assert p.instructions[0].value == Value.boolean(True)
        assert p.instructions[1].value == Value.boolean(False)


class TestInputTypes:
    def test_aliases(self):
        p = parse_ir(
            "INPUT FLOAT INTO R0\nINPUT BOOL INTO R1\n"
            "INPUT INT INTO R2\nINPUT STRING INTO R3\nINPUT FLOAT16 INTO R4"
        )
        kinds = [i.input_type.kind for i in p.instructions]
        assert kinds == [
            Kind.FLOAT32, Kind.BOOL, Kind.INT16, Kind.STR_U8, Kind.FLOAT16,
        ]

    def test_array_input_rejected(self):
        with pytest.raises(ParseError):
            parse_ir("INPUT HET INTO R0")


class TestErrors:
    def test_unknown_mnemonic(self):
        with pytest.raises(ParseError, match="unknown mnemonic"):
            parse_ir("FROBNICATE R0")

    def test_malformed_operand(self):
        with pytest.raises(ParseError):
            parse_ir("SET R0 5")  # missing TO

    def test_label_mismatch(self):
        with pytest.raises(ParseError, match="label"):
            parse_ir("(0) PRINT 1\n(5) PRINT 2")

    def test_non_numeric_weight(self):
        with pytest.raises(ParseError, match="weight"):
            parse_ir("NNLAYER 1 SIGMOID FLOAT32 0.5, oops")

    def test_error_carries_line_number(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_ir("PRINT 1\nPRINT 2\nBADOP")


class TestRenderRoundTrip:
    def test_fig3(self, fig3_program, fig3_text):
        assert parse_ir(render(fig3_program)) == fig3_program
        # renderer output matches the source notation line for line
        rendered = render(fig3_program).splitlines()
        assert rendered[0] == "(0)  SET R0 TO 0.5"
        assert rendered[6] == "(6)  NNLAYER 1 SIGMOID FLOAT32 0.01, 0.001, -1.5"

    def test_every_table_mnemonic_parses_and_renders(self):
        text = "\n".join([
            "SET R0 TO 1",
            "INPUT FLOAT INTO R1",
            'PRINT "x"',
            "TREECONDITION R0 < 5 (7)",
            "TREEJUMP (7)",
            "MLINPUT MLP 1 FROM R1",
            "NNLAYER 1 LINEAR FLOAT32 1.0, 0.0",
            "MLOUTPUT INTO R2",
        ])
        p = parse_ir(text)
        assert len(p.instructions) == 8
        assert parse_ir(render(p)) == p

    def test_random_programs_round_trip(self):
        rng = random.Random(2024)
        for _ in range(250):
            p = random_program(rng)
            assert parse_ir(render(p)) == p

    def test_annotated_values_round_trip(self):
        cases = [
            Value.int16(5), Value.f16(0.5), Value(ir.STR_U8, "plain"),
            Value.f32(float("inf")), Value.f16(float("-inf")),
            Value.hom_array(Kind.FLOAT16, (Value.f16(1.5), Value.f16(-2.0))),
            Value.het_array((Value.int8(1), Value.boolean(True))),
            Value.f32(-0.0),
        ]
        p = Program(tuple(ir.Set(RegisterRef(i), v) for i, v in enumerate(cases)))
        assert parse_ir(render(p)) == p

    def test_render_instruction_canonical_order(self):
        instr = parse_ir("NNLAYER SIGMOID 2 FLOAT16 1, 2, 3, 4, 5, 6").instructions[0]
        assert render_instruction(instr).startswith("NNLAYER 2 SIGMOID FLOAT16")
