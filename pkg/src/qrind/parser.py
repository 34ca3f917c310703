"""Parser for the textual QRind intermediate representation.

One instruction per non-blank, non-comment line. `#` starts a comment
(outside string literals), `(n)` line labels are optional but must match
the instruction index when present. Untyped literals follow the narrowest-
fit rule; a `:TYPE` suffix overrides it, and bracketed lists are array
literals (`[..]:ARRAY<T>` homogeneous, bare `[..]` heterogeneous).
"""

from __future__ import annotations

import re

from . import ir
from .floats import round_f16, round_f32
from .ir import (
    CMP_BY_SYMBOL, Kind, MlKind, Program, RegisterRef, Value, ValueType,
)
from .mlp import Activation


class ParseError(Exception):
    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


_TOKEN_RE = re.compile(
    r"""
    \s*(
        "(?:[^"\\]|\\.)*"          |  # string literal
        \(\s*\d+\s*\)              |  # parenthesized index
        ==|!=|<=|>=|<|>            |  # comparison operators
        -?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?  |  # number
        -?(?:Infinity|NaN)         |  # non-finite floats
        [A-Za-z_][A-Za-z0-9_]*     |  # word
        \[ | \] | , | :
    )
    """,
    re.VERBOSE,
)

_REGISTER_RE = re.compile(r"^[Rr](\d+)$")
_INT_RE = re.compile(r"^-?\d+$")


def _strip_comment(line: str) -> str:
    in_string = False
    escaped = False
    for i, c in enumerate(line):
        if in_string:
            if escaped:
                escaped = False
            elif c == "\\":
                escaped = True
            elif c == '"':
                in_string = False
        elif c == '"':
            in_string = True
        elif c == "#":
            return line[:i]
    return line


def _tokenize(text: str, line_no: int) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line_no)
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _unquote(token: str, line_no: int) -> str:
    body = token[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            i += 1
            if i >= len(body):
                raise ParseError("dangling escape in string", line_no)
            e = body[i]
            mapped = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}.get(e)
            if mapped is None:
                raise ParseError(f"unknown escape \\{e}", line_no)
            out.append(mapped)
        else:
            out.append(c)
        i += 1
    return "".join(out)


class _Line:
    """Token cursor for a single instruction line."""

    def __init__(self, tokens: list, line_no: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, what: str = "token") -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {what}, line ended", self.line_no)
        self.pos += 1
        return tok

    def expect_word(self, word: str) -> None:
        tok = self.next(f"'{word}'")
        if tok.upper() != word:
            raise ParseError(f"expected '{word}', got {tok!r}", self.line_no)

    def expect(self, literal: str) -> None:
        tok = self.next(f"'{literal}'")
        if tok != literal:
            raise ParseError(f"expected '{literal}', got {tok!r}", self.line_no)

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"trailing tokens: {self.peek()!r}", self.line_no)

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line_no)


def _is_number(tok: str) -> bool:
    return bool(
        re.match(r"^-?(\d|\.\d|Infinity|NaN)", tok)
    ) and tok not in ("-",)


def _parse_register(line: _Line) -> RegisterRef:
    tok = line.next("register")
    m = _REGISTER_RE.match(tok)
    if not m:
        raise line.error(f"expected register, got {tok!r}")
    index = int(m.group(1))
    element = None
    if line.peek() == "[":
        line.expect("[")
        sub = line.next("subscript")
        if not _INT_RE.match(sub) or sub.startswith("-"):
            raise line.error(f"register subscript must be a non-negative int, got {sub!r}")
        element = int(sub)
        line.expect("]")
    return RegisterRef(index, element)


def _parse_target(line: _Line) -> int:
    tok = line.next("jump target '(n)'")
    m = re.match(r"^\(\s*(\d+)\s*\)$", tok)
    if not m:
        raise line.error(f"expected '(n)' jump target, got {tok!r}")
    return int(m.group(1))


def _number_value(tok: str, line: _Line) -> Value:
    if _INT_RE.match(tok):
        i = int(tok)
        if not -32768 <= i <= 32767:
            raise line.error(f"integer literal out of 16-bit range: {tok}")
        return Value.integer(i)
    return Value.f32(float(tok))


def _coerce_annotated(tok: str, kind: Kind, line: _Line) -> Value:
    """Parse one scalar payload token under an explicit target kind."""
    if kind is Kind.BOOL:
        if tok.upper() in ("TRUE", "FALSE"):
            return Value.boolean(tok.upper() == "TRUE")
        raise line.error(f"BOOL literal must be TRUE/FALSE, got {tok!r}")
    if kind in (Kind.INT8, Kind.INT16):
        if not _INT_RE.match(tok):
            raise line.error(f"integer literal expected, got {tok!r}")
        i = int(tok)
        lo, hi = (-128, 127) if kind is Kind.INT8 else (-32768, 32767)
        if not lo <= i <= hi:
            raise line.error(f"{kind.name} literal out of range: {tok}")
        return Value(ValueType(kind), i)
    if kind is Kind.FLOAT16:
        if not _is_number(tok):
            raise line.error(f"numeric literal expected, got {tok!r}")
        return Value.f16(float(tok))
    if kind is Kind.FLOAT32:
        if not _is_number(tok):
            raise line.error(f"numeric literal expected, got {tok!r}")
        return Value.f32(float(tok))
    if kind in (Kind.STR_A7, Kind.STR_U8):
        if not tok.startswith('"'):
            raise line.error(f"string literal expected, got {tok!r}")
        s = _unquote(tok, line.line_no)
        if kind is Kind.STR_A7 and any(ord(c) >= 128 for c in s):
            raise line.error("STRA7 literal contains non-ASCII characters")
        return Value(ValueType(kind), s)
    raise line.error(f"cannot annotate literal with {kind.name}")


def _maybe_annotation(line: _Line) -> str | None:
    if line.peek() == ":":
        line.expect(":")
        return line.next("type annotation").upper()
    return None


def _scalar_literal_from_token(tok: str, line: _Line) -> Value:
    if tok.startswith('"'):
        return Value.text(_unquote(tok, line.line_no))
    if tok.upper() in ("TRUE", "FALSE"):
        return Value.boolean(tok.upper() == "TRUE")
    if _is_number(tok):
        return _number_value(tok, line)
    raise line.error(f"expected literal, got {tok!r}")


def _parse_literal(line: _Line) -> Value:
    if line.peek() == "[":
        return _parse_bracket_literal(line)
    tok = line.next("literal")
    base: Value
    if tok.startswith('"'):
        s = _unquote(tok, line.line_no)
        base = Value.text(s)
    elif tok.upper() in ("TRUE", "FALSE"):
        base = Value.boolean(tok.upper() == "TRUE")
    elif _is_number(tok):
        base = None  # deferred: annotation decides rounding width
    else:
        raise line.error(f"expected literal, got {tok!r}")

    ann = _maybe_annotation(line)
    if ann is None:
        return base if base is not None else _number_value(tok, line)
    kind = ir.lookup_kind(ann)
    if kind is None:
        raise line.error(f"unknown type annotation :{ann}")
    return _coerce_annotated(tok, kind, line)


def _parse_bracket_literal(line: _Line) -> Value:
    line.expect("[")
    raw = []
    first = True
    while line.peek() != "]":
        if not first:
            line.expect(",")
        tok = line.next("array element")
        if tok == "[":
            raise line.error("arrays nest at most one level")
        raw.append((tok, _maybe_annotation(line)))
        first = False
    line.expect("]")

    if line.peek() == ":":
        line.expect(":")
        head = line.next("array annotation").upper()
        if head != "ARRAY":
            raise line.error(f"expected ARRAY<T> annotation, got :{head}")
        line.expect("<")
        elem_name = line.next("element type")
        line.expect(">")
        elem = ir.lookup_kind(elem_name)
        if elem is None or elem not in ir.SCALAR_KINDS:
            raise line.error(f"bad array element type {elem_name!r}")
        elems = []
        for tok, ann in raw:
            if ann is not None:
                raise line.error("no per-element annotations inside ARRAY<..> literals")
            elems.append(_coerce_annotated(tok, elem, line))
        return Value.hom_array(elem, tuple(elems))

    elems = []
    for tok, ann in raw:
        if ann is None:
            elems.append(_scalar_literal_from_token(tok, line))
        else:
            kind = ir.lookup_kind(ann)
            if kind is None:
                raise line.error(f"unknown type annotation :{ann}")
            elems.append(_coerce_annotated(tok, kind, line))
    return Value.het_array(tuple(elems))


def _parse_operand(line: _Line):
    tok = line.peek()
    if tok is not None and _REGISTER_RE.match(tok):
        return _parse_register(line)
    return _parse_literal(line)


def _parse_input_type(line: _Line) -> ValueType:
    tok = line.next("input type")
    kind = ir.lookup_kind(tok)
    if kind is None or kind not in ir.SCALAR_KINDS:
        raise line.error(f"INPUT type must be scalar, got {tok!r}")
    return ValueType(kind)


def _parse_nnlayer(line: _Line) -> ir.NnLayer:
    # Both operand orders are accepted for the first two fields: an
    # activation keyword is never a valid integer, so the forms are
    # unambiguous. Canonical order is <count> <activation>.
    first = line.next("neuron count or activation")
    if _INT_RE.match(first):
        count = int(first)
        act_tok = line.next("activation")
    else:
        act_tok = first
        count_tok = line.next("neuron count")
        if not _INT_RE.match(count_tok):
            raise line.error(f"expected neuron count, got {count_tok!r}")
        count = int(count_tok)
    if count < 1:
        raise line.error("neuron count must be positive")
    try:
        activation = Activation[act_tok.upper()]
    except KeyError:
        raise line.error(f"unknown activation {act_tok!r}") from None

    enc_tok = line.next("encoding").upper()
    if enc_tok == "FLOAT16":
        encoding = Kind.FLOAT16
        rounder = round_f16
    elif enc_tok == "FLOAT32":
        encoding = Kind.FLOAT32
        rounder = round_f32
    else:
        raise line.error(f"encoding must be FLOAT16 or FLOAT32, got {enc_tok!r}")

    coeffs = []
    first_coeff = True
    while line.peek() is not None:
        if not first_coeff:
            line.expect(",")
        tok = line.next("weight")
        if not _is_number(tok):
            raise line.error(f"non-numeric weight {tok!r}")
        coeffs.append(rounder(float(tok)))
        first_coeff = False
    if not coeffs:
        raise line.error("NNLAYER needs at least one coefficient")
    return ir.NnLayer(count, activation, encoding, tuple(coeffs))


def _parse_instruction(line: _Line) -> ir.Instruction:
    mnemonic = line.next("mnemonic").upper()
    if mnemonic == "SET":
        target = _parse_register(line)
        line.expect_word("TO")
        value = _parse_literal(line)
        line.done()
        return ir.Set(target, value)
    if mnemonic == "INPUT":
        itype = _parse_input_type(line)
        line.expect_word("INTO")
        target = _parse_register(line)
        line.done()
        return ir.Input(itype, target)
    if mnemonic == "PRINT":
        source = _parse_operand(line)
        line.done()
        return ir.Print(source)
    if mnemonic == "TREECONDITION":
        lhs = _parse_operand(line)
        op_tok = line.next("comparison operator")
        op = CMP_BY_SYMBOL.get(op_tok)
        if op is None:
            raise line.error(f"unknown comparison operator {op_tok!r}")
        rhs = _parse_operand(line)
        target = _parse_target(line)
        line.done()
        return ir.TreeCondition(lhs, op, rhs, target)
    if mnemonic == "TREEJUMP":
        target = _parse_target(line)
        line.done()
        return ir.TreeJump(target)
    if mnemonic == "MLINPUT":
        kind_tok = line.next("ML type")
        try:
            ml_type = MlKind[kind_tok.upper()]
        except KeyError:
            raise line.error(f"unknown ML type {kind_tok!r}") from None
        arity_tok = line.next("input arity")
        if not _INT_RE.match(arity_tok) or int(arity_tok) < 1:
            raise line.error(f"arity must be a positive int, got {arity_tok!r}")
        line.expect_word("FROM")
        source = _parse_register(line)
        line.done()
        return ir.MlInput(ml_type, int(arity_tok), source)
    if mnemonic == "NNLAYER":
        layer = _parse_nnlayer(line)
        line.done()
        return layer
    if mnemonic == "MLOUTPUT":
        line.expect_word("INTO")
        target = _parse_register(line)
        line.done()
        return ir.MlOutput(target)
    raise line.error(f"unknown mnemonic {mnemonic!r}")


def parse_ir(text: str) -> Program:
    instructions = []
    source_lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        tokens = _tokenize(stripped, line_no)
        line = _Line(tokens, line_no)
        # optional (n) label
        tok = line.peek()
        if tok is not None and re.match(r"^\(\s*\d+\s*\)$", tok):
            label = int(re.sub(r"[()\s]", "", tok))
            if label != len(instructions):
                raise ParseError(
                    f"label ({label}) does not match instruction index "
                    f"{len(instructions)}",
                    line_no,
                )
            line.next()
        instructions.append(_parse_instruction(line))
        source_lines.append(stripped)
    return Program(tuple(instructions), tuple(source_lines))
