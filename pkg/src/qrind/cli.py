"""Command-line entry point for the QRind toolchain.

Generation chain: compile (.qri -> .eqr) and qr (.eqr -> PNG/SVG).
Execution chain: dis, run (batch, interactive, or the JSONL session
protocol), info, and ml-import for bringing trained models into IR form.

Exit codes: 0 success, 1 user or program error, 2 internal fault.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import codec, mlimport, protocol, qr, vm
from .ir import KIND_NAMES, render
from .parser import ParseError, parse_ir
from .validator import validate


class CliError(Exception):
    """User-level failure; message goes to stderr, exit code 1."""


def _load_program_from_source(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    program = parse_ir(text)
    diags = validate(program)
    if diags:
        raise CliError("\n".join(str(d) for d in diags))
    return program


def _load_bytecode(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _load_program(path: Path):
    """Accept either textual IR (.qri) or bytecode (.eqr)."""
    if path.suffix.lower() == ".qri":
        return _load_program_from_source(path)
    return codec.disassemble(_load_bytecode(path))


def _size_report(data: bytes) -> str:
    lines = [f"{len(data)} bytes of eQRbytecode"]
    for level in qr.EcLevel:
        version = qr.smallest_version(len(data), level)
        if version is None:
            lines.append(f"  EC {level.value}: does not fit any QR version")
        else:
            lines.append(
                f"  EC {level.value}: fits QR version {version} "
                f"({qr.capacity(version, level)} bytes)"
            )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands

def cmd_compile(args) -> int:
    src = Path(args.source)
    program = _load_program_from_source(src)
    data = codec.assemble(program)
    out = Path(args.output) if args.output else src.with_suffix(".eqr")
    out.write_bytes(data)
    print(f"wrote {out}", file=sys.stderr)
    print(_size_report(data), file=sys.stderr)
    return 0


def cmd_dis(args) -> int:
    program = codec.disassemble(_load_bytecode(Path(args.bytecode)))
    sys.stdout.write(render(program))
    return 0


def _parse_cli_value(text: str):
    upper = text.strip().upper()
    if upper in ("TRUE", "YES"):
        return True
    if upper in ("FALSE", "NO"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def _run_batch(program, inputs, budget: int) -> int:
    transcript = vm.run_to_completion(program, inputs, step_budget=budget)
    for line in transcript.outputs:
        print(line)
    if transcript.status is vm.Status.FAULTED:
        f = transcript.fault
        print(
            f"fault: {f.reason} at instruction {f.pc}: {f.instruction}",
            file=sys.stderr,
        )
        return 1
    return 0


def _run_interactive(program, budget: int) -> int:
    session = vm.create_session(program)
    steps = 0
    while True:
        if session.status is vm.Status.RUNNING:
            if steps >= budget:
                raise CliError(f"no halt within {budget} steps")
            steps += 1
            for event in session.step():
                if isinstance(event, vm.Output):
                    print(event.text)
                elif isinstance(event, vm.Fault):
                    print(
                        f"fault: {event.reason} at instruction {event.pc}: "
                        f"{event.instruction}",
                        file=sys.stderr,
                    )
        elif session.status is vm.Status.AWAITING_INPUT:
            expected = session.awaiting[1]
            prompt = f"[{KIND_NAMES[expected.kind]}]> "
            try:
                raw = input(prompt)
            except EOFError:
                raise CliError("input stream closed mid-session") from None
            try:
                vm.resume_with_input(session, _parse_cli_value(raw))
            except vm.TypeMismatch as exc:
                print(f"rejected: {exc}", file=sys.stderr)
        else:
            return 1 if session.status is vm.Status.FAULTED else 0


def cmd_run(args) -> int:
    program = _load_program(Path(args.bytecode))
    if args.protocol:
        def read_line():
            line = sys.stdin.readline()
            return line if line else None

        status = protocol.serve(
            program, read_line, print, step_budget=args.step_budget
        )
        return 1 if status is vm.Status.FAULTED else 0
    if args.input:
        return _run_batch(
            program, [_parse_cli_value(v) for v in args.input], args.step_budget
        )
    return _run_interactive(program, args.step_budget)


def cmd_qr(args) -> int:
    data = _load_bytecode(Path(args.bytecode))
    params = qr.QrParams(
        version=args.version,
        ec_level=qr.EcLevel(args.ec.upper()),
        module_pixel_size=args.module_pixels,
        output="SVG" if args.svg else "PNG",
    )
    image = qr.emit_qr(data, params)
    out = Path(args.out) if args.out else Path(args.bytecode).with_suffix(
        ".svg" if args.svg else ".png"
    )
    out.write_bytes(image)
    version = qr.choose_version(len(data), params)
    print(
        f"wrote {out} (version {version}, EC {params.ec_level.value}, "
        f"{len(data)} bytes)",
        file=sys.stderr,
    )
    return 0


def cmd_info(args) -> int:
    path = Path(args.file)
    if path.suffix.lower() == ".qri":
        program = _load_program_from_source(path)
        data = codec.assemble(program)
    else:
        data = _load_bytecode(path)
        program = codec.disassemble(data)
    print(f"{len(program.instructions)} instructions")
    print(_size_report(data))
    return 0


def cmd_ml_import(args) -> int:
    try:
        text = Path(args.model).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.model}: {exc}") from None
    try:
        model, layers = mlimport.load_model(text, args.encoding)
    except mlimport.ImportSpecError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(
        mlimport.emit_fragment(model, layers, args.source_reg, args.target_reg)
    )
    print(mlimport.size_report(model), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrind",
        description="Assembler, VM and QR embedding for the QRind dialect",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="textual IR -> eQRbytecode")
    p.add_argument("source", help="input .qri file")
    p.add_argument("-o", "--output", help="output .eqr path")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("dis", help="eQRbytecode -> textual IR on stdout")
    p.add_argument("bytecode", help="input .eqr file")
    p.set_defaults(func=cmd_dis)

    p = sub.add_parser("run", help="execute a program")
    p.add_argument("bytecode", help=".eqr (or .qri) file")
    p.add_argument(
        "--input", action="append", default=[],
        help="batch-mode input value (repeatable, in order)",
    )
    p.add_argument(
        "--protocol", action="store_true",
        help="speak the JSONL session protocol on stdin/stdout",
    )
    p.add_argument("--step-budget", type=int, default=vm.DEFAULT_STEP_BUDGET)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("qr", help="eQRbytecode -> QR image")
    p.add_argument("bytecode", help="input .eqr file")
    p.add_argument("--ec", default="M", choices=list("LMQH") + list("lmqh"))
    p.add_argument("--version", type=int, default=None, help="QR version 1..40")
    p.add_argument("--module-pixels", type=int, default=8)
    p.add_argument("--svg", action="store_true", help="emit SVG instead of PNG")
    p.add_argument("--out", help="output image path")
    p.set_defaults(func=cmd_qr)

    p = sub.add_parser("info", help="size and QR-fit report")
    p.add_argument("file", help=".eqr or .qri file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("ml-import", help="JSON MLP -> IR fragment")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--encoding", choices=["f16", "f32"], default=None)
    p.add_argument("--source-reg", type=int, default=0)
    p.add_argument("--target-reg", type=int, default=1)
    p.set_defaults(func=cmd_ml_import)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        CliError, ParseError, codec.CodecError, qr.CapacityExceeded,
        qr.NoSymbolFound, qr.UndecodableSymbol, vm.VmError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal fault
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
