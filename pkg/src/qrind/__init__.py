"""QRind toolchain: parse the textual intermediate representation,
assemble it into bit-packed eQRbytecode, embed/extract it in QR symbols,
and execute it in a session-based virtual machine."""

from .codec import assemble, disassemble
from .ir import Program, render
from .parser import ParseError, parse_ir
from .validator import validate
from .vm import create_session, resume_with_input, run_to_completion

__version__ = "0.1.0"

__all__ = [
    "Program", "parse_ir", "ParseError", "render", "validate",
    "assemble", "disassemble", "create_session", "resume_with_input",
    "run_to_completion", "__version__",
]
