"""Newline-delimited session protocol for driving the VM across a process
boundary.

Messages from the VM: {"type": "output", "text": ...},
{"type": "input_request", "expected_type": ..., "text": <last output>},
{"type": "halted"}, {"type": "fault", "text": ...}.
Resume messages into the VM: {"type": "input", "value": ...}.
"""

from __future__ import annotations

import json

from . import vm
from .ir import KIND_NAMES, Program


def event_to_message(event: vm.SessionEvent) -> dict:
    if isinstance(event, vm.Output):
        return {"type": "output", "text": event.text}
    if isinstance(event, vm.InputRequest):
        return {
            "type": "input_request",
            "expected_type": KIND_NAMES[event.expected.kind],
            "text": event.prompt_context,
        }
    if isinstance(event, vm.Halted):
        return {"type": "halted"}
    if isinstance(event, vm.Fault):
        return {
            "type": "fault",
            "text": f"{event.reason} at instruction {event.pc}: "
                    f"{event.instruction}",
        }
    raise TypeError(f"not a session event: {event!r}")


def parse_input_message(line: str):
    """Extract the resume value from a {"type": "input"} message."""
    msg = json.loads(line)
    if not isinstance(msg, dict) or msg.get("type") != "input":
        raise ValueError(f"expected an input message, got {line.strip()!r}")
    if "value" not in msg:
        raise ValueError("input message lacks a value field")
    return msg["value"]


def serve(
    program: Program,
    read_line,
    write_line,
    step_budget: int = vm.DEFAULT_STEP_BUDGET,
    strict: bool = True,
) -> vm.Status:
    """Drive one session: events out through write_line (JSON text),
    resume values in through read_line. Returns the final status."""
    session = vm.create_session(program, strict=strict)
    steps = 0
    while True:
        if session.status is vm.Status.RUNNING:
            if steps >= step_budget:
                write_line(json.dumps(
                    {"type": "fault", "text": f"no halt within {step_budget} steps"}
                ))
                return vm.Status.FAULTED
            steps += 1
            for event in session.step():
                if isinstance(event, vm.Halted):
                    continue  # written once below, from the status
                write_line(json.dumps(event_to_message(event), ensure_ascii=False))
        elif session.status is vm.Status.AWAITING_INPUT:
            line = read_line()
            if line is None or line == "":
                write_line(json.dumps(
                    {"type": "fault", "text": "input stream ended mid-session"}
                ))
                return vm.Status.FAULTED
            try:
                value = parse_input_message(line)
                vm.resume_with_input(session, value)
            except (ValueError, vm.TypeMismatch) as exc:
                # Session stays AWAITING_INPUT; re-issue the request.
                write_line(json.dumps(
                    {"type": "fault", "text": f"rejected input: {exc}"}
                ))
                if session.status is not vm.Status.AWAITING_INPUT:
                    return session.status
        else:
            if session.status is vm.Status.HALTED:
                write_line(json.dumps({"type": "halted"}))
            return session.status
