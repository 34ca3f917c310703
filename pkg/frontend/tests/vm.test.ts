// VM semantics and session-protocol conformance against fixtures captured
// from the toolchain's --protocol mode.

import { describe, expect, it } from "vitest";

import { disassemble } from "../src/codec";
import { Session, SessionMessage, TypeMismatch } from "../src/vm";
import { fixtureBytes, fixtureText } from "./helpers";

function runWithInputs(
  payload: Uint8Array,
  inputs: unknown[],
): { messages: SessionMessage[]; session: Session } {
  const session = new Session(disassemble(payload));
  const messages: SessionMessage[] = [];
  const pending = [...inputs];
  for (let guard = 0; guard < 100000; guard++) {
    if (session.status === "running") {
      messages.push(...session.step());
    } else if (session.status === "awaiting_input") {
      if (!pending.length) break;
      messages.push(...session.resume(pending.shift()));
    } else {
      break;
    }
  }
  return { messages, session };
}

describe("Fig. 3 execution", () => {
  it("problem branch emits the paper's dialogue", () => {
    const { messages, session } = runWithInputs(fixtureBytes("fig3.eqr"), [
      60.0, 1000.0, true,
    ]);
    expect(session.status).toBe("halted");
    const outputs = messages
      .filter((m): m is Extract<SessionMessage, { type: "output" }> => m.type === "output")
      .map((m) => m.text);
    expect(outputs).toEqual([
      "Current machine temperature (°C)?",
      "Current machine RPM?",
      "Problem! Is the oil level low?",
      "Add oil",
    ]);
    const r2 = session.registers.get(2);
    if (Array.isArray(r2) || r2 === undefined) throw new Error("R2 missing");
    expect(Math.abs((r2.value as number) - 0.525)).toBeLessThan(1e-3);
  });

  it("healthy branch halts via the implicit exit", () => {
    const { messages, session } = runWithInputs(fixtureBytes("fig3.eqr"), [
      20.0, 100.0,
    ]);
    expect(session.status).toBe("halted");
    const texts = messages.filter((m) => m.type === "output").map((m) => (m as { text: string }).text);
    expect(texts[texts.length - 1]).toBe("Machine is running");
  });

  it("matches the CLI protocol transcript message for message", () => {
    const expected = fixtureText("fig3_protocol.jsonl")
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line));
    const { messages } = runWithInputs(fixtureBytes("fig3.eqr"), [
      60.0, 1000.0, true,
    ]);
    expect(messages).toEqual(expected);
  });
});

describe("value rendering parity", () => {
  it("prints every value shape exactly as the CLI does", () => {
    const expected = fixtureText("values_print_transcript.txt")
      .replace(/\n$/, "")
      .split("\n");
    const { messages, session } = runWithInputs(fixtureBytes("values_print.eqr"), []);
    expect(session.status).toBe("halted");
    const outputs = messages
      .filter((m) => m.type === "output")
      .map((m) => (m as { text: string }).text);
    expect(outputs).toEqual(expected);
  });
});

describe("input typing", () => {
  it("BOOL rejects numbers and keeps the session waiting", () => {
    const { session } = runWithInputs(fixtureBytes("fig3.eqr"), [60.0, 1000.0]);
    expect(session.status).toBe("awaiting_input");
    expect(() => session.resume(3.2)).toThrow(TypeMismatch);
    expect(session.status).toBe("awaiting_input");
    session.resume(true);
    while (session.status === "running") session.step();
    expect(session.status).toBe("halted");
  });

  it("floats are rounded to their storage width", () => {
    const { session } = runWithInputs(fixtureBytes("fig3.eqr"), [0.1]);
    const r1 = session.registers.get(1);
    if (!Array.isArray(r1)) throw new Error("R1 should be an array");
    expect(r1[0]?.value).toBe(Math.fround(0.1));
  });
});

describe("faults", () => {
  it("undefined register reads fault", () => {
    // header + PRINT R9: opcode 0010, reg discriminator 0, gamma(10), flag 0
    const session = new Session([
      { op: "PRINT", source: { reg: { index: 9, element: null } } },
    ]);
    const messages = session.step();
    expect(session.status).toBe("faulted");
    expect(messages[0].type).toBe("fault");
    expect((messages[0] as { text: string }).text).toMatch(/UndefinedRegister/);
  });

  it("overshooting jumps halt instead of faulting", () => {
    const session = new Session([{ op: "TREEJUMP", target: 7 }]);
    expect(session.step()).toEqual([{ type: "halted" }]);
    expect(session.status).toBe("halted");
  });
});
