// Interactive runner state machine: SCAN -> RUNNING -> AWAITING_INPUT ->
// ... -> DONE | ERROR. The transcript interleaves program outputs with the
// user's answers; exactly one input control is pending while awaiting.

import { disassemble } from "./codec";
import { ScalarKind } from "./values";
import { Session, SessionMessage, TypeMismatch } from "./vm";

export type Phase = "SCAN" | "RUNNING" | "AWAITING_INPUT" | "DONE" | "ERROR";

export interface TranscriptEntry {
  kind: "output" | "user_input";
  text: string;
}

export interface RunnerState {
  phase: Phase;
  transcript: TranscriptEntry[];
  pending: { expectedType: ScalarKind } | null;
  error: string | null;
}

export const STEP_BUDGET = 1_000_000;

export function initialState(): RunnerState {
  return { phase: "SCAN", transcript: [], pending: null, error: null };
}

export class Runner {
  state: RunnerState = initialState();
  private session: Session | null = null;

  /** Feed a scanned/uploaded payload; runs until input is needed or done. */
  load(payload: Uint8Array): RunnerState {
    let session: Session;
    try {
      session = new Session(disassemble(payload));
    } catch (err) {
      this.state = {
        phase: "ERROR",
        transcript: [],
        pending: null,
        error: `not a runnable code: ${(err as Error).message}`,
      };
      return this.state;
    }
    this.session = session;
    this.state = { phase: "RUNNING", transcript: [], pending: null, error: null };
    return this.drive();
  }

  /** Answer the pending input request. */
  submit(raw: unknown): RunnerState {
    if (this.state.phase !== "AWAITING_INPUT" || this.session === null) {
      throw new Error("no input is pending");
    }
    let messages: SessionMessage[];
    try {
      messages = this.session.resume(raw);
    } catch (err) {
      if (err instanceof TypeMismatch) {
        // keep awaiting; the control re-prompts
        return this.state;
      }
      throw err;
    }
    this.state = {
      ...this.state,
      phase: "RUNNING",
      pending: null,
      transcript: [
        ...this.state.transcript,
        { kind: "user_input", text: describeAnswer(raw) },
      ],
    };
    this.absorb(messages);
    return this.drive();
  }

  reset(): RunnerState {
    this.session = null;
    this.state = initialState();
    return this.state;
  }

  private drive(): RunnerState {
    const session = this.session!;
    let steps = 0;
    while (session.status === "running") {
      if (steps++ >= STEP_BUDGET) {
        this.state = {
          ...this.state,
          phase: "ERROR",
          error: `no halt within ${STEP_BUDGET} steps`,
        };
        return this.state;
      }
      this.absorb(session.step());
    }
    if (session.status === "awaiting_input") {
      this.state = {
        ...this.state,
        phase: "AWAITING_INPUT",
        pending: { expectedType: session.awaiting!.expected },
      };
    } else if (session.status === "halted") {
      this.state = { ...this.state, phase: "DONE", pending: null };
    }
    return this.state;
  }

  private absorb(messages: SessionMessage[]): void {
    for (const msg of messages) {
      if (msg.type === "output") {
        this.state = {
          ...this.state,
          transcript: [
            ...this.state.transcript,
            { kind: "output", text: msg.text },
          ],
        };
      } else if (msg.type === "fault") {
        this.state = { ...this.state, phase: "ERROR", error: msg.text };
      }
    }
  }

  /** Program outputs only, for transcript comparison with the CLI. */
  outputs(): string[] {
    return this.state.transcript
      .filter((e) => e.kind === "output")
      .map((e) => e.text);
  }
}

export function describeAnswer(raw: unknown): string {
  if (typeof raw === "boolean") return raw ? "Yes" : "No";
  return String(raw);
}
