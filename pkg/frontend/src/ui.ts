// Pure view functions: RunnerState -> HTML. Input widgets are keyed by the
// awaited value type, so only type-correct values can be submitted (a BOOL
// prompt offers Yes/No buttons, never free text).

import { RunnerState } from "./runner";
import { ScalarKind } from "./values";

export type WidgetKind = "number" | "integer" | "toggle" | "text";

export function widgetFor(expected: ScalarKind): WidgetKind {
  switch (expected) {
    case "BOOL":
      return "toggle";
    case "INT8":
    case "INT16":
      return "integer";
    case "FLOAT16":
    case "FLOAT32":
      return "number";
    case "STRA7":
    case "STRU8":
      return "text";
  }
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderTranscript(state: RunnerState): string {
  const lines = state.transcript.map((entry) =>
    entry.kind === "output"
      ? `<div class="line output">${escapeHtml(entry.text)}</div>`
      : `<div class="line answer">${escapeHtml(entry.text)}</div>`,
  );
  return `<div class="transcript">${lines.join("")}</div>`;
}

export function renderControls(state: RunnerState): string {
  switch (state.phase) {
    case "SCAN":
      return `<div class="controls scan">
        <button id="camera-btn">Scan with camera</button>
        <label class="upload">or load an image
          <input id="file-input" type="file" accept="image/png,image/*">
        </label>
      </div>`;
    case "AWAITING_INPUT": {
      const widget = widgetFor(state.pending!.expectedType);
      if (widget === "toggle") {
        return `<div class="controls input">
          <button id="answer-yes">Yes</button>
          <button id="answer-no">No</button>
        </div>`;
      }
      const typeAttr =
        widget === "text" ? 'type="text"' : 'type="number"' +
          (widget === "integer" ? ' step="1"' : ' step="any"');
      return `<div class="controls input">
        <input id="answer-field" ${typeAttr} autofocus>
        <button id="answer-submit">Answer</button>
      </div>`;
    }
    case "RUNNING":
      return `<div class="controls running">running…</div>`;
    case "DONE":
      return `<div class="controls done">
        <span class="done-note">program finished</span>
        <button id="restart-btn">Scan another code</button>
      </div>`;
    case "ERROR":
      return `<div class="controls error">
        <span class="error-note">${escapeHtml(state.error ?? "error")}</span>
        <button id="restart-btn">Start over</button>
      </div>`;
  }
}

export function renderApp(state: RunnerState): string {
  const scanNote =
    state.phase === "SCAN"
      ? `<p class="hint">Point the camera at an executable QR code, or load a
         photo of one. Everything runs on this device; no network needed.</p>`
      : "";
  return renderTranscript(state) + scanNote + renderControls(state);
}
