// DOM wiring: camera/file capture feeds the runner, every state change
// re-renders, and typed widgets translate clicks/keys into resume values.
// The app is fully offline: no fetches, no external resources.

import { decodeImageData } from "./qrscan";
import { Runner } from "./runner";
import { renderApp, widgetFor } from "./ui";

const app = document.getElementById("app")!;
const runner = new Runner();
let cameraStream: MediaStream | null = null;
let scanTimer: number | null = null;

function stopCamera(): void {
  if (scanTimer !== null) {
    cancelAnimationFrame(scanTimer);
    scanTimer = null;
  }
  if (cameraStream) {
    cameraStream.getTracks().forEach((t) => t.stop());
    cameraStream = null;
  }
  document.getElementById("camera-view")?.remove();
}

function render(): void {
  app.innerHTML = renderApp(runner.state);
  wire();
  const transcript = app.querySelector(".transcript");
  transcript?.scrollTo(0, transcript.scrollHeight);
}

function submit(value: unknown): void {
  runner.submit(value);
  render();
}

function wire(): void {
  document.getElementById("file-input")?.addEventListener("change", (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) loadImageFile(file);
  });
  document.getElementById("camera-btn")?.addEventListener("click", startCamera);
  document.getElementById("restart-btn")?.addEventListener("click", () => {
    stopCamera();
    runner.reset();
    render();
  });
  document.getElementById("answer-yes")?.addEventListener("click", () => submit(true));
  document.getElementById("answer-no")?.addEventListener("click", () => submit(false));

  const field = document.getElementById("answer-field") as HTMLInputElement | null;
  const send = () => {
    if (!field || runner.state.pending === null) return;
    const widget = widgetFor(runner.state.pending.expectedType);
    if (widget === "text") {
      submit(field.value);
      return;
    }
    const num = Number(field.value);
    if (field.value.trim() === "" || Number.isNaN(num)) {
      field.reportValidity();
      return;
    }
    submit(num);
  };
  document.getElementById("answer-submit")?.addEventListener("click", send);
  field?.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") send();
  });
  field?.focus();
}

function handlePixels(image: ImageData): boolean {
  const payload = decodeImageData(image);
  if (!payload) return false;
  stopCamera();
  runner.load(payload);
  render();
  return true;
}

function loadImageFile(file: File): void {
  const url = URL.createObjectURL(file);
  const img = new Image();
  img.onload = () => {
    URL.revokeObjectURL(url);
    const canvas = document.createElement("canvas");
    canvas.width = img.naturalWidth;
    canvas.height = img.naturalHeight;
    const ctx = canvas.getContext("2d")!;
    ctx.drawImage(img, 0, 0);
    const pixels = ctx.getImageData(0, 0, canvas.width, canvas.height);
    if (!handlePixels(pixels)) {
      flashHint("No QR code found in that image — try again.");
    }
  };
  img.onerror = () => {
    URL.revokeObjectURL(url);
    flashHint("That file is not a readable image.");
  };
  img.src = url;
}

function flashHint(text: string): void {
  const note = document.createElement("p");
  note.className = "hint retry";
  note.textContent = text;
  app.append(note);
  setTimeout(() => note.remove(), 4000);
}

async function startCamera(): Promise<void> {
  try {
    cameraStream = await navigator.mediaDevices.getUserMedia({
      video: { facingMode: "environment" },
    });
  } catch {
    flashHint("Camera unavailable — load an image instead.");
    return;
  }
  const video = document.createElement("video");
  video.id = "camera-view";
  video.playsInline = true;
  video.srcObject = cameraStream;
  app.append(video);
  await video.play();

  const canvas = document.createElement("canvas");
  const ctx = canvas.getContext("2d", { willReadFrequently: true })!;
  const tick = () => {
    if (!cameraStream) return;
    if (video.readyState >= video.HAVE_CURRENT_DATA) {
      canvas.width = video.videoWidth;
      canvas.height = video.videoHeight;
      ctx.drawImage(video, 0, 0);
      const pixels = ctx.getImageData(0, 0, canvas.width, canvas.height);
      if (handlePixels(pixels)) return;
    }
    scanTimer = requestAnimationFrame(tick);
  };
  scanTimer = requestAnimationFrame(tick);
}

render();
