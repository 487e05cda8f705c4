/**
 * Browser entry point: wires the camera, the capture session, the overlay
 * canvas, the message buffer controls, and audio together.  All recognition
 * happens on the service; this file is presentation and plumbing only.
 */

import { ServiceClient } from "./api.js";
import { captureGrayFrame, DEFAULT_UPLOAD_WIDTH } from "./capture.js";
import { MessageBuffer } from "./message.js";
import { drawOverlay } from "./overlay.js";
import { CaptureSession } from "./session.js";
import type { FrameSource } from "./session.js";
import { BrowserAudioBackend, LetterSpeaker } from "./speech.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const video = byId<HTMLVideoElement>("video");
const overlayCanvas = byId<HTMLCanvasElement>("overlay");
const startBtn = byId<HTMLButtonElement>("start");
const stopBtn = byId<HTMLButtonElement>("stop");
const muteBox = byId<HTMLInputElement>("mute");
const rateInput = byId<HTMLInputElement>("rate");
const letterOut = byId<HTMLElement>("letter");
const stableOut = byId<HTMLElement>("stable");
const messageOut = byId<HTMLElement>("message");
const statusLine = byId<HTMLElement>("status");
const backspaceBtn = byId<HTMLButtonElement>("backspace");
const clearBtn = byId<HTMLButtonElement>("clear");
const copyBtn = byId<HTMLButtonElement>("copy");

const client = new ServiceClient();
const speaker = new LetterSpeaker(new BrowserAudioBackend(), flashStable);
const message = new MessageBuffer();
const scratch = document.createElement("canvas");

let session: CaptureSession | null = null;
let stream: MediaStream | null = null;
let frameWidth = DEFAULT_UPLOAD_WIDTH;
let frameHeight = DEFAULT_UPLOAD_WIDTH;

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function flashStable(letter: string): void {
  stableOut.textContent = letter;
  stableOut.classList.remove("flash");
  // Force a reflow so re-adding the class restarts the animation.
  void stableOut.offsetWidth;
  stableOut.classList.add("flash");
}

function renderMessage(): void {
  messageOut.textContent = message.text;
}

function resizeOverlay(): void {
  const w = video.clientWidth;
  const h = video.clientHeight;
  if (w && h && (overlayCanvas.width !== w || overlayCanvas.height !== h)) {
    overlayCanvas.width = w;
    overlayCanvas.height = h;
  }
}

window.addEventListener("resize", resizeOverlay);
video.addEventListener("loadedmetadata", resizeOverlay);

function cameraSource(): FrameSource {
  return {
    async next() {
      const captured = await captureGrayFrame(video, scratch);
      if (!captured) return null;
      frameWidth = captured.width;
      frameHeight = captured.height;
      return captured.blob;
    },
  };
}

async function start(): Promise<void> {
  if (session) return;
  try {
    stream = await navigator.mediaDevices.getUserMedia({
      video: { width: { ideal: 640 } },
      audio: false,
    });
  } catch (err) {
    console.error("camera unavailable", err);
    setStatus("Camera unavailable — grant permission and reload.");
    return;
  }
  video.srcObject = stream;
  try {
    await video.play();
  } catch (err) {
    console.warn("video autoplay blocked", err);
  }

  const active = new CaptureSession(client, cameraSource(), speaker, {
    rate: Number(rateInput.value),
    message,
    events: {
      onResult(doc) {
        resizeOverlay();
        drawOverlay(overlayCanvas, doc.overlay, frameWidth, frameHeight);
        letterOut.textContent = doc.letter;
        if (doc.metrics) {
          const { frames_processed, recognitions_emitted } = doc.metrics;
          setStatus(`${frames_processed} frames, ${recognitions_emitted} letters`);
        }
      },
      onStable(letter) {
        flashStable(letter);
        renderMessage();
      },
      onError(err) {
        console.warn("frame post failed; backing off", err);
        setStatus("Service unreachable — retrying…");
      },
    },
  });
  session = active;
  startBtn.disabled = true;
  stopBtn.disabled = false;
  setStatus("Recognizing…");

  const metrics = await active.run();
  if (metrics) {
    const ao = metrics.a_o === null ? "n/a" : metrics.a_o.toFixed(1);
    setStatus(`Stopped — ${metrics.frames_processed} frames, ` +
      `${metrics.recognitions_emitted} letters, a_o ${ao}`);
  } else {
    setStatus("Stopped.");
  }
}

function stop(): void {
  session?.stop();
  session = null;
  stream?.getTracks().forEach((track) => track.stop());
  stream = null;
  startBtn.disabled = false;
  stopBtn.disabled = true;
}

startBtn.addEventListener("click", () => void start());
stopBtn.addEventListener("click", stop);

muteBox.addEventListener("change", () => {
  speaker.muted = muteBox.checked;
});

rateInput.addEventListener("change", () => {
  session?.setRate(Number(rateInput.value));
});

backspaceBtn.addEventListener("click", () => {
  message.backspace();
  renderMessage();
});

clearBtn.addEventListener("click", () => {
  message.clear();
  renderMessage();
});

copyBtn.addEventListener("click", () => {
  void message.copy().then((ok) => {
    if (ok) setStatus("Message copied.");
  });
});

stopBtn.disabled = true;
speaker.muted = muteBox.checked;
client
  .health()
  .then((info) => setStatus(`Service ${info.version} ready.`))
  .catch(() => setStatus("Service unreachable — is `fingerspell serve` running?"));
