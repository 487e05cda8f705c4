/**
 * The capture loop: pull a frame from the source, post it to the service,
 * render what comes back, and append stable letters to the message.  Frames
 * are posted strictly one at a time — the next capture waits for the
 * previous response — so the service sees an ordered stream and the browser
 * never piles up requests behind a slow network.
 *
 * Every collaborator is injected (client, frame source, speaker, sleep), so
 * the whole loop runs against scripted stubs in tests exactly as it runs
 * against the camera and a live server in the browser.
 */

import { ServiceClient, ServiceError } from "./api.js";
import type { FrameBody } from "./api.js";
import { MessageBuffer } from "./message.js";
import { LetterSpeaker } from "./speech.js";
import type { FrameResponse, OverlayData, SessionMetrics, UiSessionState } from "./types.js";

/** Supplies frame bytes; null means "nothing to send this tick" (camera warming up). */
export interface FrameSource {
  next(): Promise<FrameBody | null>;
}

/** Hooks for the rendering layer; all optional. */
export interface SessionEvents {
  /** Every successful frame response, stable or not. */
  onResult?(doc: FrameResponse): void;
  /** Only debounced stable-letter events, after the buffer and audio update. */
  onStable?(letter: string): void;
  /** Network or service failures; the loop is already backing off. */
  onError?(err: unknown): void;
}

export interface CaptureOptions {
  /** Capture rate in frames per second, clamped to [1, 15]. */
  rate?: number;
  events?: SessionEvents;
  /** Injectable pause, for tests; defaults to setTimeout. */
  sleep?: (ms: number) => Promise<void>;
  /** Accumulates stable letters; pass one in to keep it across sessions. */
  message?: MessageBuffer;
}

const RATE_MIN = 1;
const RATE_MAX = 15;
const DEFAULT_RATE = 8;
const BACKOFF_BASE_MS = 250;
const BACKOFF_CAP_MS = 5000;

/** Clamp a requested capture rate into the supported [1, 15] band. */
export function clampRate(rate: number): number {
  if (!Number.isFinite(rate)) return DEFAULT_RATE;
  return Math.min(RATE_MAX, Math.max(RATE_MIN, rate));
}

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class CaptureSession {
  readonly message: MessageBuffer;

  private sessionId: string | null = null;
  private rate: number;
  private lastOverlay: OverlayData | null = null;
  private running = false;
  private failures = 0;
  private readonly events: SessionEvents;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(
    private readonly client: ServiceClient,
    private readonly source: FrameSource,
    private readonly speaker: LetterSpeaker,
    options: CaptureOptions = {},
  ) {
    this.rate = clampRate(options.rate ?? DEFAULT_RATE);
    this.events = options.events ?? {};
    this.sleep = options.sleep ?? defaultSleep;
    this.message = options.message ?? new MessageBuffer();
  }

  get muted(): boolean {
    return this.speaker.muted;
  }

  setMuted(muted: boolean): void {
    this.speaker.muted = muted;
  }

  setRate(rate: number): void {
    this.rate = clampRate(rate);
  }

  /** Current state, for rendering. */
  snapshot(): UiSessionState {
    return {
      sessionId: this.sessionId,
      captureRate: this.rate,
      message: this.message.text,
      lastOverlay: this.lastOverlay,
      muted: this.speaker.muted,
    };
  }

  /** Ask the loop to wind down after the in-flight frame settles. */
  stop(): void {
    this.running = false;
  }

  /**
   * Run the capture loop until stop() is called, then close the service
   * session and return its final metrics (null if the close itself failed).
   */
  async run(): Promise<SessionMetrics | null> {
    if (this.running) throw new Error("capture session already running");
    this.running = true;
    try {
      while (this.running) {
        try {
          await this.tick();
          this.failures = 0;
          await this.sleep(1000 / this.rate);
        } catch (err) {
          this.failures += 1;
          if (err instanceof ServiceError && err.status === 404) {
            // The service forgot us (idle expiry or restart); start fresh.
            this.sessionId = null;
          }
          this.events.onError?.(err);
          await this.sleep(this.backoffMs());
        }
      }
    } finally {
      this.running = false;
    }
    return this.close();
  }

  private async tick(): Promise<void> {
    if (this.sessionId === null) {
      this.sessionId = await this.client.createSession();
    }
    const frame = await this.source.next();
    if (frame === null || !this.running) return;
    const doc = await this.client.postFrame(this.sessionId, frame);
    this.lastOverlay = doc.overlay;
    this.events.onResult?.(doc);
    if (doc.stable_letter) {
      this.message.append(doc.stable_letter);
      this.speaker.speak(doc.stable_letter);
      this.events.onStable?.(doc.stable_letter);
    }
  }

  private backoffMs(): number {
    const exponent = Math.min(this.failures - 1, 10);
    return Math.min(BACKOFF_CAP_MS, BACKOFF_BASE_MS * 2 ** exponent);
  }

  private async close(): Promise<SessionMetrics | null> {
    if (this.sessionId === null) return null;
    const id = this.sessionId;
    this.sessionId = null;
    try {
      return await this.client.endSession(id);
    } catch (err) {
      console.warn("failed to close service session", err);
      return null;
    }
  }
}
