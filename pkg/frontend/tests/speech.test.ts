import { describe, expect, it } from "vitest";

import { LetterSpeaker, spokenPhrase } from "../src/speech.js";
import type { AudioBackend } from "../src/speech.js";

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Backend that records playback order and whether playbacks ever overlap. */
class RecordingBackend implements AudioBackend {
  played: string[] = [];
  active = 0;
  maxActive = 0;

  constructor(private readonly failFor: string[] = []) {}

  async play(letter: string): Promise<void> {
    this.active += 1;
    this.maxActive = Math.max(this.maxActive, this.active);
    await sleep(2);
    this.active -= 1;
    if (this.failFor.includes(letter)) {
      throw new Error(`no audio for ${letter}`);
    }
    this.played.push(letter);
  }
}

describe("spokenPhrase", () => {
  it("announces the letter in the standard wording", () => {
    expect(spokenPhrase("V")).toBe("The letter will be V");
  });
});

describe("LetterSpeaker", () => {
  it("plays queued letters in order without overlap", async () => {
    const backend = new RecordingBackend();
    const speaker = new LetterSpeaker(backend);
    for (const letter of ["V", "C", "A", "L"]) speaker.speak(letter);
    await speaker.settled();
    expect(backend.played).toEqual(["V", "C", "A", "L"]);
    expect(backend.maxActive).toBe(1);
  });

  it("drops events while muted and resumes after unmuting", async () => {
    const backend = new RecordingBackend();
    const speaker = new LetterSpeaker(backend);
    speaker.muted = true;
    speaker.speak("V");
    speaker.speak("C");
    speaker.muted = false;
    speaker.speak("A");
    await speaker.settled();
    expect(backend.played).toEqual(["A"]);
  });

  it("falls back to the silent callback when audio fails, then keeps going", async () => {
    const backend = new RecordingBackend(["X"]);
    const silent: string[] = [];
    const speaker = new LetterSpeaker(backend, (letter) => silent.push(letter));
    speaker.speak("X");
    speaker.speak("Y");
    await speaker.settled();
    expect(silent).toEqual(["X"]);
    expect(backend.played).toEqual(["Y"]);
  });
});
