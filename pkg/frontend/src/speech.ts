/**
 * Audio feedback for stable letters.  Each event plays a bundled per-letter
 * clip when one is configured, and otherwise falls back to the browser's
 * speech synthesis saying "The letter will be <letter>".  Playbacks queue so
 * rapid events never overlap, and nothing here ever blocks the capture loop.
 */

/** Plays audio for one letter; resolves when playback finishes. */
export interface AudioBackend {
  play(letter: string): Promise<void>;
}

/** The synthesized announcement for a letter. */
export function spokenPhrase(letter: string): string {
  return `The letter will be ${letter}`;
}

function playClip(url: string): Promise<void> {
  return new Promise((resolve, reject) => {
    const audio = new Audio(url);
    audio.onended = () => resolve();
    audio.onerror = () => reject(new Error(`clip failed to play: ${url}`));
    audio.play().catch(reject);
  });
}

function speakPhrase(text: string): Promise<void> {
  return new Promise((resolve, reject) => {
    if (typeof speechSynthesis === "undefined") {
      reject(new Error("speech synthesis unavailable"));
      return;
    }
    const utterance = new SpeechSynthesisUtterance(text);
    utterance.onend = () => resolve();
    utterance.onerror = (event) => reject(new Error(`speech failed: ${event.error}`));
    speechSynthesis.speak(utterance);
  });
}

/**
 * Default browser backend: per-letter clip if the map has one, speech
 * synthesis otherwise.  No clips ship with the demo, so the map is normally
 * empty and every letter is synthesized.
 */
export class BrowserAudioBackend implements AudioBackend {
  constructor(private readonly clips: Record<string, string> = {}) {}

  async play(letter: string): Promise<void> {
    const url = this.clips[letter];
    if (url) {
      try {
        await playClip(url);
        return;
      } catch (err) {
        console.warn(`clip for ${letter} failed, falling back to speech`, err);
      }
    }
    await speakPhrase(spokenPhrase(letter));
  }
}

export class LetterSpeaker {
  muted = false;

  private tail: Promise<void> = Promise.resolve();

  /**
   * @param backend   where the sound actually comes from
   * @param onSilent  called when audio fails for a letter, so the UI can
   *                  flash something visual instead of staying mute
   */
  constructor(
    private readonly backend: AudioBackend = new BrowserAudioBackend(),
    private readonly onSilent?: (letter: string) => void,
  ) {}

  /**
   * Queue audio for one stable letter.  Returns immediately; playback runs
   * after whatever is already queued.  Muted events are dropped outright.
   */
  speak(letter: string): void {
    if (this.muted) return;
    this.tail = this.tail.then(async () => {
      try {
        await this.backend.play(letter);
      } catch (err) {
        console.warn(`audio unavailable for ${letter}`, err);
        this.onSilent?.(letter);
      }
    });
  }

  /** Resolves once everything queued so far has finished playing. */
  async settled(): Promise<void> {
    let tail;
    do {
      tail = this.tail;
      await tail;
    } while (tail !== this.tail);
  }
}
