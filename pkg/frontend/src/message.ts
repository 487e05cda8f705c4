/**
 * The message buffer: stable letters accumulate here as the signer spells.
 * Editing is deliberately minimal — backspace, clear, copy — since the
 * letters themselves only ever arrive from the service.
 */

/** Anything with the clipboard's writeText shape; injectable for tests. */
export interface ClipboardLike {
  writeText(text: string): Promise<void>;
}

export class MessageBuffer {
  private value = "";

  get text(): string {
    return this.value;
  }

  /** Append one stable letter to the end of the message. */
  append(letter: string): void {
    this.value += letter;
  }

  /** Drop the last letter; no-op on an empty buffer. */
  backspace(): void {
    this.value = this.value.slice(0, -1);
  }

  /** Reset the message to empty. */
  clear(): void {
    this.value = "";
  }

  /**
   * Copy the current message to the clipboard.  Returns false (after a
   * console warning) when the clipboard is unavailable or refuses.
   */
  async copy(clipboard?: ClipboardLike): Promise<boolean> {
    const target =
      clipboard ?? (typeof navigator !== "undefined" ? navigator.clipboard : undefined);
    if (!target) {
      console.warn("clipboard unavailable; message not copied");
      return false;
    }
    try {
      await target.writeText(this.value);
      return true;
    } catch (err) {
      console.warn("clipboard write failed", err);
      return false;
    }
  }
}
