/**
 * Client-side grayscale conversion.  Frames are converted before upload so
 * payloads stay small and so the luma formula is pinned to the one the
 * recognizer documents: 0.299 R + 0.587 G + 0.114 B, rounded half-up.
 * After conversion every channel of a pixel carries the same value, so the
 * service decodes exactly the bytes computed here.
 */

/** Luma of one pixel, rounded half-up to an integer in [0, 255]. */
export function lumaByte(r: number, g: number, b: number): number {
  const value = Math.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
  return Math.min(255, Math.max(0, value));
}

/**
 * Convert RGBA pixel data to grayscale in place.  Alpha is left untouched;
 * camera frames are opaque so it plays no role in the uploaded image.
 */
export function grayscaleInPlace(data: Uint8ClampedArray): void {
  for (let i = 0; i + 2 < data.length; i += 4) {
    const y = lumaByte(data[i]!, data[i + 1]!, data[i + 2]!);
    data[i] = y;
    data[i + 1] = y;
    data[i + 2] = y;
  }
}
