/**
 * Webcam frame capture.  Draws the current video frame onto a scratch
 * canvas downscaled to the upload width, grayscales it in place, and
 * encodes a PNG for the service.
 */

import { grayscaleInPlace } from "./grayscale.js";

/** Default upload width in pixels; height follows the camera's aspect. */
export const DEFAULT_UPLOAD_WIDTH = 320;

export interface CapturedFrame {
  blob: Blob;
  width: number;
  height: number;
}

/**
 * Capture one grayscale PNG from the video element.  Returns null while the
 * camera has no frame to give yet (readyState below HAVE_CURRENT_DATA) or if
 * encoding fails.
 */
export async function captureGrayFrame(
  video: HTMLVideoElement,
  scratch: HTMLCanvasElement,
  targetWidth: number = DEFAULT_UPLOAD_WIDTH,
): Promise<CapturedFrame | null> {
  if (video.readyState < 2 || !video.videoWidth || !video.videoHeight) {
    return null;
  }
  const width = targetWidth;
  const height = Math.max(1, Math.round((video.videoHeight * width) / video.videoWidth));
  scratch.width = width;
  scratch.height = height;
  const ctx = scratch.getContext("2d", { willReadFrequently: true });
  if (!ctx) {
    console.warn("2d canvas context unavailable");
    return null;
  }
  ctx.drawImage(video, 0, 0, width, height);
  const imageData = ctx.getImageData(0, 0, width, height);
  grayscaleInPlace(imageData.data);
  ctx.putImageData(imageData, 0, 0);
  const blob = await new Promise<Blob | null>((resolve) =>
    scratch.toBlob(resolve, "image/png"),
  );
  if (!blob) {
    console.warn("canvas PNG encoding failed");
    return null;
  }
  return { blob, width, height };
}
