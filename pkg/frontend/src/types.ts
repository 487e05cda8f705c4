/**
 * Wire types for the fingerspell service's /v1 endpoints, plus the UI's own
 * session state.  Field names match the service JSON exactly; the UI never
 * derives letters or geometry on its own, it only renders what these
 * documents carry.
 */

/** An (x, y) pixel coordinate in the coordinates of the uploaded frame. */
export type Point = [number, number];

/**
 * One convexity defect: the hull chord it hangs from (start/end), the
 * deepest contour point between them (far), and that point's distance from
 * the chord in pixels.
 */
export interface DefectPoint {
  start: Point;
  end: Point;
  far: Point;
  depth: number;
}

/** Everything the service drew its decision from, ready to render. */
export interface OverlayData {
  contour: Point[];
  hull: Point[];
  defects: DefectPoint[];
}

/** Shape descriptors the service computed for the frame, if a hand was found. */
export interface FrameFeatures {
  area: number;
  perimeter: number;
  solidity: number;
  aspect_ratio: number;
  orientation_deg: number;
  equiv_diameter: number;
  bounding_rect: number[];
  defect_count: number;
  centroid: number[];
}

/** Per-session counters returned with each frame and on session delete. */
export interface SessionMetrics {
  frames_processed: number;
  recognitions_emitted: number;
  elapsed_to_first_emit: number | null;
  a_o: number | null;
}

/** Response body for /v1/recognize and /v1/sessions/{id}/frames. */
export interface FrameResponse {
  schema_version: number;
  letter: string;
  rule_id: string;
  defect_count: number;
  angle_deg: number;
  features: FrameFeatures | null;
  overlay: OverlayData;
  timings: Record<string, number>;
  /** Present only on session frames, and only when the debouncer fires. */
  stable_letter?: string;
  /** Present only on session frames. */
  metrics?: SessionMetrics;
}

/** Response body for /v1/healthz. */
export interface ServiceInfo {
  status: string;
  version: string;
}

/**
 * Snapshot of the UI's live state: which service session frames go to, how
 * fast we capture, what the signer has spelled so far, and what we last got
 * back.  The message text only ever grows through stable_letter events.
 */
export interface UiSessionState {
  sessionId: string | null;
  /** Capture rate in frames per second; always within [1, 15]. */
  captureRate: number;
  message: string;
  lastOverlay: OverlayData | null;
  muted: boolean;
}
