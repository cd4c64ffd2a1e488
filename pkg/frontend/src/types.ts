/** Mirrors of the ground station's JSON schemas (docs/http-api.md). */

export type StreamName = "FPV" | "BOTTOM";

export interface Pane {
  pane_id: string;
  stream: StreamName;
  x: number;
  y: number;
  w: number;
  h: number;
  z: number;
  visible: boolean;
  overlay_enabled: boolean;
}

export interface PaneLayout {
  panes: Pane[];
}

export interface StageCounts {
  in: number;
  out: number;
  dropped: number;
}

export interface StreamMetrics {
  capture_fps: number;
  composite_fps: number;
  detection_fps: number;
  e2e_latency_ms: { p50: number; p95: number };
  stages: { capture: StageCounts; composite: StageCounts; detect: StageCounts };
  detector_skipped: number;
}

export interface PipelineMetrics {
  window_s: number;
  streams: Record<string, StreamMetrics>;
  clients: { active: number; dropped_parts: number };
}

export interface DetectionBox {
  class_id: number;
  confidence: number;
  box: { x: number; y: number; w: number; h: number };
}

export interface DetectionsPayload {
  stream: StreamName;
  source_seq: number;
  produced_ts_ns: number;
  inference_latency_ns: number;
  detections: DetectionBox[];
}

export type MetaMessage =
  | { kind: "METRICS"; ts_ns: number; payload: PipelineMetrics }
  | { kind: "DETECTIONS"; ts_ns: number; payload: DetectionsPayload };
