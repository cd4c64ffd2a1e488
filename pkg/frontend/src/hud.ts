/** HUD text derives exclusively from received METRICS payloads; the
 * console never computes rates or pixels itself. */
import type { PipelineMetrics, StreamMetrics } from "./types.js";

export interface HudRow {
  stream: string;
  capture: string;
  detection: string;
  composite: string;
  latencyP95: string;
  dropped: string;
}

const fps = (v: number) => v.toFixed(1);

export function hudRow(stream: string, m: StreamMetrics): HudRow {
  const droppedTotal =
    m.stages.capture.dropped + m.stages.composite.dropped + m.stages.detect.dropped;
  return {
    stream,
    capture: fps(m.capture_fps),
    detection: fps(m.detection_fps),
    composite: fps(m.composite_fps),
    latencyP95: `${m.e2e_latency_ms.p95.toFixed(1)} ms`,
    dropped: String(droppedTotal),
  };
}

export function hudRows(metrics: PipelineMetrics): HudRow[] {
  return Object.keys(metrics.streams)
    .sort()
    .map((name) => hudRow(name, metrics.streams[name]!));
}

export function clientDropsLine(metrics: PipelineMetrics): string {
  return `clients ${metrics.clients.active} / client drops ${metrics.clients.dropped_parts}`;
}
