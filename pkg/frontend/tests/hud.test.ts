import { describe, expect, it } from "vitest";

import { clientDropsLine, hudRow, hudRows } from "../src/hud.js";
import type { PipelineMetrics, StreamMetrics } from "../src/types.js";

const stream = (overrides: Partial<StreamMetrics> = {}): StreamMetrics => ({
  capture_fps: 30.04,
  composite_fps: 29.96,
  detection_fps: 23.5,
  e2e_latency_ms: { p50: 2.1, p95: 3.456 },
  stages: {
    capture: { in: 300, out: 300, dropped: 0 },
    composite: { in: 300, out: 298, dropped: 2 },
    detect: { in: 300, out: 290, dropped: 10 },
  },
  detector_skipped: 10,
  ...overrides,
});

describe("hudRow", () => {
  it("is a pure pass-through of the METRICS payload", () => {
    const row = hudRow("FPV", stream());
    expect(row).toEqual({
      stream: "FPV",
      capture: "30.0",
      detection: "23.5",
      composite: "30.0",
      latencyP95: "3.5 ms",
      dropped: "12",
    });
  });
});

describe("hudRows", () => {
  it("orders streams deterministically", () => {
    const metrics: PipelineMetrics = {
      window_s: 10,
      streams: { FPV: stream(), BOTTOM: stream({ detection_fps: 0 }) },
      clients: { active: 2, dropped_parts: 5 },
    };
    expect(hudRows(metrics).map((r) => r.stream)).toEqual(["BOTTOM", "FPV"]);
    expect(clientDropsLine(metrics)).toBe("clients 2 / client drops 5");
  });
});
