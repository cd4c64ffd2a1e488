import { describe, expect, it } from "vitest";

import {
  MIN_PANE_SIZE,
  bringToFront,
  movePane,
  replacePane,
  resizePane,
  validateLayout,
} from "../src/layout.js";
import type { Pane, PaneLayout } from "../src/types.js";

const pane = (overrides: Partial<Pane> = {}): Pane => ({
  pane_id: "fpv",
  stream: "FPV",
  x: 0.05,
  y: 0.1,
  w: 0.55,
  h: 0.8,
  z: 0,
  visible: true,
  overlay_enabled: true,
  ...overrides,
});

describe("movePane", () => {
  it("translates within the viewport", () => {
    const moved = movePane(pane(), 0.05, 0.05);
    expect(moved.x).toBeCloseTo(0.1, 10);
    expect(moved.y).toBeCloseTo(0.15, 10);
  });

  it("clamps to the viewport edges", () => {
    const moved = movePane(pane(), 10, -10);
    expect(moved.x).toBeCloseTo(1 - moved.w, 10);
    expect(moved.y).toBe(0);
  });

  it("keeps size untouched", () => {
    const moved = movePane(pane(), 0.3, 0.3);
    expect(moved.w).toBe(0.55);
    expect(moved.h).toBe(0.8);
  });
});

describe("resizePane", () => {
  it("grows from the corner up to the viewport bounds", () => {
    const grown = resizePane(pane(), 10, 10);
    expect(grown.w).toBeCloseTo(1 - grown.x, 10);
    expect(grown.h).toBeCloseTo(1 - grown.y, 10);
  });

  it("clamps below the minimum pane size", () => {
    const shrunk = resizePane(pane(), -10, -10);
    expect(shrunk.w).toBe(MIN_PANE_SIZE);
    expect(shrunk.h).toBe(MIN_PANE_SIZE);
  });
});

describe("bringToFront", () => {
  it("raises above every other pane", () => {
    const layout: PaneLayout = {
      panes: [pane(), pane({ pane_id: "bottom", stream: "BOTTOM", z: 7 })],
    };
    const raised = bringToFront(layout, "fpv");
    const fpv = raised.panes.find((p) => p.pane_id === "fpv")!;
    expect(fpv.z).toBe(8);
  });
});

describe("validateLayout", () => {
  it("accepts the default layout shape", () => {
    const layout: PaneLayout = {
      panes: [pane(), pane({ pane_id: "bottom", stream: "BOTTOM", x: 0.65, y: 0.3, w: 0.3, h: 0.4 })],
    };
    expect(validateLayout(layout)).toBeNull();
  });

  it("rejects duplicates, zero sizes and out-of-viewport panes", () => {
    expect(
      validateLayout({ panes: [pane(), pane({ stream: "BOTTOM" })] })
    ).toMatch(/duplicate/);
    expect(validateLayout({ panes: [pane({ w: 0 })] })).toMatch(/> 0/);
    expect(validateLayout({ panes: [pane({ x: 0.9 })] })).toMatch(/viewport/);
  });

  it("gesture results always validate", () => {
    let p = pane();
    for (const [dx, dy] of [[5, 5], [-5, -5], [0.3, -0.2]] as const) {
      p = movePane(p, dx, dy);
      p = resizePane(p, dy, dx);
      expect(validateLayout({ panes: [p] })).toBeNull();
    }
  });
});

describe("replacePane", () => {
  it("swaps by pane_id", () => {
    const layout: PaneLayout = { panes: [pane()] };
    const next = replacePane(layout, pane({ x: 0.2 }));
    expect(next.panes[0]!.x).toBe(0.2);
  });
});
