/** Pane geometry: viewport-normalized moves/resizes and the validation
 * the server applies, re-checked client-side so we never PUT an invalid
 * layout. All coordinates live in [0,1]; panes may never leave the
 * viewport or shrink below MIN_PANE_SIZE. */
import type { Pane, PaneLayout } from "./types.js";

export const MIN_PANE_SIZE = 0.1;

const clamp = (v: number, lo: number, hi: number) =>
  Math.min(Math.max(v, lo), hi);

/** Translate a pane, clamped so it stays fully inside the viewport. */
export function movePane(pane: Pane, dx: number, dy: number): Pane {
  const x = clamp(pane.x + dx, 0, 1 - pane.w);
  const y = clamp(pane.y + dy, 0, 1 - pane.h);
  return { ...pane, x, y };
}

/** Resize from the bottom-right corner, clamped to the minimum size and
 * the viewport. */
export function resizePane(pane: Pane, dw: number, dh: number): Pane {
  const w = clamp(pane.w + dw, MIN_PANE_SIZE, 1 - pane.x);
  const h = clamp(pane.h + dh, MIN_PANE_SIZE, 1 - pane.y);
  return { ...pane, w, h };
}

/** Raise a pane above every other pane. */
export function bringToFront(layout: PaneLayout, paneId: string): PaneLayout {
  const top = Math.max(0, ...layout.panes.map((p) => p.z));
  return {
    panes: layout.panes.map((p) =>
      p.pane_id === paneId ? { ...p, z: top + 1 } : p
    ),
  };
}

export function replacePane(layout: PaneLayout, pane: Pane): PaneLayout {
  return {
    panes: layout.panes.map((p) => (p.pane_id === pane.pane_id ? pane : p)),
  };
}

/** The server's invariants; returns a message or null when valid. */
export function validateLayout(layout: PaneLayout): string | null {
  const seen = new Set<string>();
  for (const p of layout.panes) {
    if (!p.pane_id) return "pane_id must be non-empty";
    if (seen.has(p.pane_id)) return `duplicate pane_id ${p.pane_id}`;
    seen.add(p.pane_id);
    if (p.w <= 0 || p.h <= 0) return `pane ${p.pane_id}: w and h must be > 0`;
    if (p.x < 0 || p.y < 0 || p.x + p.w > 1 || p.y + p.h > 1) {
      return `pane ${p.pane_id}: outside the unit viewport`;
    }
    if (!Number.isInteger(p.z)) return `pane ${p.pane_id}: z must be an integer`;
  }
  return null;
}
