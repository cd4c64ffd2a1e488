/** DOM layer: stream panes with drag/resize/overlay controls, the
 * metrics HUD, and the connection banner with backoff reconnect.
 *
 * Every pixel shown comes from /stream parts and every HUD number from
 * /meta; this module only positions elements and relays layout edits
 * back to the server on gesture end. */
import { fetchLayout, fetchStreams, metaMessages, putLayout, streamUrl } from "./api.js";
import { Backoff } from "./backoff.js";
import { clientDropsLine, hudRows } from "./hud.js";
import {
  bringToFront,
  movePane,
  replacePane,
  resizePane,
  validateLayout,
} from "./layout.js";
import type { MetaMessage, Pane, PaneLayout, PipelineMetrics } from "./types.js";

type GestureKind = "move" | "resize";

interface Gesture {
  kind: GestureKind;
  paneId: string;
  startX: number;
  startY: number;
  original: Pane;
}

export class OperatorConsole {
  private layout: PaneLayout = { panes: [] };
  private latestMetrics: PipelineMetrics | null = null;
  private gesture: Gesture | null = null;
  private metaAbort: AbortController | null = null;
  private backoff = new Backoff();
  private stopped = false;

  private viewport: HTMLElement;
  private banner: HTMLElement;
  private hud: HTMLElement;
  private toast: HTMLElement;

  constructor(private root: HTMLElement, private base: string) {
    this.viewport = this.mount("div", "viewport");
    this.banner = this.mount("div", "banner hidden");
    this.hud = this.mount("div", "hud");
    this.toast = this.mount("div", "toast hidden");
    window.addEventListener("pointermove", (e) => this.onPointerMove(e));
    window.addEventListener("pointerup", () => this.onPointerUp());
  }

  private mount(tag: string, className: string): HTMLElement {
    const el = document.createElement(tag);
    el.className = className;
    this.root.appendChild(el);
    return el;
  }

  /** Fetch /streams and /layout, render panes, then follow /meta. */
  async connect(): Promise<void> {
    while (!this.stopped) {
      try {
        await fetchStreams(this.base); // reachability probe, panes come from layout
        this.layout = await fetchLayout(this.base);
        this.setDisconnected(false);
        this.backoff.reset();
        this.renderPanes();
        await this.followMeta(); // returns only when the connection drops
      } catch {
        // fall through to reconnect
      }
      if (this.stopped) return;
      this.setDisconnected(true);
      await new Promise((r) => setTimeout(r, this.backoff.next()));
    }
  }

  stop(): void {
    this.stopped = true;
    this.metaAbort?.abort();
  }

  private async followMeta(): Promise<void> {
    this.metaAbort = new AbortController();
    for await (const msg of metaMessages(this.base, this.metaAbort.signal)) {
      this.onMeta(msg);
    }
    throw new Error("meta channel closed");
  }

  private onMeta(msg: MetaMessage): void {
    if (msg.kind === "METRICS") {
      this.latestMetrics = msg.payload;
      this.renderHud();
    }
  }

  // -- rendering -------------------------------------------------------------

  private setDisconnected(disconnected: boolean): void {
    this.banner.textContent = disconnected
      ? "DISCONNECTED - retrying"
      : "";
    this.banner.classList.toggle("hidden", !disconnected);
  }

  private renderPanes(): void {
    this.viewport.textContent = "";
    for (const pane of this.layout.panes) {
      this.viewport.appendChild(this.paneElement(pane));
    }
  }

  private paneElement(pane: Pane): HTMLElement {
    const el = document.createElement("div");
    el.className = "pane";
    el.dataset.paneId = pane.pane_id;
    this.applyGeometry(el, pane);

    const bar = document.createElement("div");
    bar.className = "pane-bar";
    bar.textContent = pane.stream;
    bar.addEventListener("pointerdown", (e) => this.beginGesture(e, pane.pane_id, "move"));

    const toggle = document.createElement("label");
    toggle.className = "overlay-toggle";
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = pane.overlay_enabled;
    checkbox.addEventListener("change", () => this.toggleOverlay(pane.pane_id, checkbox.checked));
    toggle.append(checkbox, document.createTextNode("overlay"));
    bar.appendChild(toggle);

    const img = document.createElement("img");
    img.className = "pane-video";
    img.alt = pane.stream;
    img.src = streamUrl(this.base, pane.stream, pane.overlay_enabled);
    img.draggable = false;

    const grip = document.createElement("div");
    grip.className = "pane-grip";
    grip.addEventListener("pointerdown", (e) => this.beginGesture(e, pane.pane_id, "resize"));

    el.append(bar, img, grip);
    el.addEventListener("pointerdown", () => this.raise(pane.pane_id));
    if (!pane.visible) el.classList.add("hidden");
    return el;
  }

  private applyGeometry(el: HTMLElement, pane: Pane): void {
    el.style.left = `${pane.x * 100}%`;
    el.style.top = `${pane.y * 100}%`;
    el.style.width = `${pane.w * 100}%`;
    el.style.height = `${pane.h * 100}%`;
    el.style.zIndex = String(pane.z);
  }

  private renderHud(): void {
    if (!this.latestMetrics) return;
    const rows = hudRows(this.latestMetrics)
      .map(
        (r) =>
          `<tr><td>${r.stream}</td><td>${r.capture}</td><td>${r.detection}</td>` +
          `<td>${r.composite}</td><td>${r.latencyP95}</td><td>${r.dropped}</td></tr>`
      )
      .join("");
    this.hud.innerHTML =
      "<table><tr><th>stream</th><th>cap fps</th><th>det fps</th>" +
      `<th>comp fps</th><th>p95</th><th>drops</th></tr>${rows}</table>` +
      `<div class="hud-clients">${clientDropsLine(this.latestMetrics)}</div>`;
  }

  // -- gestures ----------------------------------------------------------------

  private beginGesture(e: PointerEvent, paneId: string, kind: GestureKind): void {
    const pane = this.layout.panes.find((p) => p.pane_id === paneId);
    if (!pane) return;
    e.preventDefault();
    e.stopPropagation();
    this.gesture = {
      kind,
      paneId,
      startX: e.clientX,
      startY: e.clientY,
      original: pane,
    };
  }

  private onPointerMove(e: PointerEvent): void {
    if (!this.gesture) return;
    const { kind, paneId, startX, startY, original } = this.gesture;
    const rect = this.viewport.getBoundingClientRect();
    const dx = (e.clientX - startX) / rect.width;
    const dy = (e.clientY - startY) / rect.height;
    const updated =
      kind === "move" ? movePane(original, dx, dy) : resizePane(original, dx, dy);
    this.layout = replacePane(this.layout, updated);
    const el = this.viewport.querySelector<HTMLElement>(
      `[data-pane-id="${paneId}"]`
    );
    if (el) this.applyGeometry(el, updated);
  }

  private onPointerUp(): void {
    if (!this.gesture) return;
    this.gesture = null;
    void this.persistLayout();
  }

  private raise(paneId: string): void {
    this.layout = bringToFront(this.layout, paneId);
    for (const pane of this.layout.panes) {
      const el = this.viewport.querySelector<HTMLElement>(
        `[data-pane-id="${pane.pane_id}"]`
      );
      if (el) el.style.zIndex = String(pane.z);
    }
    void this.persistLayout();
  }

  private toggleOverlay(paneId: string, enabled: boolean): void {
    const pane = this.layout.panes.find((p) => p.pane_id === paneId);
    if (!pane) return;
    const updated = { ...pane, overlay_enabled: enabled };
    this.layout = replacePane(this.layout, updated);
    const img = this.viewport.querySelector<HTMLImageElement>(
      `[data-pane-id="${paneId}"] .pane-video`
    );
    if (img) img.src = streamUrl(this.base, updated.stream, enabled);
    void this.persistLayout();
  }

  private async persistLayout(): Promise<void> {
    const problem = validateLayout(this.layout);
    if (problem) {
      this.showToast(`layout invalid: ${problem}`);
      return;
    }
    try {
      await putLayout(this.base, this.layout);
    } catch (err) {
      // keep the local arrangement for retry on the next gesture
      this.showToast(`layout save failed: ${(err as Error).message}`);
    }
  }

  private showToast(message: string): void {
    this.toast.textContent = message;
    this.toast.classList.remove("hidden");
    setTimeout(() => this.toast.classList.add("hidden"), 4000);
  }
}
