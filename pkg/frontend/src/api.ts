/** Thin fetch wrappers over the ground station's HTTP contract. */
import { NdjsonParser } from "./ndjson.js";
import type { MetaMessage, PaneLayout } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(base: string, path: string): Promise<T> {
  const r = await fetch(base + path);
  if (!r.ok) throw new ApiError(r.status, `${path}: HTTP ${r.status}`);
  return (await r.json()) as T;
}

export function fetchStreams(base: string): Promise<string[]> {
  return getJson(base, "/streams");
}

export function fetchLayout(base: string): Promise<PaneLayout> {
  return getJson(base, "/layout");
}

export async function putLayout(base: string, layout: PaneLayout): Promise<PaneLayout> {
  const r = await fetch(`${base}/layout`, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(layout),
  });
  const body = await r.json();
  if (!r.ok) throw new ApiError(r.status, body.error ?? `HTTP ${r.status}`);
  return body as PaneLayout;
}

export function streamUrl(
  base: string,
  stream: string,
  overlay: boolean,
  codec: "jpeg" | "png" = "jpeg"
): string {
  return `${base}/stream/${stream}?codec=${codec}&overlay=${overlay ? "on" : "off"}`;
}

/** Consume /meta as a long-lived NDJSON stream; yields messages until
 * the connection drops (then throws) or the signal aborts. */
export async function* metaMessages(
  base: string,
  signal?: AbortSignal
): AsyncGenerator<MetaMessage> {
  const r = await fetch(`${base}/meta`, { signal });
  if (!r.ok || !r.body) throw new ApiError(r.status, `/meta: HTTP ${r.status}`);
  const reader = r.body.getReader();
  const decoder = new TextDecoder();
  const parser = new NdjsonParser<MetaMessage>();
  while (true) {
    const { done, value } = await reader.read();
    if (done) break;
    for (const msg of parser.push(decoder.decode(value, { stream: true }))) {
      yield msg;
    }
  }
}
