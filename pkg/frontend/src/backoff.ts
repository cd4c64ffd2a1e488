/** Reconnect pacing: 1 s, 2 s, 4 s, then capped at 8 s. */

export const BASE_DELAY_MS = 1000;
export const MAX_DELAY_MS = 8000;

export function reconnectDelayMs(attempt: number): number {
  if (attempt <= 0) return BASE_DELAY_MS;
  return Math.min(BASE_DELAY_MS * 2 ** attempt, MAX_DELAY_MS);
}

export class Backoff {
  private attempt = 0;

  next(): number {
    return reconnectDelayMs(this.attempt++);
  }

  reset(): void {
    this.attempt = 0;
  }
}
