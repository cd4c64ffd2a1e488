/** Incremental NDJSON parsing for the /meta push channel: text chunks
 * in, complete JSON objects out; partial trailing lines are buffered. */

export class NdjsonParser<T = unknown> {
  private tail = "";

  push(chunk: string): T[] {
    this.tail += chunk;
    const lines = this.tail.split("\n");
    this.tail = lines.pop() ?? "";
    const out: T[] = [];
    for (const line of lines) {
      const trimmed = line.trim();
      if (trimmed) {
        out.push(JSON.parse(trimmed) as T);
      }
    }
    return out;
  }

  get pending(): number {
    return this.tail.length;
  }
}
