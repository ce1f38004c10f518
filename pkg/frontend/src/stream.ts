/** Newline-delimited JSON stream handling for the metrics channel. */

import { MetricsFrame } from "./types.js";

/** Accumulates text chunks and emits complete JSON lines as frames. */
export class NdjsonBuffer {
  private tail = "";

  push(chunk: string): MetricsFrame[] {
    this.tail += chunk;
    const pieces = this.tail.split("\n");
    this.tail = pieces.pop() ?? "";
    const frames: MetricsFrame[] = [];
    for (const piece of pieces) {
      const line = piece.trim();
      if (!line) continue;
      frames.push(JSON.parse(line) as MetricsFrame);
    }
    return frames;
  }
}

/**
 * Follow a session's metrics stream, invoking onFrame per frame. The server
 * ends the stream on reset; onEnd lets the caller resubscribe.
 */
export async function followMetrics(
  baseUrl: string,
  sessionId: string,
  onFrame: (frame: MetricsFrame) => void,
  onEnd: () => void,
  fetchFn: typeof fetch = fetch
): Promise<void> {
  const response = await fetchFn(`${baseUrl}/sessions/${sessionId}/metrics`);
  if (!response.ok || !response.body) {
    onEnd();
    return;
  }
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  const buffer = new NdjsonBuffer();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    for (const frame of buffer.push(decoder.decode(value, { stream: true }))) {
      onFrame(frame);
    }
  }
  onEnd();
}
