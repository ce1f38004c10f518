"use strict";
/** Newline-delimited JSON stream handling for the metrics channel. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.NdjsonBuffer = void 0;
exports.followMetrics = followMetrics;
/** Accumulates text chunks and emits complete JSON lines as frames. */
class NdjsonBuffer {
    constructor() {
        this.tail = "";
    }
    push(chunk) {
        this.tail += chunk;
        const pieces = this.tail.split("\n");
        this.tail = pieces.pop() ?? "";
        const frames = [];
        for (const piece of pieces) {
            const line = piece.trim();
            if (!line)
                continue;
            frames.push(JSON.parse(line));
        }
        return frames;
    }
}
exports.NdjsonBuffer = NdjsonBuffer;
/**
 * Follow a session's metrics stream, invoking onFrame per frame. The server
 * ends the stream on reset; onEnd lets the caller resubscribe.
 */
async function followMetrics(baseUrl, sessionId, onFrame, onEnd, fetchFn = fetch) {
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
        if (done)
            break;
        for (const frame of buffer.push(decoder.decode(value, { stream: true }))) {
            onFrame(frame);
        }
    }
    onEnd();
}
