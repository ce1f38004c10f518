"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const stream_js_1 = require("../src/stream.js");
(0, node_test_1.test)("frames split across chunks are reassembled", () => {
    const buffer = new stream_js_1.NdjsonBuffer();
    const line = JSON.stringify({ step: 1, train_loss: 0.5 });
    const first = buffer.push(line.slice(0, 10));
    strict_1.default.equal(first.length, 0);
    const second = buffer.push(line.slice(10) + "\n");
    strict_1.default.equal(second.length, 1);
    strict_1.default.equal(second[0].step, 1);
});
(0, node_test_1.test)("multiple lines in one chunk all emit", () => {
    const buffer = new stream_js_1.NdjsonBuffer();
    const chunk = JSON.stringify({ step: 1 }) + "\n" + JSON.stringify({ step: 2 }) + "\n" + '{"step": 3';
    const frames = buffer.push(chunk);
    strict_1.default.deepEqual(frames.map((f) => f.step), [1, 2]);
    const rest = buffer.push('}\n');
    strict_1.default.deepEqual(rest.map((f) => f.step), [3]);
});
(0, node_test_1.test)("blank keep-alive lines are skipped", () => {
    const buffer = new stream_js_1.NdjsonBuffer();
    strict_1.default.deepEqual(buffer.push("\n\n"), []);
});
