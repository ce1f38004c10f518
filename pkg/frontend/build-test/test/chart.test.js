"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const chart_js_1 = require("../src/chart.js");
function frame(step, g) {
    return {
        step,
        train_loss: 1 / (step + 1),
        test_loss: 1.2 / (step + 1),
        accuracy: 0.5,
        acc_positive: 0.5,
        acc_negative: 0.5,
        mec_bits: 12,
        demand_bits: 6,
        generalization: g,
        balance: 0.5,
        bias_flagged: false,
    };
}
(0, node_test_1.test)("a 500-frame run yields a strictly increasing step axis", () => {
    const frames = Array.from({ length: 500 }, (_, i) => frame(i * 5, i / 100));
    const model = (0, chart_js_1.buildChartModel)(frames);
    strict_1.default.equal(model.steps.length, 500);
    for (let i = 1; i < model.steps.length; i++) {
        strict_1.default.ok(model.steps[i] > model.steps[i - 1]);
    }
    strict_1.default.deepEqual(model.xDomain, [0, 499 * 5]);
    strict_1.default.equal(model.trainLoss.length, 500);
    strict_1.default.equal(model.generalization.length, 500);
});
(0, node_test_1.test)("duplicate and out-of-order steps are dropped, not plotted", () => {
    const frames = [frame(0, 0.1), frame(10, 0.2), frame(10, 0.3), frame(5, 0.4), frame(20, 0.5)];
    const model = (0, chart_js_1.buildChartModel)(frames);
    strict_1.default.deepEqual(model.steps, [0, 10, 20]);
});
(0, node_test_1.test)("the G = 1 threshold annotation is always present", () => {
    const model = (0, chart_js_1.buildChartModel)([frame(0, 0.2), frame(10, 2.0)]);
    const thresholds = model.annotations.filter((a) => a.kind === "threshold");
    strict_1.default.equal(thresholds.length, 1);
    strict_1.default.equal(thresholds[0].value, 1);
    strict_1.default.match(thresholds[0].label, /no generalization/);
    strict_1.default.equal(thresholds[0], chart_js_1.G_THRESHOLD);
    // G axis always spans the threshold so the line is visible
    strict_1.default.ok(model.gDomain[0] <= 1 && 1 <= model.gDomain[1]);
});
(0, node_test_1.test)("empty input still yields a drawable model", () => {
    const model = (0, chart_js_1.buildChartModel)([]);
    strict_1.default.deepEqual(model.steps, []);
    strict_1.default.equal(model.annotations.length, 1);
    strict_1.default.ok(model.xDomain[1] > model.xDomain[0]);
});
