"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const api_js_1 = require("../src/api.js");
const controller_js_1 = require("../src/controller.js");
const state_js_1 = require("../src/state.js");
function measurements(overrides = {}) {
    return {
        mec_bits: 19,
        demand_bits: 6,
        generalization: 2.5,
        balance: 0.5,
        bias_flagged: false,
        acc_positive: 0.9,
        acc_negative: 0.9,
        bias_detail: "",
        ...overrides,
    };
}
function topology() {
    return {
        features: ["x1", "x2"],
        hidden: [2],
        activation: "tanh",
        edges: [
            ["x1", [1, 0], true],
            ["x1", [1, 1], true],
            ["x2", [1, 0], true],
            ["x2", [1, 1], true],
            [[1, 0], [2, 0], true],
            [[1, 1], [2, 0], true],
        ],
    };
}
function descriptor(overrides = {}) {
    return {
        schema_version: 1,
        session_id: "s1",
        state: "idle",
        step: 0,
        created_at: "now",
        topology: topology(),
        config: {},
        dataset: { source: "circle", n: 100, noise: 0, seed: 1, train_fraction: 0.5 },
        measurements: measurements(),
        ...overrides,
    };
}
/** fetch stub returning canned JSON responses per (method, path-suffix). */
function fakeFetch(routes) {
    return (async (input, init) => {
        const url = String(input);
        const method = init?.method ?? "GET";
        for (const [route, payload] of Object.entries(routes)) {
            const [routeMethod, suffix] = route.split(" ");
            if (method === routeMethod && url.endsWith(suffix)) {
                if (payload instanceof Error) {
                    return new Response(JSON.stringify({ detail: payload.message }), { status: 422 });
                }
                return new Response(JSON.stringify(payload), { status: 200 });
            }
        }
        return new Response(JSON.stringify({ detail: `no route for ${method} ${url}` }), {
            status: 404,
        });
    });
}
(0, node_test_1.test)("displayed capacity comes from the patch response, never local math", async () => {
    const store = new state_js_1.ViewStore();
    store.applyDescriptor(descriptor());
    // Server says toggling this link leaves 17 bits; the client must show
    // exactly that number regardless of what it believed before.
    const patched = descriptor({ measurements: measurements({ mec_bits: 17 }) });
    const api = new api_js_1.ApiClient("http://test", fakeFetch({
        "PATCH /sessions/s1/topology": {
            descriptor: patched,
            measurements: patched.measurements,
        },
    }));
    const controller = new controller_js_1.SessionController(api, store, "s1");
    await controller.toggleEdge([1, 0], [2, 0]);
    strict_1.default.equal(store.measurements?.mec_bits, 17);
    strict_1.default.equal(store.pendingEdit, null);
});
(0, node_test_1.test)("unchecking a feature displays the server's recomputed demand", async () => {
    const store = new state_js_1.ViewStore();
    store.applyDescriptor(descriptor());
    const narrowed = descriptor({
        topology: { ...topology(), features: ["x1"] },
        measurements: measurements({ demand_bits: 4, mec_bits: 13 }),
    });
    const api = new api_js_1.ApiClient("http://test", fakeFetch({
        "PATCH /sessions/s1/topology": {
            descriptor: narrowed,
            measurements: narrowed.measurements,
        },
    }));
    const controller = new controller_js_1.SessionController(api, store, "s1");
    await controller.setFeatures(["x1"]);
    strict_1.default.equal(store.measurements?.demand_bits, 4);
    strict_1.default.equal(store.descriptor?.topology.features.length, 1);
});
(0, node_test_1.test)("optimistic toggle renders immediately and reverts on rejection", async () => {
    const store = new state_js_1.ViewStore();
    store.applyDescriptor(descriptor());
    const api = new api_js_1.ApiClient("http://test", fakeFetch({ "PATCH /sessions/s1/topology": new Error("edit would orphan the output") }));
    const controller = new controller_js_1.SessionController(api, store, "s1");
    const pending = controller.toggleEdge("x1", [1, 0]);
    const optimistic = store.displayTopology();
    const onFlag = optimistic?.edges.find(([s, t]) => s === "x1" && String(t) === "1,0");
    strict_1.default.equal(onFlag?.[2], false); // shown toggled off while in flight
    await pending;
    strict_1.default.equal(store.errorMessage, "edit would orphan the output");
    const settled = store.displayTopology();
    const restored = settled?.edges.find(([s, t]) => s === "x1" && String(t) === "1,0");
    strict_1.default.equal(restored?.[2], true); // reverted to server truth
});
(0, node_test_1.test)("frames advance the displayed measurements and history", () => {
    const store = new state_js_1.ViewStore();
    store.applyDescriptor(descriptor());
    const frame = {
        step: 10,
        train_loss: 0.4,
        test_loss: 0.5,
        accuracy: 0.8,
        acc_positive: 0.9,
        acc_negative: 0.7,
        mec_bits: 19,
        demand_bits: 9,
        generalization: 1.4,
        balance: 0.5,
        bias_flagged: true,
    };
    store.pushFrame(frame);
    strict_1.default.equal(store.measurements?.demand_bits, 9);
    strict_1.default.equal(store.measurements?.bias_flagged, true);
    strict_1.default.equal(store.history.length, 1);
    // stale repeat of the same step is ignored
    store.pushFrame(frame);
    strict_1.default.equal(store.history.length, 1);
});
