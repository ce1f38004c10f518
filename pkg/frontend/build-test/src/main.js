"use strict";
/** Application bootstrap: one session, one stream, render on store changes. */
Object.defineProperty(exports, "__esModule", { value: true });
const api_js_1 = require("./api.js");
const chart_js_1 = require("./chart.js");
const controller_js_1 = require("./controller.js");
const netview_js_1 = require("./netview.js");
const state_js_1 = require("./state.js");
const stream_js_1 = require("./stream.js");
const types_js_1 = require("./types.js");
const FEATURES = ["x1", "x2", "x1^2", "x2^2", "x1*x2", "sin(x1)", "sin(x2)"];
const API_BASE = "";
function el(id) {
    const found = document.getElementById(id);
    if (!found)
        throw new Error(`missing element #${id}`);
    return found;
}
function fmt(value, digits = 2) {
    return value.toFixed(digits);
}
async function boot() {
    const api = new api_js_1.ApiClient(API_BASE);
    const store = new state_js_1.ViewStore();
    const descriptor = await api.createSession({
        schema_version: 1,
        dataset: { kind: "circle", n: 300, noise: 0.0, seed: 7 },
    });
    const controller = new controller_js_1.SessionController(api, store, descriptor.session_id);
    store.applyDescriptor(descriptor);
    const netCanvas = el("network");
    const chartCanvas = el("chart");
    const view = new netview_js_1.NetworkView(netCanvas, controller);
    let weights = new Map();
    let heatmaps = null;
    async function refreshHeatmaps() {
        try {
            const payload = await api.heatmaps(controller.sessionId, 25);
            heatmaps = payload.nodes;
        }
        catch {
            heatmaps = null;
        }
    }
    function weightOf(source, target) {
        return weights.get(`${(0, types_js_1.nodeKey)(source)}>${(0, types_js_1.nodeKey)(target)}`) ?? null;
    }
    async function refreshWeights() {
        const record = (await api.exportSession(controller.sessionId));
        weights = new Map((record.params?.weights ?? []).map(([s, t, w]) => [`${(0, types_js_1.nodeKey)(s)}>${(0, types_js_1.nodeKey)(t)}`, w]));
    }
    function renderMeasurements() {
        const m = store.measurements;
        if (!m)
            return;
        el("mec").textContent = `${m.mec_bits} bits`;
        el("demand").textContent = `${m.demand_bits} bits`;
        el("generalization").textContent = fmt(m.generalization);
        el("balance").textContent = fmt(m.balance);
        const badge = el("bias-badge");
        badge.hidden = !m.bias_flagged;
        badge.title = m.bias_detail ?? "";
        el("acc-pos-bar").style.width = `${Math.round(m.acc_positive * 100)}%`;
        el("acc-neg-bar").style.width = `${Math.round(m.acc_negative * 100)}%`;
        el("acc-pos-label").textContent = fmt(m.acc_positive);
        el("acc-neg-label").textContent = fmt(m.acc_negative);
        const frame = store.latestFrame;
        el("step").textContent = String(frame?.step ?? store.descriptor?.step ?? 0);
        el("accuracy").textContent = frame ? fmt(frame.accuracy) : "-";
        const error = el("error");
        error.textContent = store.errorMessage ?? "";
        error.hidden = !store.errorMessage;
    }
    function renderAll() {
        renderMeasurements();
        const topology = store.displayTopology();
        if (topology)
            view.render(topology, weightOf, heatmaps);
        (0, chart_js_1.renderChart)(chartCanvas, (0, chart_js_1.buildChartModel)(store.history));
    }
    store.subscribe(renderAll);
    function streamLoop() {
        void (0, stream_js_1.followMetrics)(API_BASE, controller.sessionId, (frame) => store.pushFrame(frame), () => setTimeout(streamLoop, 300));
    }
    streamLoop();
    setInterval(() => {
        void refreshWeights().then(refreshHeatmaps).then(renderAll);
    }, 1500);
    // controls
    el("btn-start").onclick = () => void controller.control("start");
    el("btn-pause").onclick = () => void controller.control("pause");
    el("btn-step").onclick = () => void controller.control("step", 10);
    el("btn-reset").onclick = () => void controller.control("reset");
    const featureBoxes = el("features");
    for (const feature of FEATURES) {
        const label = document.createElement("label");
        const box = document.createElement("input");
        box.type = "checkbox";
        box.checked = descriptor.topology.features.includes(feature);
        box.onchange = () => {
            const chosen = Array.from(featureBoxes.querySelectorAll("input:checked")).map((input) => input.dataset.feature ?? "");
            void controller.setFeatures(chosen.filter(Boolean));
        };
        box.dataset.feature = feature;
        label.append(box, feature);
        featureBoxes.append(label);
    }
    el("csv-upload").onchange = async (event) => {
        const input = event.target;
        const file = input.files?.[0];
        if (!file)
            return;
        try {
            await controller.uploadCsv(await file.text());
        }
        catch (err) {
            store.revertEdit(String(err));
        }
        input.value = "";
    };
    await refreshWeights();
    await refreshHeatmaps();
    renderAll();
}
void boot();
