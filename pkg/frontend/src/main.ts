/** Application bootstrap: one session, one stream, render on store changes. */

import { ApiClient } from "./api.js";
import { buildChartModel, renderChart } from "./chart.js";
import { SessionController } from "./controller.js";
import { NetworkView } from "./netview.js";
import { ViewStore } from "./state.js";
import { followMetrics } from "./stream.js";
import { NodeRef, nodeKey } from "./types.js";

const FEATURES = ["x1", "x2", "x1^2", "x2^2", "x1*x2", "sin(x1)", "sin(x2)"];
const API_BASE = "";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function fmt(value: number, digits = 2): string {
  return value.toFixed(digits);
}

async function boot(): Promise<void> {
  const api = new ApiClient(API_BASE);
  const store = new ViewStore();
  const descriptor = await api.createSession({
    schema_version: 1,
    dataset: { kind: "circle", n: 300, noise: 0.0, seed: 7 },
  });
  const controller = new SessionController(api, store, descriptor.session_id);
  store.applyDescriptor(descriptor);

  const netCanvas = el<HTMLCanvasElement>("network");
  const chartCanvas = el<HTMLCanvasElement>("chart");
  const view = new NetworkView(netCanvas, controller);

  let weights = new Map<string, number>();
  let heatmaps: Record<string, number[][]> | null = null;

  async function refreshHeatmaps(): Promise<void> {
    try {
      const payload = await api.heatmaps(controller.sessionId, 25);
      heatmaps = payload.nodes;
    } catch {
      heatmaps = null;
    }
  }

  function weightOf(source: NodeRef, target: NodeRef): number | null {
    return weights.get(`${nodeKey(source)}>${nodeKey(target)}`) ?? null;
  }

  async function refreshWeights(): Promise<void> {
    const record = (await api.exportSession(controller.sessionId)) as {
      params?: { weights?: [NodeRef, NodeRef, number][] };
    };
    weights = new Map(
      (record.params?.weights ?? []).map(([s, t, w]) => [`${nodeKey(s)}>${nodeKey(t)}`, w])
    );
  }

  function renderMeasurements(): void {
    const m = store.measurements;
    if (!m) return;
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

  function renderAll(): void {
    renderMeasurements();
    const topology = store.displayTopology();
    if (topology) view.render(topology, weightOf, heatmaps);
    renderChart(chartCanvas, buildChartModel(store.history));
  }

  store.subscribe(renderAll);

  function streamLoop(): void {
    void followMetrics(
      API_BASE,
      controller.sessionId,
      (frame) => store.pushFrame(frame),
      () => setTimeout(streamLoop, 300)
    );
  }
  streamLoop();

  setInterval(() => {
    void refreshWeights().then(refreshHeatmaps).then(renderAll);
  }, 1500);

  // controls
  el<HTMLButtonElement>("btn-start").onclick = () => void controller.control("start");
  el<HTMLButtonElement>("btn-pause").onclick = () => void controller.control("pause");
  el<HTMLButtonElement>("btn-step").onclick = () => void controller.control("step", 10);
  el<HTMLButtonElement>("btn-reset").onclick = () => void controller.control("reset");

  const featureBoxes = el("features");
  for (const feature of FEATURES) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = descriptor.topology.features.includes(feature);
    box.onchange = () => {
      const chosen = Array.from(
        featureBoxes.querySelectorAll<HTMLInputElement>("input:checked")
      ).map((input) => input.dataset.feature ?? "");
      void controller.setFeatures(chosen.filter(Boolean));
    };
    box.dataset.feature = feature;
    label.append(box, feature);
    featureBoxes.append(label);
  }

  el<HTMLInputElement>("csv-upload").onchange = async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      await controller.uploadCsv(await file.text());
    } catch (err) {
      store.revertEdit(String(err));
    }
    input.value = "";
  };

  await refreshWeights();
  await refreshHeatmaps();
  renderAll();
}

void boot();
