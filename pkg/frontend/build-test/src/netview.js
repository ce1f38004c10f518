"use strict";
/** Interactive network canvas.
 *
 * Edge stroke width scales with |weight| and color encodes its sign;
 * neuron tiles show server-computed output heatmaps over the input square.
 * Clicking an edge toggles it; dragging from a node to a neuron in a later
 * layer requests a skip edge.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.NetworkView = void 0;
const heatmap_js_1 = require("./heatmap.js");
const types_js_1 = require("./types.js");
const POSITIVE = "#2166ac";
const NEGATIVE = "#b2182b";
const DISABLED = "#d0d0d0";
const TILE = 36;
class NetworkView {
    constructor(canvas, controller) {
        this.canvas = canvas;
        this.controller = controller;
        this.placed = [];
        this.edges = [];
        this.dragFrom = null;
        canvas.addEventListener("click", (e) => this.onClick(e));
        canvas.addEventListener("mousedown", (e) => {
            this.dragFrom = this.hitNode(this.eventPoint(e));
        });
        canvas.addEventListener("mouseup", (e) => this.onDrop(e));
    }
    render(topology, weightOf, heatmaps) {
        const ctx = this.canvas.getContext("2d");
        if (!ctx)
            return;
        const { width, height } = this.canvas;
        ctx.clearRect(0, 0, width, height);
        this.layout(topology, width, height);
        this.edges = topology.edges;
        const maxWeight = Math.max(0.1, ...topology.edges.map(([s, t]) => Math.abs(weightOf(s, t) ?? 0)));
        for (const [source, target, enabled] of topology.edges) {
            const a = this.find(source);
            const b = this.find(target);
            if (!a || !b)
                continue;
            const w = weightOf(source, target) ?? 0;
            ctx.strokeStyle = enabled ? (w >= 0 ? POSITIVE : NEGATIVE) : DISABLED;
            ctx.lineWidth = enabled ? 0.5 + 3.5 * (Math.abs(w) / maxWeight) : 1;
            ctx.setLineDash(enabled ? [] : [4, 4]);
            ctx.beginPath();
            ctx.moveTo(a.x + TILE / 2, a.y);
            ctx.lineTo(b.x - TILE / 2, b.y);
            ctx.stroke();
        }
        ctx.setLineDash([]);
        for (const node of this.placed) {
            const key = typeof node.ref === "string" ? node.ref : `${node.ref[0]}.${node.ref[1]}`;
            const grid = heatmaps && typeof node.ref !== "string" ? heatmaps[key] : null;
            ctx.save();
            ctx.translate(node.x - TILE / 2, node.y - TILE / 2);
            if (grid) {
                (0, heatmap_js_1.renderTile)(ctx, grid, TILE);
            }
            else {
                ctx.fillStyle = "#f4f4f4";
                ctx.fillRect(0, 0, TILE, TILE);
            }
            ctx.strokeStyle = "#333";
            ctx.strokeRect(0, 0, TILE, TILE);
            ctx.fillStyle = "#333";
            ctx.font = "9px sans-serif";
            ctx.fillText((0, types_js_1.nodeKey)(node.ref), 1, TILE + 9);
            ctx.restore();
        }
    }
    layout(topology, width, height) {
        const columns = [topology.features.slice()];
        topology.hidden.forEach((w, i) => {
            columns.push(Array.from({ length: w }, (_, j) => [i + 1, j]));
        });
        columns.push([[topology.hidden.length + 1, 0]]);
        this.placed = [];
        columns.forEach((column, c) => {
            const x = ((c + 0.5) / columns.length) * width;
            column.forEach((ref, r) => {
                const y = ((r + 0.5) / column.length) * height;
                this.placed.push({ ref, x, y });
            });
        });
    }
    find(ref) {
        return this.placed.find((p) => (0, types_js_1.sameNode)(p.ref, ref));
    }
    eventPoint(e) {
        const rect = this.canvas.getBoundingClientRect();
        return {
            x: ((e.clientX - rect.left) / rect.width) * this.canvas.width,
            y: ((e.clientY - rect.top) / rect.height) * this.canvas.height,
        };
    }
    hitNode(point) {
        for (const node of this.placed) {
            if (Math.abs(point.x - node.x) <= TILE / 2 && Math.abs(point.y - node.y) <= TILE / 2) {
                return node;
            }
        }
        return null;
    }
    hitEdge(point) {
        for (const edge of this.edges) {
            const a = this.find(edge[0]);
            const b = this.find(edge[1]);
            if (!a || !b)
                continue;
            const d = distanceToSegment(point, { x: a.x + TILE / 2, y: a.y }, { x: b.x - TILE / 2, y: b.y });
            if (d < 5)
                return edge;
        }
        return null;
    }
    onClick(e) {
        const point = this.eventPoint(e);
        if (this.hitNode(point))
            return;
        const edge = this.hitEdge(point);
        if (edge) {
            void this.controller.toggleEdge(edge[0], edge[1]);
        }
    }
    onDrop(e) {
        const from = this.dragFrom;
        this.dragFrom = null;
        if (!from)
            return;
        const to = this.hitNode(this.eventPoint(e));
        if (!to || to === from || typeof to.ref === "string")
            return;
        const fromLayer = typeof from.ref === "string" ? 0 : from.ref[0];
        if (to.ref[0] > fromLayer && !(0, types_js_1.sameNode)(from.ref, to.ref)) {
            void this.controller.addSkipEdge(from.ref, to.ref);
        }
    }
}
exports.NetworkView = NetworkView;
function distanceToSegment(p, a, b) {
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const lengthSq = dx * dx + dy * dy;
    const t = lengthSq ? Math.max(0, Math.min(1, ((p.x - a.x) * dx + (p.y - a.y) * dy) / lengthSq)) : 0;
    const cx = a.x + t * dx;
    const cy = a.y + t * dy;
    return Math.hypot(p.x - cx, p.y - cy);
}
