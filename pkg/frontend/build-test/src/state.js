"use strict";
/** View-side session state.
 *
 * Every measurement shown anywhere comes from a server payload (descriptor,
 * patch response, or metrics frame); nothing is computed locally. Edge
 * toggles render optimistically while the patch is in flight and revert if
 * the server rejects them.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.ViewStore = void 0;
const types_js_1 = require("./types.js");
const HISTORY_LIMIT = 5000;
class ViewStore {
    constructor() {
        this.descriptor = null;
        this.measurements = null;
        this.latestFrame = null;
        this.history = [];
        this.pendingEdit = null;
        this.errorMessage = null;
        this.listeners = [];
    }
    subscribe(listener) {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }
    notify() {
        for (const listener of this.listeners)
            listener();
    }
    /** Server descriptor is the single source of truth for displayed values. */
    applyDescriptor(descriptor) {
        this.descriptor = descriptor;
        this.measurements = descriptor.measurements;
        this.notify();
    }
    applyPatchResponse(response) {
        this.pendingEdit = null;
        this.errorMessage = null;
        this.descriptor = response.descriptor;
        this.measurements = response.measurements;
        this.notify();
    }
    beginEdit(edit) {
        this.pendingEdit = edit;
        this.errorMessage = null;
        this.notify();
    }
    /** Rejected edit: drop the optimistic overlay and surface the message. */
    revertEdit(message) {
        this.pendingEdit = null;
        this.errorMessage = message;
        this.notify();
    }
    pushFrame(frame) {
        if (this.latestFrame && frame.step <= this.latestFrame.step) {
            return; // streams restart after reset; stale or duplicate steps are dropped
        }
        this.latestFrame = frame;
        this.history.push(frame);
        if (this.history.length > HISTORY_LIMIT) {
            this.history.splice(0, this.history.length - HISTORY_LIMIT);
        }
        if (this.measurements) {
            this.measurements = {
                ...this.measurements,
                mec_bits: frame.mec_bits,
                demand_bits: frame.demand_bits,
                generalization: frame.generalization,
                balance: frame.balance,
                bias_flagged: frame.bias_flagged,
                acc_positive: frame.acc_positive,
                acc_negative: frame.acc_negative,
            };
        }
        this.notify();
    }
    resetHistory() {
        this.history = [];
        this.latestFrame = null;
        this.notify();
    }
    /** Topology with the in-flight edit overlaid, for optimistic rendering. */
    displayTopology() {
        if (!this.descriptor)
            return null;
        const topology = this.descriptor.topology;
        const edit = this.pendingEdit;
        if (!edit)
            return topology;
        if (edit.kind === "toggle_edge") {
            const edges = topology.edges.map(([s, t, on]) => {
                const hit = (0, types_js_1.sameNode)(s, edit.source) && (0, types_js_1.sameNode)(t, edit.target);
                return [s, t, hit ? !on : on];
            });
            return { ...topology, edges };
        }
        if (edit.kind === "add_skip_edge") {
            return {
                ...topology,
                edges: [...topology.edges, [edit.source, edit.target, true]],
            };
        }
        return topology;
    }
}
exports.ViewStore = ViewStore;
