/** View-side session state.
 *
 * Every measurement shown anywhere comes from a server payload (descriptor,
 * patch response, or metrics frame); nothing is computed locally. Edge
 * toggles render optimistically while the patch is in flight and revert if
 * the server rejects them.
 */

import {
  EditPayload,
  Measurements,
  MetricsFrame,
  NodeRef,
  PatchResponse,
  SessionDescriptor,
  TopologyObj,
  sameNode,
} from "./types.js";

const HISTORY_LIMIT = 5000;

export type Listener = () => void;

export class ViewStore {
  descriptor: SessionDescriptor | null = null;
  measurements: Measurements | null = null;
  latestFrame: MetricsFrame | null = null;
  history: MetricsFrame[] = [];
  pendingEdit: EditPayload | null = null;
  errorMessage: string | null = null;

  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Server descriptor is the single source of truth for displayed values. */
  applyDescriptor(descriptor: SessionDescriptor): void {
    this.descriptor = descriptor;
    this.measurements = descriptor.measurements;
    this.notify();
  }

  applyPatchResponse(response: PatchResponse): void {
    this.pendingEdit = null;
    this.errorMessage = null;
    this.descriptor = response.descriptor;
    this.measurements = response.measurements;
    this.notify();
  }

  beginEdit(edit: EditPayload): void {
    this.pendingEdit = edit;
    this.errorMessage = null;
    this.notify();
  }

  /** Rejected edit: drop the optimistic overlay and surface the message. */
  revertEdit(message: string): void {
    this.pendingEdit = null;
    this.errorMessage = message;
    this.notify();
  }

  pushFrame(frame: MetricsFrame): void {
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

  resetHistory(): void {
    this.history = [];
    this.latestFrame = null;
    this.notify();
  }

  /** Topology with the in-flight edit overlaid, for optimistic rendering. */
  displayTopology(): TopologyObj | null {
    if (!this.descriptor) return null;
    const topology = this.descriptor.topology;
    const edit = this.pendingEdit;
    if (!edit) return topology;
    if (edit.kind === "toggle_edge") {
      const edges = topology.edges.map(([s, t, on]): [NodeRef, NodeRef, boolean] => {
        const hit = sameNode(s, edit.source) && sameNode(t, edit.target);
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
