/** Glue between the API client and the view store.
 *
 * Edits apply optimistically, then the server's patch response (or
 * rejection) settles the display; measurements are never computed here.
 */

import { ApiClient, ApiError } from "./api.js";
import { ViewStore } from "./state.js";
import { EditPayload, NodeRef } from "./types.js";

export class SessionController {
  constructor(
    public readonly api: ApiClient,
    public readonly store: ViewStore,
    public sessionId: string
  ) {}

  async applyEdit(edit: EditPayload): Promise<void> {
    this.store.beginEdit(edit);
    try {
      const response = await this.api.patchTopology(this.sessionId, edit);
      this.store.applyPatchResponse(response);
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      this.store.revertEdit(message);
    }
  }

  toggleEdge(source: NodeRef, target: NodeRef): Promise<void> {
    return this.applyEdit({ kind: "toggle_edge", source, target });
  }

  addSkipEdge(source: NodeRef, target: NodeRef): Promise<void> {
    return this.applyEdit({ kind: "add_skip_edge", source, target });
  }

  setFeatures(features: string[]): Promise<void> {
    return this.applyEdit({ kind: "set_features", features });
  }

  async control(action: "start" | "pause" | "step" | "reset", steps?: number): Promise<void> {
    const descriptor = await this.api.control(this.sessionId, action, steps);
    if (action === "reset") {
      this.store.resetHistory();
    }
    this.store.applyDescriptor(descriptor);
  }

  async refresh(): Promise<void> {
    this.store.applyDescriptor(await this.api.getSession(this.sessionId));
  }

  async uploadCsv(csv: string): Promise<void> {
    await this.api.uploadDataset(this.sessionId, csv);
    this.store.resetHistory();
    await this.refresh();
  }
}
