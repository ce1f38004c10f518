"use strict";
/** Glue between the API client and the view store.
 *
 * Edits apply optimistically, then the server's patch response (or
 * rejection) settles the display; measurements are never computed here.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.SessionController = void 0;
const api_js_1 = require("./api.js");
class SessionController {
    constructor(api, store, sessionId) {
        this.api = api;
        this.store = store;
        this.sessionId = sessionId;
    }
    async applyEdit(edit) {
        this.store.beginEdit(edit);
        try {
            const response = await this.api.patchTopology(this.sessionId, edit);
            this.store.applyPatchResponse(response);
        }
        catch (err) {
            const message = err instanceof api_js_1.ApiError ? err.message : String(err);
            this.store.revertEdit(message);
        }
    }
    toggleEdge(source, target) {
        return this.applyEdit({ kind: "toggle_edge", source, target });
    }
    addSkipEdge(source, target) {
        return this.applyEdit({ kind: "add_skip_edge", source, target });
    }
    setFeatures(features) {
        return this.applyEdit({ kind: "set_features", features });
    }
    async control(action, steps) {
        const descriptor = await this.api.control(this.sessionId, action, steps);
        if (action === "reset") {
            this.store.resetHistory();
        }
        this.store.applyDescriptor(descriptor);
    }
    async refresh() {
        this.store.applyDescriptor(await this.api.getSession(this.sessionId));
    }
    async uploadCsv(csv) {
        await this.api.uploadDataset(this.sessionId, csv);
        this.store.resetHistory();
        await this.refresh();
    }
}
exports.SessionController = SessionController;
