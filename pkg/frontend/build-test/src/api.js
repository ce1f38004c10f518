"use strict";
/** Thin typed client over the session service endpoints. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.ApiClient = exports.ApiError = void 0;
class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.status = status;
    }
}
exports.ApiError = ApiError;
async function parseOrThrow(response) {
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
        throw new ApiError(response.status, body.detail ?? response.statusText);
    }
    return body;
}
class ApiClient {
    constructor(baseUrl = "", fetchFn = (...args) => fetch(...args)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async json(path, init) {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
        return parseOrThrow(response);
    }
    createSession(body) {
        return this.json("/sessions", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    getSession(id) {
        return this.json(`/sessions/${id}`);
    }
    patchTopology(id, edit) {
        return this.json(`/sessions/${id}/topology`, {
            method: "PATCH",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ schema_version: 1, edit }),
        });
    }
    control(id, action, steps) {
        return this.json(`/sessions/${id}/control`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ schema_version: 1, action, steps: steps ?? 1 }),
        });
    }
    uploadDataset(id, csv) {
        return this.json(`/sessions/${id}/dataset`, {
            method: "POST",
            headers: { "content-type": "text/csv" },
            body: csv,
        });
    }
    heatmaps(id, resolution = 50) {
        return this.json(`/sessions/${id}/heatmaps?resolution=${resolution}`);
    }
    exportSession(id) {
        return this.json(`/sessions/${id}/export`);
    }
    importRecord(record) {
        return this.json("/import", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(record),
        });
    }
}
exports.ApiClient = ApiClient;
