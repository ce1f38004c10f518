/** Thin typed client over the session service endpoints. */

import {
  EditPayload,
  Measurements,
  MetricsFrame,
  PatchResponse,
  SessionDescriptor,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, (body as { detail?: string }).detail ?? response.statusText);
  }
  return body as T;
}

export interface CreateSessionBody {
  schema_version: 1;
  topology?: { features: string[]; hidden: number[]; activation?: string };
  config?: Record<string, number | string>;
  dataset?: Record<string, number | string>;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = (...args) => fetch(...args)
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    return parseOrThrow<T>(response);
  }

  createSession(body: CreateSessionBody): Promise<SessionDescriptor> {
    return this.json("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<SessionDescriptor> {
    return this.json(`/sessions/${id}`);
  }

  patchTopology(id: string, edit: EditPayload): Promise<PatchResponse> {
    return this.json(`/sessions/${id}/topology`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ schema_version: 1, edit }),
    });
  }

  control(
    id: string,
    action: "start" | "pause" | "step" | "reset",
    steps?: number
  ): Promise<SessionDescriptor> {
    return this.json(`/sessions/${id}/control`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ schema_version: 1, action, steps: steps ?? 1 }),
    });
  }

  uploadDataset(
    id: string,
    csv: string
  ): Promise<{ n: number; balance: number; demand_bits: number; descriptor: SessionDescriptor }> {
    return this.json(`/sessions/${id}/dataset`, {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csv,
    });
  }

  heatmaps(
    id: string,
    resolution = 50
  ): Promise<{ resolution: number; extent: [number, number]; nodes: Record<string, number[][]> }> {
    return this.json(`/sessions/${id}/heatmaps?resolution=${resolution}`);
  }

  exportSession(id: string): Promise<Record<string, unknown>> {
    return this.json(`/sessions/${id}/export`);
  }

  importRecord(record: Record<string, unknown>): Promise<SessionDescriptor> {
    return this.json("/import", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(record),
    });
  }
}

export type { Measurements, MetricsFrame, SessionDescriptor };
