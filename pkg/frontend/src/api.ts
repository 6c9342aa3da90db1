/** Read-only API client. One in-flight request per endpoint kind; a newer
 * request aborts the superseded one. */

import { graphQueryString, sliceQueryString, ViewState } from "./state";
import { GraphPayload, SchemaPayload, SliceSummary, WireMetrics } from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(private readonly base: string = "") {}

  private async get<T>(kind: string, path: string): Promise<T> {
    this.inflight.get(kind)?.abort();
    const controller = new AbortController();
    this.inflight.set(kind, controller);
    try {
      const response = await fetch(this.base + path, { signal: controller.signal });
      return await parseOrThrow<T>(response);
    } finally {
      if (this.inflight.get(kind) === controller) {
        this.inflight.delete(kind);
      }
    }
  }

  fetchSchema(): Promise<SchemaPayload> {
    return this.get("schema", "/api/schema");
  }

  fetchOverall(): Promise<WireMetrics> {
    return this.get("overall", "/api/overall");
  }

  fetchSlices(state: ViewState): Promise<SliceSummary[]> {
    return this.get("slices", `/api/slices?${sliceQueryString(state)}`);
  }

  fetchGraph(state: ViewState): Promise<GraphPayload> {
    return this.get("graph", `/api/graph?${graphQueryString(state)}`);
  }
}
