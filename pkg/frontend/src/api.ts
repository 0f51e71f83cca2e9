/**
 * Typed client for the review service.
 *
 * All responses pass through the zod schemas; the client does not invent,
 * reorder or default any displayed value.
 */

import {
  DecisionPayload,
  ItemDetail,
  QueuePage,
  itemDetailSchema,
  queuePageSchema,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    /* non-JSON error body */
  }
  return response.statusText || "request failed";
}

export interface ClientOptions {
  baseUrl: string;
  token?: string;
  fetchImpl?: typeof fetch;
}

export class ReviewApiClient {
  private readonly baseUrl: string;
  private readonly token?: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/+$/, "");
    this.token = options.token;
    this.fetchImpl = options.fetchImpl ?? fetch;
  }

  private headers(json = false): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response.json();
  }

  async loadQueue(cursor?: string | null, pageSize = 20, status = "Pending"): Promise<QueuePage> {
    const params = new URLSearchParams({ page_size: String(pageSize), status });
    if (cursor) params.set("cursor", cursor);
    const payload = await this.request(`/queue?${params}`, {
      headers: this.headers(),
    });
    return queuePageSchema.parse(payload);
  }

  async getItem(itemId: string): Promise<ItemDetail> {
    const payload = await this.request(`/items/${encodeURIComponent(itemId)}`, {
      headers: this.headers(),
    });
    return itemDetailSchema.parse(payload);
  }

  async submitDecision(itemId: string, decision: DecisionPayload): Promise<ItemDetail> {
    const payload = await this.request(
      `/items/${encodeURIComponent(itemId)}/decision`,
      {
        method: "POST",
        headers: this.headers(true),
        body: JSON.stringify(decision),
      },
    );
    return itemDetailSchema.parse(payload);
  }

  async healthz(): Promise<boolean> {
    try {
      await this.request("/healthz", { headers: this.headers() });
      return true;
    } catch {
      return false;
    }
  }
}
