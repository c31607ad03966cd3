/**
 * Thin typed client for the review-service API.
 *
 * The fetch function is injectable so tests (and the retry machinery)
 * can observe or disturb the network without touching globals.
 */

import type { AggregateRow, RatingBody, TaskPayload } from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Server answered with a non-success status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`API error ${status}: ${detail}`);
  }
}

export class ReviewApi {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private headers(): Record<string, string> {
    return {
      Authorization: `Bearer ${this.token}`,
      "Content-Type": "application/json",
    };
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      ...init,
      // browsers only transmit Authorization cross-origin with credentials
      credentials: "include",
      headers: { ...this.headers(), ...(init?.headers ?? {}) },
    });
    return response;
  }

  /** Next pending task, or null when the queue is empty. */
  async nextTask(includeSource = false): Promise<TaskPayload | null> {
    const query = includeSource ? "?include_source=true" : "";
    const response = await this.request(`/api/tasks/next${query}`);
    if (response.status === 204) return null;
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as TaskPayload;
  }

  /** Submit one rating; resolves with the remaining-task count. */
  async submitRating(body: RatingBody): Promise<number> {
    const response = await this.request("/api/ratings", {
      method: "POST",
      body: JSON.stringify(body),
    });
    if (response.status === 201) {
      const parsed = (await response.json()) as { remaining: number };
      return parsed.remaining;
    }
    throw new ApiError(response.status, await response.text());
  }

  async aggregate(): Promise<AggregateRow[]> {
    const response = await this.request("/api/aggregate");
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    const parsed = (await response.json()) as { rows: AggregateRow[] };
    return parsed.rows;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchFn(`${this.baseUrl}/healthz`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
