/**
 * Exactly-once submission queue.
 *
 * A rating that fails with a network error stays queued and is retried
 * sequentially on demand (reconnect, manual retry). A 409 from the
 * server means the rating already landed, so it counts as success and
 * is dropped; any other API error is surfaced to the caller. Ratings
 * are never duplicated client-side: one queue entry per task id.
 */

import { ApiError, type ReviewApi } from "./api.js";
import type { RatingBody } from "./types.js";

export type DrainOutcome =
  | { kind: "delivered"; taskId: string; remaining: number }
  | { kind: "already-recorded"; taskId: string }
  | { kind: "rejected"; taskId: string; status: number; detail: string }
  | { kind: "offline"; taskId: string };

export class RetryQueue {
  private readonly pending: RatingBody[] = [];
  private draining = false;

  get size(): number {
    return this.pending.length;
  }

  enqueue(body: RatingBody): void {
    if (!this.pending.some((item) => item.task_id === body.task_id)) {
      this.pending.push(body);
    }
  }

  /**
   * Try to deliver every queued rating, oldest first, one at a time.
   * Stops at the first network failure (still offline); 409 counts as
   * delivered.
   */
  async drain(api: ReviewApi): Promise<DrainOutcome[]> {
    if (this.draining) return [];
    this.draining = true;
    const outcomes: DrainOutcome[] = [];
    try {
      while (this.pending.length > 0) {
        const body = this.pending[0]!;
        try {
          const remaining = await api.submitRating(body);
          this.pending.shift();
          outcomes.push({
            kind: "delivered",
            taskId: body.task_id,
            remaining,
          });
        } catch (error) {
          if (error instanceof ApiError) {
            this.pending.shift();
            if (error.status === 409) {
              outcomes.push({ kind: "already-recorded", taskId: body.task_id });
            } else {
              outcomes.push({
                kind: "rejected",
                taskId: body.task_id,
                status: error.status,
                detail: error.detail,
              });
            }
          } else {
            outcomes.push({ kind: "offline", taskId: body.task_id });
            break; // still offline; keep the entry queued
          }
        }
      }
    } finally {
      this.draining = false;
    }
    return outcomes;
  }
}
