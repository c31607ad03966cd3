/**
 * Controller: one reviewer session, one task on screen at a time.
 *
 * Submissions go through the retry queue so a network failure can
 * never lose or duplicate a rating; a 409 on retry means the server
 * already has it and the session simply moves on.
 */

import { ApiError, ReviewApi } from "./api.js";
import { RetryQueue } from "./queue.js";
import {
  renderAccessDenied,
  renderAggregate,
  renderDone,
  renderError,
  renderTask,
} from "./render.js";
import {
  canSubmit,
  completedScores,
  createScreenState,
  setComment,
  setScore,
  type ReviewScreenState,
} from "./state.js";
import type { Criterion } from "./types.js";

export class ReviewApp {
  private state: ReviewScreenState | null = null;
  private readonly queue = new RetryQueue();
  private withSource = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ReviewApi,
  ) {}

  /** Fetch and show the next pending task (or the done screen). */
  async start(): Promise<void> {
    await this.loadNext();
  }

  get pendingSubmissions(): number {
    return this.queue.size;
  }

  private show(node: HTMLElement): void {
    this.root.replaceChildren(node);
  }

  private async loadNext(): Promise<void> {
    let task;
    try {
      task = await this.api.nextTask(this.withSource);
    } catch (error) {
      this.show(
        renderError(error instanceof Error ? error.message : String(error)),
      );
      return;
    }
    if (task === null) {
      this.state = null;
      this.show(renderDone());
      return;
    }
    this.state = createScreenState(task);
    this.renderCurrent();
  }

  private renderCurrent(): void {
    if (!this.state) return;
    this.show(
      renderTask(this.state, {
        onScore: (criterion, value) => this.score(criterion, value),
        onComment: (comment) => {
          if (this.state) this.state = setComment(this.state, comment);
        },
        onSubmit: () => void this.submit(),
        onToggleSource: () => void this.toggleSource(),
      }),
    );
  }

  private score(criterion: Criterion, value: number): void {
    if (!this.state || this.state.locked) return;
    this.state = setScore(this.state, criterion, value);
    this.renderCurrent();
  }

  private async toggleSource(): Promise<void> {
    this.withSource = !this.withSource;
    await this.loadNext();
  }

  async submit(): Promise<void> {
    if (!this.state || !canSubmit(this.state)) return;
    const body = {
      task_id: this.state.task.task_id,
      scores: completedScores(this.state),
      comment: this.state.comment || undefined,
    };
    this.queue.enqueue(body);
    this.state = { ...this.state, locked: true };
    this.renderCurrent();
    await this.flush();
  }

  /** Drain the retry queue; advance on success, stay locked offline. */
  async flush(): Promise<void> {
    const outcomes = await this.queue.drain(this.api);
    let advanced = false;
    for (const outcome of outcomes) {
      if (outcome.kind === "delivered" || outcome.kind === "already-recorded") {
        advanced = true;
      } else if (outcome.kind === "rejected") {
        this.show(
          renderError(`Rating rejected (${outcome.status}): ${outcome.detail}`),
        );
        return;
      }
    }
    if (advanced) {
      await this.loadNext();
    } else if (this.state) {
      this.renderCurrent(); // still locked, banner explains the retry
    }
  }
}

export class DashboardApp {
  constructor(
    private readonly root: HTMLElement,
    private readonly api: ReviewApi,
  ) {}

  async start(): Promise<void> {
    await this.refresh();
  }

  async refresh(): Promise<void> {
    try {
      const rows = await this.api.aggregate();
      this.root.replaceChildren(
        renderAggregate(rows, () => void this.refresh()),
      );
    } catch (error) {
      if (error instanceof ApiError && error.status === 403) {
        this.root.replaceChildren(renderAccessDenied());
      } else {
        this.root.replaceChildren(
          renderError(error instanceof Error ? error.message : String(error)),
        );
      }
    }
  }
}
