/**
 * Screen state for one rating round: four criterion scores, a comment
 * draft and the remaining count. Submission stays disabled until every
 * criterion has a score. Pure functions; the DOM layer only reads.
 */

import { CRITERIA, type Criterion, type TaskPayload } from "./types.js";

export interface ReviewScreenState {
  task: TaskPayload;
  scores: Record<Criterion, number | null>;
  comment: string;
  remaining: number;
  locked: boolean;
}

export function createScreenState(task: TaskPayload): ReviewScreenState {
  const scores = {} as Record<Criterion, number | null>;
  for (const criterion of CRITERIA) scores[criterion] = null;
  return {
    task,
    scores,
    comment: "",
    remaining: task.remaining,
    locked: false,
  };
}

export function setScore(
  state: ReviewScreenState,
  criterion: Criterion,
  score: number,
): ReviewScreenState {
  if (!Number.isInteger(score) || score < 1 || score > 5) {
    throw new RangeError(`score must be an integer in [1, 5], got ${score}`);
  }
  return { ...state, scores: { ...state.scores, [criterion]: score } };
}

export function setComment(
  state: ReviewScreenState,
  comment: string,
): ReviewScreenState {
  return { ...state, comment };
}

/** All four criteria scored and no submission in flight. */
export function canSubmit(state: ReviewScreenState): boolean {
  return !state.locked && CRITERIA.every((c) => state.scores[c] !== null);
}

export function completedScores(
  state: ReviewScreenState,
): Record<Criterion, number> {
  if (!CRITERIA.every((c) => state.scores[c] !== null)) {
    throw new Error("not all criteria have a score");
  }
  return { ...(state.scores as Record<Criterion, number>) };
}
