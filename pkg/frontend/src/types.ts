/** Wire types of the review-service JSON API (consumed verbatim). */

export const CRITERIA = [
  "satisfaction",
  "correctness",
  "form",
  "completeness",
] as const;

export type Criterion = (typeof CRITERIA)[number];

export interface ExtractItem {
  position: number;
  text: string;
  score: number;
}

export interface IssueEntry {
  index: number;
  qd: string;
  pd: string;
  bts: string[];
}

export interface SummaryPayload {
  kind?: string;
  items?: ExtractItem[];
  text?: string;
  issues?: IssueEntry[];
  keywords?: string[];
}

export interface TaskPayload {
  task_id: string;
  blind_label: string;
  round: number;
  kind: string;
  summary: SummaryPayload;
  remaining: number;
  source_text?: string;
}

export interface RatingBody {
  task_id: string;
  scores: Record<Criterion, number>;
  comment?: string;
}

export interface AggregateRow {
  method: string;
  criterion: string;
  n: number;
  mean: number;
  std: number;
  cell: string;
}
