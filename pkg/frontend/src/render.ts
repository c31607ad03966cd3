/**
 * DOM rendering for the review screens.
 *
 * Everything is built with createElement from typed payloads; the only
 * text that reaches the page is payload text, so a summary can never
 * inject markup. The rating form is plain buttons and native focus
 * order, which keeps the whole flow usable from the keyboard alone.
 */

import {
  canSubmit,
  type ReviewScreenState,
} from "./state.js";
import {
  CRITERIA,
  type AggregateRow,
  type Criterion,
  type SummaryPayload,
} from "./types.js";

export interface TaskHandlers {
  onScore(criterion: Criterion, value: number): void;
  onComment(comment: string): void;
  onSubmit(): void;
  onToggleSource(): void;
}

const CRITERION_TITLES: Record<Criterion, string> = {
  satisfaction: "Satisfaction",
  correctness: "Correctness",
  form: "Form",
  completeness: "Completeness",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSummary(payload: SummaryPayload, kind: string): HTMLElement {
  if (kind === "extractive" && Array.isArray(payload.items)) {
    const list = el("ol", "extract-list");
    for (const item of payload.items) {
      const li = el("li", "extract-item");
      li.appendChild(el("span", "extract-text", item.text));
      li.appendChild(el("span", "extract-score", ` [${item.score.toFixed(2)}]`));
      list.appendChild(li);
    }
    return list;
  }
  if (kind === "flowing" && typeof payload.text === "string") {
    const container = el("div", "flowing-text");
    for (const para of payload.text.split(/\n{2,}/)) {
      container.appendChild(el("p", undefined, para));
    }
    return container;
  }
  if (kind === "issues" && Array.isArray(payload.issues)) {
    const container = el("div", "issue-list");
    for (const issue of payload.issues) {
      const card = el("section", "issue-card");
      if (issue.qd) card.appendChild(el("h3", "issue-qd", issue.qd));
      if (issue.pd) card.appendChild(el("p", "issue-pd", issue.pd));
      for (const [i, bt] of issue.bts.entries()) {
        const details = el("details", "issue-bt");
        details.appendChild(el("summary", undefined, `Source span ${i + 1}`));
        details.appendChild(el("blockquote", undefined, bt));
        card.appendChild(details);
      }
      container.appendChild(card);
    }
    if (payload.keywords && payload.keywords.length > 0) {
      const row = el("div", "keyword-row");
      for (const keyword of payload.keywords) {
        row.appendChild(el("span", "keyword-chip", keyword));
      }
      container.appendChild(row);
    }
    return container;
  }
  throw new Error(`malformed summary payload (kind=${kind || "missing"})`);
}

export function renderTask(
  state: ReviewScreenState,
  handlers: TaskHandlers,
): HTMLElement {
  const root = el("article", "task-screen");
  root.dataset.taskId = state.task.task_id;
  const header = el("header", "task-header");
  header.appendChild(el("h2", "blind-label", state.task.blind_label));
  header.appendChild(
    el("span", "remaining", `${state.remaining} task(s) remaining`),
  );
  root.appendChild(header);

  let summary: HTMLElement;
  try {
    summary = renderSummary(state.task.summary, state.task.kind);
  } catch (error) {
    return renderError(
      error instanceof Error ? error.message : "malformed payload",
    );
  }
  root.appendChild(summary);

  const sourceToggle = el("button", "source-toggle", "Show source section");
  sourceToggle.type = "button";
  sourceToggle.addEventListener("click", () => handlers.onToggleSource());
  root.appendChild(sourceToggle);
  if (state.task.source_text !== undefined) {
    sourceToggle.textContent = "Hide source section";
    const source = el("blockquote", "source-text", state.task.source_text);
    root.appendChild(source);
  }

  const form = el("form", "rating-form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (canSubmit(state)) handlers.onSubmit();
  });
  for (const criterion of CRITERIA) {
    const group = el("fieldset", "criterion-group");
    group.dataset.criterion = criterion;
    group.appendChild(el("legend", undefined, CRITERION_TITLES[criterion]));
    for (let value = 1; value <= 5; value += 1) {
      const button = el("button", "score-button", String(value));
      button.type = "button";
      button.dataset.criterion = criterion;
      button.dataset.value = String(value);
      button.setAttribute(
        "aria-pressed",
        state.scores[criterion] === value ? "true" : "false",
      );
      button.addEventListener("click", () =>
        handlers.onScore(criterion, value),
      );
      button.addEventListener("keydown", (event) => {
        if (event.key >= "1" && event.key <= "5") {
          event.preventDefault();
          handlers.onScore(criterion, Number(event.key));
        }
      });
      group.appendChild(button);
    }
    form.appendChild(group);
  }

  const comment = el("textarea", "comment-box");
  comment.placeholder = "Optional comment";
  comment.value = state.comment;
  comment.addEventListener("input", () =>
    handlers.onComment(comment.value),
  );
  form.appendChild(comment);

  const submit = el("button", "submit-button", "Submit rating");
  submit.type = "submit";
  submit.disabled = !canSubmit(state);
  form.appendChild(submit);
  root.appendChild(form);

  if (state.locked) {
    root.appendChild(
      el(
        "p",
        "locked-banner",
        "Submission pending — will retry when the connection returns.",
      ),
    );
  }
  return root;
}

export function renderDone(): HTMLElement {
  const root = el("div", "done-screen");
  root.appendChild(el("h2", undefined, "All done"));
  root.appendChild(
    el("p", undefined, "Every assigned summary has been rated. Thank you."),
  );
  return root;
}

export function renderError(message: string): HTMLElement {
  const root = el("div", "error-screen");
  root.appendChild(el("h2", undefined, "Something went wrong"));
  root.appendChild(el("p", "error-message", message));
  return root;
}

export function renderAccessDenied(): HTMLElement {
  const root = el("div", "denied-screen");
  root.appendChild(el("h2", undefined, "Access denied"));
  root.appendChild(
    el("p", undefined, "The dashboard needs an admin token."),
  );
  return root;
}

export function renderAggregate(
  rows: AggregateRow[],
  onRefresh: () => void,
): HTMLElement {
  const root = el("div", "dashboard");
  root.appendChild(el("h2", undefined, "Live aggregate"));
  const refresh = el("button", "refresh-button", "Refresh");
  refresh.type = "button";
  refresh.addEventListener("click", onRefresh);
  root.appendChild(refresh);

  if (rows.length === 0) {
    root.appendChild(el("p", "empty-state", "No ratings recorded yet."));
    return root;
  }

  const methods = [...new Set(rows.map((row) => row.method))].sort();
  const byKey = new Map(rows.map((row) => [`${row.method}/${row.criterion}`, row]));
  const table = el("table", "aggregate-table");
  const head = el("tr");
  head.appendChild(el("th"));
  for (const method of methods) head.appendChild(el("th", undefined, method));
  table.appendChild(head);
  for (const criterion of CRITERIA) {
    const tr = el("tr");
    tr.appendChild(el("th", undefined, CRITERION_TITLES[criterion]));
    for (const method of methods) {
      const row = byKey.get(`${method}/${criterion}`);
      const cell = el("td", "aggregate-cell");
      if (row) {
        cell.appendChild(el("span", "cell-value", row.cell));
        cell.appendChild(el("small", "cell-n", ` n=${row.n}`));
      } else {
        cell.textContent = "-";
      }
      tr.appendChild(cell);
    }
    table.appendChild(tr);
  }
  root.appendChild(table);
  return root;
}
