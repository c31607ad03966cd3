import { beforeEach, describe, expect, it, vi } from "vitest";

import {
  renderAccessDenied,
  renderAggregate,
  renderError,
  renderSummary,
  renderTask,
} from "../src/render.js";
import { createScreenState, setScore } from "../src/state.js";
import { CRITERIA, type TaskPayload } from "../src/types.js";

function flowingTask(overrides: Partial<TaskPayload> = {}): TaskPayload {
  return {
    task_id: "t1",
    blind_label: "Summary A",
    round: 2,
    kind: "flowing",
    summary: { text: "First paragraph.\n\nSecond paragraph." },
    remaining: 3,
    ...overrides,
  };
}

const noopHandlers = {
  onScore: () => {},
  onComment: () => {},
  onSubmit: () => {},
  onToggleSource: () => {},
};

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("renderSummary", () => {
  it("renders extract items as an ordered list with scores", () => {
    const node = renderSummary(
      {
        items: [
          { position: 1, text: "First phrase.", score: 0.9 },
          { position: 2, text: "Second phrase.", score: 0.7 },
        ],
      },
      "extractive",
    );
    expect(node.tagName).toBe("OL");
    expect(node.querySelectorAll("li")).toHaveLength(2);
    expect(node.textContent).toContain("First phrase.");
    expect(node.textContent).toContain("[0.90]");
  });

  it("renders issue cards with expandable spans and keyword chips", () => {
    const node = renderSummary(
      {
        issues: [
          { index: 1, qd: "Question one?", pd: "Principle one.", bts: [] },
          {
            index: 2,
            qd: "Question two?",
            pd: "Principle two.",
            bts: ["span a", "span b", "span c"],
          },
        ],
        keywords: ["tax", "relief"],
      },
      "issues",
    );
    expect(node.querySelectorAll(".issue-card")).toHaveLength(2);
    const second = node.querySelectorAll(".issue-card")[1]!;
    expect(second.querySelectorAll("details")).toHaveLength(3);
    expect(node.querySelectorAll(".keyword-chip")).toHaveLength(2);
  });

  it("renders flowing text as paragraphs", () => {
    const node = renderSummary(
      { text: "One.\n\nTwo." },
      "flowing",
    );
    expect(node.querySelectorAll("p")).toHaveLength(2);
  });

  it("throws on malformed payload", () => {
    expect(() => renderSummary({}, "")).toThrow(/malformed/);
    expect(() => renderSummary({ text: "x" }, "extractive")).toThrow();
  });
});

describe("renderTask", () => {
  it("shows only the blind label, never a method id", () => {
    const node = renderTask(createScreenState(flowingTask()), noopHandlers);
    expect(node.querySelector(".blind-label")?.textContent).toBe("Summary A");
  });

  it("malformed payload yields the error state with no form", () => {
    const state = createScreenState(flowingTask({ kind: "", summary: {} }));
    const node = renderTask(state, noopHandlers);
    expect(node.className).toBe("error-screen");
    expect(node.querySelector(".submit-button")).toBeNull();
  });

  it("submit stays disabled until all four criteria have scores", () => {
    let state = createScreenState(flowingTask());
    for (const criterion of CRITERIA.slice(0, 3)) {
      state = setScore(state, criterion, 4);
    }
    const node = renderTask(state, noopHandlers);
    const submit = node.querySelector<HTMLButtonElement>(".submit-button")!;
    expect(submit.disabled).toBe(true);

    state = setScore(state, "completeness", 4);
    const enabled = renderTask(state, noopHandlers)
      .querySelector<HTMLButtonElement>(".submit-button")!;
    expect(enabled.disabled).toBe(false);
  });

  it("score buttons invoke the handler and reflect selection", () => {
    const onScore = vi.fn();
    const node = renderTask(createScreenState(flowingTask()), {
      ...noopHandlers,
      onScore,
    });
    const button = node.querySelector<HTMLButtonElement>(
      '.score-button[data-criterion="form"][data-value="4"]',
    )!;
    button.click();
    expect(onScore).toHaveBeenCalledWith("form", 4);

    const selected = renderTask(
      setScore(createScreenState(flowingTask()), "form", 4),
      noopHandlers,
    ).querySelector('.score-button[data-criterion="form"][data-value="4"]')!;
    expect(selected.getAttribute("aria-pressed")).toBe("true");
  });

  it("digit keys score the focused criterion group", () => {
    const onScore = vi.fn();
    const node = renderTask(createScreenState(flowingTask()), {
      ...noopHandlers,
      onScore,
    });
    const button = node.querySelector<HTMLButtonElement>(
      '.score-button[data-criterion="satisfaction"][data-value="1"]',
    )!;
    button.dispatchEvent(
      new KeyboardEvent("keydown", { key: "3", bubbles: true }),
    );
    expect(onScore).toHaveBeenCalledWith("satisfaction", 3);
  });

  it("source toggle request and display", () => {
    const onToggleSource = vi.fn();
    const node = renderTask(createScreenState(flowingTask()), {
      ...noopHandlers,
      onToggleSource,
    });
    node.querySelector<HTMLButtonElement>(".source-toggle")!.click();
    expect(onToggleSource).toHaveBeenCalled();

    const withSource = renderTask(
      createScreenState(flowingTask({ source_text: "The grounds text." })),
      noopHandlers,
    );
    expect(withSource.querySelector(".source-text")?.textContent).toBe(
      "The grounds text.",
    );
  });

  it("locked state shows the retry banner", () => {
    const state = { ...createScreenState(flowingTask()), locked: true };
    const node = renderTask(state, noopHandlers);
    expect(node.querySelector(".locked-banner")).not.toBeNull();
  });
});

describe("renderAggregate", () => {
  it("renders cells in the mean (std) format with explicit n", () => {
    const node = renderAggregate(
      [
        {
          method: "m1",
          criterion: "satisfaction",
          n: 2,
          mean: 3.0,
          std: 1.0,
          cell: "3.00 (1.00)",
        },
      ],
      () => {},
    );
    expect(node.querySelector(".cell-value")?.textContent).toBe("3.00 (1.00)");
    expect(node.querySelector(".cell-n")?.textContent).toContain("n=2");
  });

  it("empty aggregate shows an empty state", () => {
    const node = renderAggregate([], () => {});
    expect(node.querySelector(".empty-state")).not.toBeNull();
    expect(node.querySelector("table")).toBeNull();
  });

  it("refresh button invokes the callback", () => {
    const onRefresh = vi.fn();
    const node = renderAggregate([], onRefresh);
    node.querySelector<HTMLButtonElement>(".refresh-button")!.click();
    expect(onRefresh).toHaveBeenCalled();
  });
});

describe("auxiliary screens", () => {
  it("error screen carries the message", () => {
    expect(renderError("boom").textContent).toContain("boom");
  });

  it("access denied view", () => {
    expect(renderAccessDenied().textContent).toContain("admin token");
  });
});
