/** Entry point: token screen, then reviewer flow or admin dashboard. */

import { ReviewApi } from "./api.js";
import { DashboardApp, ReviewApp } from "./app.js";

function field(labelText: string, input: HTMLInputElement): HTMLLabelElement {
  const label = document.createElement("label");
  label.className = "config-field";
  const span = document.createElement("span");
  span.textContent = labelText;
  label.append(span, input);
  return label;
}

function tokenScreen(root: HTMLElement): void {
  const form = document.createElement("form");
  form.className = "token-screen";

  const heading = document.createElement("h1");
  heading.textContent = "Summary review";
  form.appendChild(heading);

  const urlInput = document.createElement("input");
  urlInput.type = "url";
  urlInput.required = true;
  urlInput.value = window.localStorage.getItem("review-api-url") ?? "http://127.0.0.1:8765";
  form.appendChild(field("API base URL", urlInput));

  const tokenInput = document.createElement("input");
  tokenInput.type = "password";
  tokenInput.required = true;
  form.appendChild(field("Access token", tokenInput));

  const review = document.createElement("button");
  review.type = "submit";
  review.textContent = "Start reviewing";
  const dashboard = document.createElement("button");
  dashboard.type = "button";
  dashboard.textContent = "Open dashboard";
  form.append(review, dashboard);

  const begin = (mode: "review" | "dashboard") => {
    const api = new ReviewApi(urlInput.value.replace(/\/$/, ""), tokenInput.value);
    window.localStorage.setItem("review-api-url", urlInput.value);
    const app =
      mode === "review" ? new ReviewApp(root, api) : new DashboardApp(root, api);
    if (app instanceof ReviewApp) {
      window.addEventListener("online", () => void app.flush());
    }
    void app.start();
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    begin("review");
  });
  dashboard.addEventListener("click", () => {
    if (form.reportValidity()) begin("dashboard");
  });

  root.replaceChildren(form);
}

const root = document.getElementById("app");
if (root) tokenScreen(root);
