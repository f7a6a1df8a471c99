// HTML fragments for the three screens. Pure functions of the last service
// response plus local draft marks, so every render reflects server truth.

import type { ExportEntry, ModelInfo, SessionConfig, SessionState } from "./api";
import { STATUS_AWAITING } from "./api";
import { historyChart } from "./chart";

export function esc(value: string): string {
  return value.replace(/[&<>"']/g, (c) =>
    c === "&" ? "&amp;" : c === "<" ? "&lt;" : c === ">" ? "&gt;" : c === '"' ? "&quot;" : "&#39;",
  );
}

export function parseTerms(raw: string): string[] {
  const seen = new Set<string>();
  const terms: string[] = [];
  for (const part of raw.split(/[\s,]+/)) {
    if (part && !seen.has(part)) {
      seen.add(part);
      terms.push(part);
    }
  }
  return terms;
}

// Everything a screen needs from the session, derived from the last service
// response and nothing else.
export interface SessionView {
  id: string;
  model: string;
  configSummary: string;
  status: string;
  iteration: number;
  pending: string[];
  history: number[];
  positives: number;
  negatives: number;
}

export function sessionView(state: SessionState): SessionView {
  const entries = state.labeled.entries;
  return {
    id: state.id,
    model: state.model,
    configSummary: configSummary(state.config),
    status: state.status,
    iteration: state.iteration,
    pending: [...state.pending],
    history: [...state.history],
    positives: entries.filter((e) => e.label).length,
    negatives: entries.filter((e) => !e.label).length,
  };
}

export function configSummary(config: SessionConfig): string {
  const parts = [config.method, `k=${config.k}`];
  if (config.method === "svm-linear" || config.method === "svm-rbf") {
    parts.push(`C=${config.svm_c}`);
  }
  if (config.method === "svm-rbf") {
    parts.push(`gamma=${config.rbf_gamma ?? "1/dim"}`);
  }
  return parts.join(" / ");
}

export function bannerHtml(banner: { kind: string; text: string } | null): string {
  if (!banner) return '<div id="banner" hidden></div>';
  return `<div id="banner" class="banner-${esc(banner.kind)}">${esc(banner.text)}</div>`;
}

// -- session setup ----------------------------------------------------------

export interface SetupForm {
  model: string;
  method: string;
  k: string;
  svmC: string;
  rbfGamma: string;
  positives: string;
  negatives: string;
}

export const METHODS = ["centroid", "eigencentrality", "snr", "svm-linear", "svm-rbf"];

export function setupScreen(
  models: ModelInfo[],
  form: SetupForm,
  seedErrors: Record<string, string>,
): string {
  const options = models
    .map(
      (m) =>
        `<option value="${esc(m.id)}"${m.id === form.model ? " selected" : ""}>` +
        `${esc(m.id)} (${m.vocab_size} terms, ${m.dim}d)</option>`,
    )
    .join("");
  const isSvm = form.method === "svm-linear" || form.method === "svm-rbf";
  const isRbf = form.method === "svm-rbf";
  return `
  <section class="screen" id="setup-screen">
    <h2>new session</h2>
    <div class="field"><label for="model">model</label>
      <select id="model">${options}</select></div>
    <div class="field"><label for="method">method</label>
      <select id="method">${METHODS.map(
        (m) => `<option value="${m}"${m === form.method ? " selected" : ""}>${m}</option>`,
      ).join("")}</select></div>
    <div class="field"><label for="k">batch size k</label>
      <input id="k" type="number" min="1" value="${esc(form.k)}" /></div>
    ${
      isSvm
        ? `<div class="field" id="svm-c-field"><label for="svm-c">C</label>
      <input id="svm-c" value="${esc(form.svmC)}" /></div>`
        : ""
    }
    ${
      isRbf
        ? `<div class="field" id="rbf-gamma-field"><label for="rbf-gamma">gamma</label>
      <input id="rbf-gamma" value="${esc(form.rbfGamma)}" placeholder="1/dim" /></div>`
        : ""
    }
    <div class="field"><label for="seed-pos">seed positives</label>
      <input id="seed-pos" value="${esc(form.positives)}" placeholder="space or comma separated" />
      <div class="chips" id="pos-chips">${seedChips(form.positives, seedErrors)}</div></div>
    <div class="field"><label for="seed-neg">seed negatives</label>
      <input id="seed-neg" value="${esc(form.negatives)}" />
      <div class="chips" id="neg-chips">${seedChips(form.negatives, seedErrors)}</div></div>
    <button id="create">create session</button>
  </section>`;
}

export function seedChips(raw: string, errors: Record<string, string>): string {
  return parseTerms(raw)
    .map((term) => {
      const err = errors[term];
      return err
        ? `<span class="chip chip-error" data-term="${esc(term)}">${esc(term)}` +
            `<em class="chip-message">${esc(err)}</em></span>`
        : `<span class="chip" data-term="${esc(term)}">${esc(term)}</span>`;
    })
    .join("");
}

// -- session shell ----------------------------------------------------------

export type Tab = "label" | "progress";

export function sessionScreen(view: SessionView, tab: Tab, tabContent: string): string {
  return `
  <section class="screen" id="session-screen">
    <header id="session-header">
      <span id="session-id">session <code>${esc(view.id.slice(0, 8))}</code></span>
      <span id="config-summary">${esc(view.configSummary)}</span>
      <span id="model-name">model ${esc(view.model)}</span>
      <button id="new-session">new session</button>
    </header>
    <nav id="tabs">
      <button id="tab-label" class="${tab === "label" ? "active" : ""}">label</button>
      <button id="tab-progress" class="${tab === "progress" ? "active" : ""}">progress &amp; export</button>
    </nav>
    ${tabContent}
  </section>`;
}

// -- labeling ----------------------------------------------------------------

export interface RoundResult {
  iteration: number;
  positives: number;
  size: number;
}

export function labelingTab(
  view: SessionView,
  marks: Record<string, boolean>,
  cursor: number,
  lastRound: RoundResult | null,
): string {
  if (view.status !== STATUS_AWAITING) {
    const summary = lastRound
      ? `<p id="round-result">round ${lastRound.iteration}: ` +
        `<strong>${lastRound.positives}</strong> of ${lastRound.size} positive</p>`
      : '<p class="hint">no batch in flight; fetch one to start labeling</p>';
    return `
    <section id="labeling">
      ${summary}
      <button id="fetch">fetch next batch</button>
    </section>`;
  }
  const marked = view.pending.filter((t) => t in marks).length;
  const rows = view.pending
    .map((term, i) => {
      const mark = marks[term];
      const state = mark === undefined ? "unmarked" : mark ? "positive" : "negative";
      const classes = ["candidate"];
      if (i === cursor) classes.push("cursor");
      if (mark === true) classes.push("marked-pos");
      if (mark === false) classes.push("marked-neg");
      return `<li class="${classes.join(" ")}" data-term="${esc(term)}">
        <span class="term">${esc(term)}</span>
        <button class="mark-pos" data-term="${esc(term)}">positive</button>
        <button class="mark-neg" data-term="${esc(term)}">negative</button>
        <span class="mark-state">${state}</span>
      </li>`;
    })
    .join("");
  return `
  <section id="labeling">
    <p id="batch-note">round ${view.iteration + 1}: mark every candidate, then submit</p>
    <ul id="candidates">${rows}</ul>
    <p id="progress-note">${marked} of ${view.pending.length} marked</p>
    <button id="submit"${marked === view.pending.length ? "" : " disabled"}>submit labels</button>
    <p class="hint">keys: p positive, n negative, j/k or arrows move</p>
  </section>`;
}

// -- progress & export -------------------------------------------------------

export function progressTab(
  view: SessionView,
  k: number,
  threshold: number,
  exported: { mode: string; entries: ExportEntry[] } | null,
): string {
  return `
  <section id="progress">
    <p id="counts"><span id="count-pos">${view.positives}</span> positive,
      <span id="count-neg">${view.negatives}</span> negative,
      iteration <span id="count-iter">${view.iteration}</span></p>
    <figure id="history-chart">${historyChart(view.history, k)}</figure>
    <div id="export-pane">
      <button id="export-pos">export labeled positives</button>
      <button id="export-cls">export classifier expanded</button>
      <label id="threshold-label">threshold
        <input id="threshold" type="range" min="0" max="1" step="0.05" value="${threshold}" />
        <span id="threshold-value">${threshold.toFixed(2)}</span></label>
      ${exported ? exportResult(exported.mode, exported.entries) : '<div id="export-result"></div>'}
    </div>
  </section>`;
}

function exportResult(mode: string, entries: ExportEntry[]): string {
  const items = entries
    .map((e) => {
      const score =
        e.score === undefined ? "" : ` <span class="score">${e.score.toFixed(2)}</span>`;
      return `<li class="export-term prov-${esc(e.provenance)}" data-term="${esc(e.term)}">
        ${esc(e.term)} <span class="badge">${esc(e.provenance)}</span>${score}</li>`;
    })
    .join("");
  const text = exportText(entries);
  const json = exportJson(entries);
  return `<div id="export-result">
    <p id="export-summary">${esc(mode)}: ${entries.length} terms</p>
    <a id="download-txt" download="${esc(mode)}.txt"
      href="data:text/plain;charset=utf-8,${encodeURIComponent(text)}">download .txt</a>
    <a id="download-json" download="${esc(mode)}.json"
      href="data:application/json;charset=utf-8,${encodeURIComponent(json)}">download .json</a>
    <ul id="export-list">${items}</ul>
  </div>`;
}

// one term per line, the same shape as a gold-set file
export function exportText(entries: ExportEntry[]): string {
  return entries.map((e) => e.term).join("\n") + (entries.length > 0 ? "\n" : "");
}

export function exportJson(entries: ExportEntry[]): string {
  return JSON.stringify({ terms: entries }, null, 2) + "\n";
}
