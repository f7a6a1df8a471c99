import { vi } from "vitest";
import { ApiClient } from "../src/api";
import { App } from "../src/app";
import { DraftStore } from "../src/draft";
import { FakeService } from "./fake_service";

export const VOCAB = [
  "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
  "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron", "pi",
  "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
];

const liveApps: App[] = [];

export function freshDom(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  window.location.hash = "";
  window.localStorage.clear();
  return document.getElementById("app") as HTMLElement;
}

export function startApp(svc: FakeService): { app: App; root: HTMLElement } {
  vi.stubGlobal("fetch", svc.handle);
  const root = freshDom();
  const app = new App(root, new ApiClient(), new DraftStore(window.localStorage));
  liveApps.push(app);
  return { app, root };
}

// a second App over the same stubbed fetch and storage, as after a page reload
export function reloadApp(): { app: App; root: HTMLElement } {
  for (const app of liveApps.splice(0)) app.dispose();
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  const app = new App(root, new ApiClient(), new DraftStore(window.localStorage));
  liveApps.push(app);
  return { app, root };
}

export function cleanup(): void {
  for (const app of liveApps.splice(0)) app.dispose();
  vi.unstubAllGlobals();
}

export async function bootApp(svc: FakeService): Promise<{ app: App; root: HTMLElement }> {
  const started = startApp(svc);
  await started.app.boot();
  return started;
}

export interface SessionOptions {
  method?: string;
  k?: string;
  pos?: string;
  neg?: string;
}

export async function createDefaultSession(
  app: App,
  root: HTMLElement,
  opts: SessionOptions = {},
): Promise<void> {
  if (opts.method) setValue(root, "#method", opts.method, "change");
  if (opts.k) setValue(root, "#k", opts.k);
  setValue(root, "#seed-pos", opts.pos ?? "alpha beta gamma");
  setValue(root, "#seed-neg", opts.neg ?? "omega psi");
  click(root, "#create");
  await app.settled();
}

export function setValue(
  root: ParentNode,
  selector: string,
  value: string,
  event = "input",
): void {
  const el = root.querySelector(selector) as HTMLInputElement | HTMLSelectElement;
  el.value = value;
  el.dispatchEvent(new Event(event, { bubbles: true }));
}

export function click(root: ParentNode, selector: string): void {
  const el = root.querySelector(selector) as HTMLElement | null;
  if (!el) throw new Error(`nothing matches ${selector}`);
  el.click();
}

export function press(key: string): void {
  document.dispatchEvent(new KeyboardEvent("keydown", { key, bubbles: true, cancelable: true }));
}

export function text(root: ParentNode, selector: string): string {
  return root.querySelector(selector)?.textContent?.trim() ?? "";
}

export function domCandidates(root: ParentNode): string[] {
  return [...root.querySelectorAll("#candidates .candidate")].map(
    (li) => li.getAttribute("data-term") ?? "",
  );
}

export function lastCandidates(svc: FakeService): string[] {
  const entries = svc.log.filter(
    (e) => e.path.endsWith("/candidates") && e.status === 200,
  );
  return entries[entries.length - 1].payload.candidates;
}

export function submitEnabled(root: ParentNode): boolean {
  const button = root.querySelector("#submit") as HTMLButtonElement | null;
  return button !== null && !button.disabled;
}
