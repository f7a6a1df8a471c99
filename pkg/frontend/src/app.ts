// Screen state and wiring. All transitions round-trip through the service
// API; the only client-side state is the draft marks for the batch on
// screen, and those are never presented as saved.

import {
  ApiClient,
  ApiError,
  STATUS_AWAITING,
  STATUS_READY,
  type ExportEntry,
  type ModelInfo,
  type SessionState,
} from "./api";
import { DraftStore } from "./draft";
import {
  bannerHtml,
  labelingTab,
  parseTerms,
  progressTab,
  seedChips,
  sessionScreen,
  sessionView,
  setupScreen,
  type RoundResult,
  type SetupForm,
  type Tab,
} from "./views";

const OOV_PATTERN = /seed term '(.+?)' not in vocabulary/;
const HASH_PATTERN = /#s=([0-9a-zA-Z-]+)/;

interface Banner {
  kind: "error" | "info";
  text: string;
}

export class App {
  private models: ModelInfo[] = [];
  private session: SessionState | null = null;
  private tab: Tab = "label";
  private cursor = 0;
  private marks: Record<string, boolean> = {};
  private lastRound: RoundResult | null = null;
  private lastExport: { mode: string; entries: ExportEntry[] } | null = null;
  private threshold = 0;
  private banner: Banner | null = null;
  private seedErrors: Record<string, string> = {};
  private form: SetupForm = {
    model: "",
    method: "centroid",
    k: "10",
    svmC: "1.0",
    rbfGamma: "",
    positives: "",
    negatives: "",
  };
  // user-triggered service calls are chained so they never interleave
  private queue: Promise<void> = Promise.resolve();
  private readonly onKeydown = (event: KeyboardEvent) => this.handleKey(event);

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private drafts: DraftStore,
  ) {
    document.addEventListener("keydown", this.onKeydown);
  }

  dispose(): void {
    document.removeEventListener("keydown", this.onKeydown);
  }

  boot(): Promise<void> {
    return this.run(async () => {
      this.models = await this.api.listModels();
      if (this.models.length > 0 && !this.form.model) {
        this.form.model = this.models[0].id;
      }
      const match = HASH_PATTERN.exec(window.location.hash);
      if (match) {
        this.adopt(await this.api.getSession(match[1]));
      }
      this.render();
    });
  }

  // resolves once every queued service call has settled; handy for tests
  settled(): Promise<void> {
    return this.queue;
  }

  private run(op: () => Promise<void>): Promise<void> {
    this.queue = this.queue.then(op).catch((err) => this.fail(err));
    return this.queue;
  }

  private async fail(err: unknown): Promise<void> {
    if (err instanceof ApiError) {
      const oov = this.session === null ? OOV_PATTERN.exec(err.detail) : null;
      if (oov) {
        // surface the offending seed on its chip instead of a banner
        this.seedErrors[oov[1]] = "not in vocabulary";
        this.banner = null;
        this.render();
        return;
      }
      this.banner = { kind: "error", text: `${err.code}: ${err.detail}` };
      if (err.code === "conflict" && this.session) {
        // stale view of the session: re-sync; drafts stay put
        this.adopt(await this.api.getSession(this.session.id));
      }
      this.render();
      return;
    }
    this.banner = { kind: "error", text: String(err) };
    this.render();
  }

  // set the current session and restore draft marks for its pending batch
  private adopt(state: SessionState): void {
    this.session = state;
    const draft = this.drafts.load(state.id, state.iteration);
    this.marks = {};
    for (const term of state.pending) {
      if (term in draft) this.marks[term] = draft[term];
    }
    const firstUnmarked = state.pending.findIndex((t) => !(t in this.marks));
    this.cursor = firstUnmarked === -1 ? 0 : firstUnmarked;
  }

  // -- actions ---------------------------------------------------------------

  private createSession(): void {
    const k = Number.parseInt(this.form.k, 10);
    const hyperparams: Record<string, number> = {};
    let bad: string | null = null;
    if (!Number.isInteger(k) || k < 1) bad = "k must be a positive integer";
    if (this.form.method === "svm-linear" || this.form.method === "svm-rbf") {
      const c = Number.parseFloat(this.form.svmC);
      if (Number.isNaN(c)) bad = "C must be a number";
      else hyperparams.svm_c = c;
    }
    if (this.form.method === "svm-rbf" && this.form.rbfGamma.trim() !== "") {
      const gamma = Number.parseFloat(this.form.rbfGamma);
      if (Number.isNaN(gamma)) bad = "gamma must be a number";
      else hyperparams.rbf_gamma = gamma;
    }
    if (bad) {
      this.banner = { kind: "error", text: bad };
      this.render();
      return;
    }
    this.seedErrors = {};
    const body = {
      model: this.form.model,
      method: this.form.method,
      k,
      hyperparams,
      seed_positives: parseTerms(this.form.positives),
      seed_negatives: parseTerms(this.form.negatives),
    };
    this.run(async () => {
      const id = await this.api.createSession(body);
      const state = await this.api.getSession(id);
      window.location.hash = `s=${id}`;
      this.banner = null;
      this.lastRound = null;
      this.lastExport = null;
      this.tab = "label";
      this.adopt(state);
      this.render();
    });
  }

  private fetchBatch(): void {
    if (!this.session) return;
    const sid = this.session.id;
    this.run(async () => {
      await this.api.requestCandidates(sid);
      const state = await this.api.getSession(sid);
      this.banner = null;
      this.adopt(state);
      this.render();
    });
  }

  private mark(term: string, label: boolean): void {
    const state = this.session;
    if (!state || state.status !== STATUS_AWAITING) return;
    const at = state.pending.indexOf(term);
    if (at === -1) return;
    this.marks[term] = label;
    this.drafts.save(state.id, state.iteration, this.marks);
    // advance to the next unmarked candidate, wrapping once
    let next = -1;
    for (let i = at + 1; i < state.pending.length; i++) {
      if (!(state.pending[i] in this.marks)) {
        next = i;
        break;
      }
    }
    if (next === -1) {
      for (let i = 0; i < state.pending.length; i++) {
        if (!(state.pending[i] in this.marks)) {
          next = i;
          break;
        }
      }
    }
    this.cursor = next === -1 ? Math.min(at + 1, state.pending.length - 1) : next;
    this.render();
  }

  private submitBatch(): void {
    const state = this.session;
    if (!state || state.status !== STATUS_AWAITING) return;
    const labels: Record<string, boolean> = {};
    for (const term of state.pending) {
      const mark = this.marks[term];
      if (mark === undefined) return; // button is disabled; belt and braces
      labels[term] = mark;
    }
    const sid = state.id;
    const size = state.pending.length;
    this.run(async () => {
      const result = await this.api.submitLabels(sid, labels);
      this.drafts.clear(sid);
      this.lastRound = {
        iteration: result.iteration,
        positives: result.positives_this_round,
        size,
      };
      const fresh = await this.api.getSession(sid);
      this.banner = null;
      this.adopt(fresh);
      this.render();
    });
  }

  private exportTerms(mode: string): void {
    if (!this.session) return;
    const sid = this.session.id;
    const threshold = mode === "classifier-expanded" ? this.threshold : 0;
    this.run(async () => {
      const entries = await this.api.exportLexicon(sid, mode, threshold);
      this.banner = null;
      this.lastExport = { mode, entries };
      this.render();
    });
  }

  private leaveSession(): void {
    window.location.hash = "";
    this.session = null;
    this.marks = {};
    this.lastRound = null;
    this.lastExport = null;
    this.banner = null;
    this.render();
  }

  private handleKey(event: KeyboardEvent): void {
    const state = this.session;
    if (!state || state.status !== STATUS_AWAITING || this.tab !== "label") return;
    const target = event.target;
    if (
      target instanceof HTMLInputElement ||
      target instanceof HTMLTextAreaElement ||
      target instanceof HTMLSelectElement
    ) {
      return;
    }
    const pending = state.pending;
    if (pending.length === 0) return;
    switch (event.key) {
      case "p":
      case "P":
        this.mark(pending[this.cursor], true);
        break;
      case "n":
      case "N":
        this.mark(pending[this.cursor], false);
        break;
      case "ArrowDown":
      case "j":
        this.cursor = Math.min(this.cursor + 1, pending.length - 1);
        this.render();
        break;
      case "ArrowUp":
      case "k":
        this.cursor = Math.max(this.cursor - 1, 0);
        this.render();
        break;
      default:
        return;
    }
    event.preventDefault();
  }

  // -- rendering ---------------------------------------------------------------

  private render(): void {
    const banner = bannerHtml(this.banner);
    if (!this.session) {
      this.root.innerHTML =
        `<h1>term set expansion</h1>${banner}` +
        setupScreen(this.models, this.form, this.seedErrors);
      this.wireSetup();
      return;
    }
    const view = sessionView(this.session);
    const content =
      this.tab === "label"
        ? labelingTab(view, this.marks, this.cursor, this.lastRound)
        : progressTab(view, this.session.config.k, this.threshold, this.lastExport);
    this.root.innerHTML =
      `<h1>term set expansion</h1>${banner}` + sessionScreen(view, this.tab, content);
    this.wireSession();
  }

  private wireSetup(): void {
    const input = (id: string, apply: (value: string) => void) => {
      const el = this.root.querySelector<HTMLInputElement>(`#${id}`);
      el?.addEventListener("input", () => apply(el.value));
    };
    input("k", (v) => (this.form.k = v));
    input("svm-c", (v) => (this.form.svmC = v));
    input("rbf-gamma", (v) => (this.form.rbfGamma = v));
    input("seed-pos", (v) => {
      this.form.positives = v;
      this.refreshChips("pos-chips", v);
    });
    input("seed-neg", (v) => {
      this.form.negatives = v;
      this.refreshChips("neg-chips", v);
    });
    const model = this.root.querySelector<HTMLSelectElement>("#model");
    model?.addEventListener("change", () => (this.form.model = model.value));
    const method = this.root.querySelector<HTMLSelectElement>("#method");
    method?.addEventListener("change", () => {
      this.form.method = method.value;
      this.render(); // the svm fields appear and disappear with the method
    });
    this.root
      .querySelector("#create")
      ?.addEventListener("click", () => this.createSession());
  }

  // chips track the seed inputs without a full re-render, which would
  // steal focus mid-typing
  private refreshChips(boxId: string, raw: string): void {
    const box = this.root.querySelector(`#${boxId}`);
    if (box) box.innerHTML = seedChips(raw, this.seedErrors);
  }

  private wireSession(): void {
    this.root
      .querySelector("#new-session")
      ?.addEventListener("click", () => this.leaveSession());
    this.root.querySelector("#tab-label")?.addEventListener("click", () => {
      this.tab = "label";
      this.render();
    });
    this.root.querySelector("#tab-progress")?.addEventListener("click", () => {
      this.tab = "progress";
      this.render();
    });
    this.root.querySelector("#fetch")?.addEventListener("click", () => this.fetchBatch());
    this.root.querySelector("#submit")?.addEventListener("click", () => this.submitBatch());
    for (const btn of this.root.querySelectorAll<HTMLButtonElement>(".mark-pos")) {
      btn.addEventListener("click", () => this.mark(btn.dataset.term ?? "", true));
    }
    for (const btn of this.root.querySelectorAll<HTMLButtonElement>(".mark-neg")) {
      btn.addEventListener("click", () => this.mark(btn.dataset.term ?? "", false));
    }
    this.root
      .querySelector("#export-pos")
      ?.addEventListener("click", () => this.exportTerms("labeled-positives"));
    this.root
      .querySelector("#export-cls")
      ?.addEventListener("click", () => this.exportTerms("classifier-expanded"));
    const slider = this.root.querySelector<HTMLInputElement>("#threshold");
    slider?.addEventListener("input", () => {
      this.threshold = Number.parseFloat(slider.value);
      const label = this.root.querySelector("#threshold-value");
      if (label) label.textContent = this.threshold.toFixed(2);
    });
  }
}

export { STATUS_AWAITING, STATUS_READY };
