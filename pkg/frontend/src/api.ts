// Typed client for the session service HTTP API. Every state transition in
// the UI round-trips through these calls; nothing on the client invents
// candidates or labels.

export const STATUS_READY = "ready-to-expand";
export const STATUS_AWAITING = "awaiting-labels";

export interface ModelInfo {
  id: string;
  dim: number;
  vocab_size: number;
}

export interface SessionConfig {
  method: string;
  k: number;
  svm_c: number;
  rbf_gamma: number | null;
  snr_epsilon: number;
}

export interface LabeledEntry {
  term: string;
  label: boolean;
  provenance: string;
  iteration?: number;
}

export interface SessionState {
  id: string;
  model: string;
  config: SessionConfig;
  labeled: { entries: LabeledEntry[] };
  pending: string[];
  iteration: number;
  history: number[];
  status: string;
}

export interface SubmitResult {
  iteration: number;
  positives_this_round: number;
  history: number[];
}

export interface ExportEntry {
  term: string;
  provenance: string;
  score?: number;
}

export interface CreateSessionBody {
  model: string;
  method: string;
  k: number;
  hyperparams: Record<string, number>;
  seed_positives: string[];
  seed_negatives: string[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private baseUrl = "") {}

  async listModels(): Promise<ModelInfo[]> {
    const body = await this.call<{ models: ModelInfo[] }>("/models", "POST");
    return body.models;
  }

  async createSession(req: CreateSessionBody): Promise<string> {
    const body = await this.call<{ session_id: string }>("/sessions", "POST", req);
    return body.session_id;
  }

  getSession(id: string): Promise<SessionState> {
    return this.call<SessionState>(`/sessions/${id}`, "GET");
  }

  async requestCandidates(id: string): Promise<string[]> {
    const body = await this.call<{ candidates: string[] }>(
      `/sessions/${id}/candidates`,
      "POST",
    );
    return body.candidates;
  }

  submitLabels(id: string, labels: Record<string, boolean>): Promise<SubmitResult> {
    return this.call<SubmitResult>(`/sessions/${id}/labels`, "POST", { labels });
  }

  async exportLexicon(id: string, mode: string, threshold = 0): Promise<ExportEntry[]> {
    const query = `mode=${encodeURIComponent(mode)}&threshold=${threshold}`;
    const body = await this.call<{ terms: ExportEntry[] }>(
      `/sessions/${id}/export?${query}`,
      "GET",
    );
    return body.terms;
  }

  private async call<T>(path: string, method: string, payload?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (payload !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(payload);
    }
    const resp = await fetch(this.baseUrl + path, init);
    const body: any = await resp.json().catch(() => null);
    if (!resp.ok) {
      // service errors always carry {error, detail}; anything else gets a
      // generic message so the failure still surfaces in the UI
      const code = body && typeof body.error === "string" ? body.error : "unknown";
      const detail =
        body && typeof body.detail === "string"
          ? body.detail
          : `request failed with status ${resp.status}`;
      throw new ApiError(resp.status, code, detail);
    }
    return body as T;
  }
}
