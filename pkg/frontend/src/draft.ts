// Mid-batch label drafts, keyed by session and iteration so a page reload
// restores partial selections. Drafts are local scratch state only; nothing
// here is shown as saved until the service acknowledges a submit.

const PREFIX = "termset-draft:";

export class DraftStore {
  constructor(private storage: Storage) {}

  load(sessionId: string, iteration: number): Record<string, boolean> {
    const raw = this.storage.getItem(PREFIX + sessionId);
    if (raw === null) return {};
    try {
      const parsed = JSON.parse(raw);
      if (
        parsed &&
        parsed.iteration === iteration &&
        typeof parsed.marks === "object" &&
        parsed.marks !== null
      ) {
        return { ...parsed.marks };
      }
    } catch {
      // corrupt entry, same as no draft
    }
    return {};
  }

  save(sessionId: string, iteration: number, marks: Record<string, boolean>): void {
    this.storage.setItem(PREFIX + sessionId, JSON.stringify({ iteration, marks }));
  }

  clear(sessionId: string): void {
    this.storage.removeItem(PREFIX + sessionId);
  }
}
