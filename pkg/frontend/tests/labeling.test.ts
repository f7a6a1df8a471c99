import { afterEach, expect, test } from "vitest";
import { FakeService } from "./fake_service";
import {
  VOCAB,
  bootApp,
  cleanup,
  click,
  createDefaultSession,
  domCandidates,
  lastCandidates,
  press,
  reloadApp,
  submitEnabled,
  text,
} from "./helpers";

afterEach(cleanup);

async function sessionWithBatch(svc: FakeService) {
  const { app, root } = await bootApp(svc);
  await createDefaultSession(app, root, { k: "5" });
  click(root, "#fetch");
  await app.settled();
  return { app, root };
}

test("fetched batch renders exactly the served candidates", async () => {
  const svc = new FakeService(VOCAB);
  const { root } = await sessionWithBatch(svc);

  expect(domCandidates(root)).toEqual(lastCandidates(svc));
  expect(text(root, "#progress-note")).toBe("0 of 5 marked");
});

test("submit stays disabled until every candidate is marked", async () => {
  const svc = new FakeService(VOCAB);
  const { root } = await sessionWithBatch(svc);
  const terms = domCandidates(root);

  for (const term of terms.slice(0, 4)) {
    click(root, `li[data-term="${term}"] .mark-pos`);
  }
  expect(text(root, "#progress-note")).toBe("4 of 5 marked");
  expect(submitEnabled(root)).toBe(false);

  click(root, `li[data-term="${terms[4]}"] .mark-neg`);
  expect(submitEnabled(root)).toBe(true);
});

test("keyboard marks advance the cursor; arrows move it", async () => {
  const svc = new FakeService(VOCAB);
  const { root } = await sessionWithBatch(svc);
  const terms = domCandidates(root);

  const cursorTerm = () => root.querySelector(".candidate.cursor")!.getAttribute("data-term");

  expect(cursorTerm()).toBe(terms[0]);
  press("p");
  expect(cursorTerm()).toBe(terms[1]);
  expect(
    root.querySelector(`li[data-term="${terms[0]}"]`)!.classList.contains("marked-pos"),
  ).toBe(true);

  press("n");
  expect(
    root.querySelector(`li[data-term="${terms[1]}"]`)!.classList.contains("marked-neg"),
  ).toBe(true);

  press("ArrowDown");
  expect(cursorTerm()).toBe(terms[3]);
  press("ArrowUp");
  press("k");
  expect(cursorTerm()).toBe(terms[1]);
  press("j");
  expect(cursorTerm()).toBe(terms[2]);
});

test("submit conflict refreshes state without losing draft marks", async () => {
  const svc = new FakeService(VOCAB);
  const { app, root } = await sessionWithBatch(svc);
  const terms = domCandidates(root);
  for (const term of terms) {
    click(root, `li[data-term="${term}"] .mark-pos`);
  }

  svc.forceError = {
    when: (method, path) => method === "POST" && path.endsWith("/labels"),
    status: 409,
    payload: { error: "conflict", detail: "label batch is stale" },
  };
  click(root, "#submit");
  await app.settled();

  expect(text(root, "#banner")).toBe("conflict: label batch is stale");
  // state was re-synced from the service
  const refetch = svc.log[svc.log.length - 1];
  expect(refetch.method).toBe("GET");
  expect(refetch.path).toMatch(/^\/sessions\/fake\d+$/);
  // the marks survived, so the batch can be submitted again
  expect(domCandidates(root)).toEqual(terms);
  expect(submitEnabled(root)).toBe(true);

  click(root, "#submit");
  await app.settled();
  expect(text(root, "#round-result")).toContain("5");
});

test("reload mid-batch restores pending candidates and partial marks", async () => {
  const svc = new FakeService(VOCAB);
  const { root } = await sessionWithBatch(svc);
  const terms = domCandidates(root);
  click(root, `li[data-term="${terms[0]}"] .mark-pos`);
  click(root, `li[data-term="${terms[1]}"] .mark-neg`);

  // same fake, same storage, fresh DOM and App: a page reload
  const reloaded = reloadApp();
  await reloaded.app.boot();
  const root2 = reloaded.root;

  expect(domCandidates(root2)).toEqual(terms);
  expect(text(root2, "#progress-note")).toBe("2 of 5 marked");
  expect(
    root2.querySelector(`li[data-term="${terms[0]}"]`)!.classList.contains("marked-pos"),
  ).toBe(true);
  expect(
    root2.querySelector(`li[data-term="${terms[1]}"]`)!.classList.contains("marked-neg"),
  ).toBe(true);
  expect(submitEnabled(root2)).toBe(false);
});

test("exhausted vocabulary surfaces as an error banner", async () => {
  const svc = new FakeService(["a", "b", "c", "d"]);
  const { app, root } = await bootApp(svc);
  await createDefaultSession(app, root, { k: "2", pos: "a", neg: "b" });

  click(root, "#fetch");
  await app.settled();
  press("p");
  press("p");
  click(root, "#submit");
  await app.settled();

  click(root, "#fetch");
  await app.settled();
  expect(text(root, "#banner")).toContain("vocabulary exhausted");
  expect(root.querySelector("#candidates")).toBeNull();
});
