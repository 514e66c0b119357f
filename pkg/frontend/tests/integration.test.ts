/** Live round trip against the Python service:
 * fetch plan -> run the session -> submit rankings -> fetch next plan,
 * then hand both plans to the independent CLI validator. Also drives the
 * dataset/train endpoints and renders the dashboard panels from real data.
 */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { confusionTableHtml, importanceListHtml } from "../src/dashboard.js";
import { SessionRunState } from "../src/state.js";
import type { SessionPlan, TrainResponse } from "../src/types.js";

const PY = process.env.PYTHON ?? "python3";
const PORT = 8733;
const BASE = `http://127.0.0.1:${PORT}`;

let store: string;
let scratch: string;
let service: ChildProcess;
let api: ApiClient;

function py(code: string): string {
  return execFileSync(PY, ["-c", code], { encoding: "utf-8" });
}

async function waitForService(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const r = await fetch(`${BASE}/openapi.json`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  store = mkdtempSync(join(tmpdir(), "emob-store-"));
  scratch = mkdtempSync(join(tmpdir(), "emob-scratch-"));
  py(
    "from emobaseline.protocol import make_random_pool, save_pool;" +
      `save_pool(r'${store}/pool.json', make_random_pool(seed=3, clips_per_emotion=60))`,
  );
  service = spawn(
    PY,
    ["-m", "emobaseline.cli", "serve", "--store", store, "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService();
  api = new ApiClient(BASE);
}, 60_000);

afterAll(() => {
  service?.kill();
});

function questionnaireFromPool(): { emotion: number; tag: string; affinity: number }[] {
  const pool = JSON.parse(readFileSync(join(store, "pool.json"), "utf-8")) as {
    target_emotion: number;
    tags: string[];
  }[];
  const seen = new Set<string>();
  const answers: { emotion: number; tag: string; affinity: number }[] = [];
  for (const clip of pool) {
    for (const tag of clip.tags) {
      const key = `${clip.target_emotion}:${tag}`;
      if (!seen.has(key)) {
        seen.add(key);
        answers.push({ emotion: clip.target_emotion, tag, affinity: 5 });
      }
    }
  }
  return answers;
}

function validatePlanViaCli(plan: SessionPlan, history: string[]): void {
  const planPath = join(scratch, `${plan.session_id}.json`);
  const historyPath = join(scratch, `${plan.session_id}-history.json`);
  writeFileSync(planPath, JSON.stringify(plan));
  writeFileSync(historyPath, JSON.stringify(history));
  execFileSync(PY, [
    "-m", "emobaseline.cli", "validate-plan",
    "--plan", planPath,
    "--pool", join(store, "pool.json"),
    "--history", historyPath,
  ]);
}

describe("UI round trip against a live service", () => {
  let subjectId: string;

  it("runs a full session loop and the next plan validates", async () => {
    const created = await api.createSubject(questionnaireFromPool());
    subjectId = created.subject_id;
    expect(subjectId).toMatch(/^sub-/);

    const plan = await api.nextSession(subjectId);
    validatePlanViaCli(plan, []);

    const state = new SessionRunState(plan);
    while (!state.finished) state.advance();
    for (const clip of state.shownClips) {
      state.updateDraft(clip.clip_id, { score: 8, notes: "fine" });
    }
    expect(state.readyToSubmit).toBe(true);

    const response = await api.submitRankings(subjectId, plan.session_id, state.toSubmission());
    expect(response.accepted).toBe(state.shownClips.length);
    expect(["need_more", "converged"]).toContain(response.convergence.status);

    const next = await api.nextSession(subjectId);
    expect(next.session_id).not.toBe(plan.session_id);
    validatePlanViaCli(next, plan.items.filter((i) => i.kind === "clip").map((i: any) => i.clip_id));

    // refresh reconstructs the same pending plan from server state alone
    const again = await api.nextSession(subjectId);
    expect(again.session_id).toBe(next.session_id);
  }, 60_000);

  it("renders dashboard panels from live training output", async () => {
    // generate synthetic recordings locally and upload them as multipart
    const rec = join(scratch, "rec");
    py(
      "from emobaseline.cli import main;" +
        `main(['synth','--out',r'${rec}','--seed','5','--shape','blocks','--sessions','4','--block-s','128'])`,
    );
    for (const session of readdirSync(rec)) {
      const dir = join(rec, session);
      const form = new FormData();
      for (const name of readdirSync(dir)) {
        form.append("files", new Blob([readFileSync(join(dir, name))]), name);
      }
      const r = await fetch(
        `${BASE}/subjects/${subjectId}/recordings?session_id=${session}`,
        { method: "POST", body: form },
      );
      expect(r.status).toBe(201);
    }

    const dataset = await api.buildDataset(subjectId, { w: 32, trim_s: 5 });
    expect(dataset.n_instances).toBeGreaterThan(0);

    const binary: TrainResponse = await api.train(subjectId, {
      classifier: "rf",
      seed: 1,
      dataset_id: dataset.dataset_id,
      binary: true,
      cv_folds: 5,
      params: { n_trees: 30 },
    });
    expect(binary.report.confusion).toBeDefined();
    const matrixHtml = confusionTableHtml(binary.report.confusion!);
    expect(matrixHtml).toContain('data-classes="2"');
    expect((matrixHtml.match(/class="actual-row"/g) ?? []).length).toBe(2);

    const sixClass: TrainResponse = await api.train(subjectId, {
      classifier: "rf",
      seed: 1,
      dataset_id: dataset.dataset_id,
      params: { n_trees: 30 },
    });
    const importance = await api.importance(sixClass.model_id);
    expect(importance.importance).toHaveLength(16); // SKT masked by default
    const barsHtml = importanceListHtml(importance.importance);
    expect((barsHtml.match(/class="importance-row"/g) ?? []).length).toBe(16);
  }, 120_000);

  it("rejects an out-of-range score with a structured 422", async () => {
    const plan = await api.nextSession(subjectId);
    const clip = plan.items.find((i) => i.kind === "clip") as { clip_id: string };
    await expect(
      api.submitRankings(subjectId, plan.session_id, [{ clip_id: clip.clip_id, score: 0 }]),
    ).rejects.toMatchObject({ status: 422, code: "ValidationError" });
  });
});
