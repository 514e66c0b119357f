/** Browser entry point: wires the API client, session runner, ranking form,
 * and dashboards into #app. State lives on the server; refresh rebuilds the
 * same view from GET requests alone. */

import { ApiClient, ApiError } from "./api.js";
import { convergenceHtml, confusionTableHtml, emptyDashboardHtml, importanceListHtml } from "./dashboard.js";
import { rankingFormHtml } from "./rankingForm.js";
import { errorScreenHtml, sessionTimelineHtml } from "./sessionView.js";
import { SessionRunState } from "./state.js";
import { Countdown } from "./timer.js";
import { EMOTION_NAMES, EMOTIONS, type SessionPlan, type TrainResponse } from "./types.js";

const params = new URLSearchParams(location.search);
const baseUrl =
  params.get("api") ?? localStorage.getItem("emobaseline.api") ?? "http://127.0.0.1:8410";
localStorage.setItem("emobaseline.api", baseUrl);

const api = new ApiClient(baseUrl);
const app = document.getElementById("app")!;

let subjectId = localStorage.getItem("emobaseline.subject") ?? "";
let runState: SessionRunState | null = null;
let countdown: Countdown | null = null;
let revealTargets = false;
let ticker: number | undefined;
let lastTraining: TrainResponse | null = null;

function setView(html: string): void {
  app.innerHTML = html;
}

function fail(err: unknown): void {
  const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  setView(errorScreenHtml(message));
  document.getElementById("retry")?.addEventListener("click", () => void showSession());
}

async function ensureSubject(): Promise<string> {
  if (subjectId) return subjectId;
  // default questionnaire: neutral affinity for one broad tag per emotion
  const questionnaire = EMOTIONS.map((emotion) => ({
    emotion,
    tag: "general",
    affinity: 5,
  }));
  const created = await api.createSubject(questionnaire);
  subjectId = created.subject_id;
  localStorage.setItem("emobaseline.subject", subjectId);
  return subjectId;
}

function startTicker(): void {
  stopTicker();
  ticker = window.setInterval(() => {
    if (!runState || runState.finished) return;
    const item = runState.plan.items[runState.cursor];
    if (item.kind === "rest" && countdown?.done) {
      runState.advance();
      prepareCountdown();
    }
    renderSession();
  }, 1000);
}

function stopTicker(): void {
  if (ticker !== undefined) window.clearInterval(ticker);
  ticker = undefined;
}

function prepareCountdown(): void {
  countdown = null;
  const item = runState?.current;
  if (item && item.kind === "rest") {
    countdown = new Countdown(item.duration_s);
    countdown.start();
  }
}

function renderSession(): void {
  if (!runState) return;
  if (runState.finished) {
    stopTicker();
    renderRankingPhase();
    return;
  }
  setView(sessionTimelineHtml(runState, countdown?.remainingS ?? null, revealTargets));
  document.getElementById("advance")?.addEventListener("click", () => {
    runState!.advance();
    prepareCountdown();
    renderSession();
  });
  document.getElementById("reveal")?.addEventListener("click", () => {
    revealTargets = !revealTargets;
    renderSession();
  });
}

function bindRankingInputs(): void {
  app.querySelectorAll<HTMLSelectElement>("select.score").forEach((el) =>
    el.addEventListener("change", () => {
      runState!.updateDraft(el.dataset.clip!, {
        score: el.value ? Number(el.value) : null,
      });
      renderRankingPhase();
    }),
  );
  app.querySelectorAll<HTMLSelectElement>("select.evoked").forEach((el) =>
    el.addEventListener("change", () =>
      runState!.updateDraft(el.dataset.clip!, {
        evoked_emotion: el.value ? Number(el.value) : null,
      }),
    ),
  );
  app.querySelectorAll<HTMLInputElement>("input.span-start").forEach((el) =>
    el.addEventListener("change", () =>
      runState!.updateDraft(el.dataset.clip!, {
        span_start: el.value ? Number(el.value) : null,
      }),
    ),
  );
  app.querySelectorAll<HTMLInputElement>("input.span-end").forEach((el) =>
    el.addEventListener("change", () =>
      runState!.updateDraft(el.dataset.clip!, {
        span_end: el.value ? Number(el.value) : null,
      }),
    ),
  );
  app.querySelectorAll<HTMLInputElement>("input.notes").forEach((el) =>
    el.addEventListener("change", () =>
      runState!.updateDraft(el.dataset.clip!, { notes: el.value }),
    ),
  );
}

function renderRankingPhase(serverErrors: Record<string, string> = {}): void {
  if (!runState) return;
  setView(rankingFormHtml(runState, serverErrors));
  bindRankingInputs();
  const form = app.querySelector<HTMLFormElement>("form.rankings");
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    void submitRankings();
  });
}

async function submitRankings(): Promise<void> {
  if (!runState) return;
  try {
    const response = await api.submitRankings(
      subjectId,
      runState.plan.session_id,
      runState.toSubmission(),
    );
    const next = await api.nextSession(subjectId);
    const preview = new SessionRunState(next);
    setView(
      `<p class="accepted">${response.accepted} rankings accepted; convergence: ` +
        `<strong>${response.convergence.status}</strong></p>` +
        `<div class="preview"><h2>Next session preview</h2>` +
        sessionTimelineHtml(preview, null, false) +
        `</div><button id="run-next" class="primary">Run this session</button>`,
    );
    document.getElementById("run-next")?.addEventListener("click", () => {
      runState = preview;
      prepareCountdown();
      startTicker();
      renderSession();
    });
  } catch (err) {
    if (err instanceof ApiError && runState) {
      renderRankingPhase({ "*": err.message });
      const note = document.createElement("p");
      note.className = "server-error";
      note.textContent = `${err.code}: ${err.message}`;
      app.prepend(note);
    } else {
      fail(err);
    }
  }
}

async function showSession(): Promise<void> {
  setView(`<p class="loading">Loading next session…</p>`);
  try {
    await ensureSubject();
    const plan: SessionPlan = await api.nextSession(subjectId);
    runState = new SessionRunState(plan);
    revealTargets = false;
    prepareCountdown();
    startTicker();
    renderSession();
  } catch (err) {
    fail(err);
  }
}

async function showDashboard(): Promise<void> {
  stopTicker();
  setView(`<p class="loading">Loading dashboard…</p>`);
  try {
    await ensureSubject();
    const convergence = await api.convergence(subjectId);
    let html = `<h2>Convergence</h2>` + convergenceHtml(convergence);
    if (lastTraining?.report.confusion) {
      html += `<h2>Confusion matrix</h2>` + confusionTableHtml(lastTraining.report.confusion);
    }
    if (lastTraining) {
      try {
        const imp = await api.importance(lastTraining.model_id);
        html += `<h2>Variable importance</h2>` + importanceListHtml(imp.importance);
      } catch {
        // non-forest models have no importance; skip the panel
      }
    }
    if (!lastTraining) {
      html += `<h2>Training</h2>` + emptyDashboardHtml();
      html += `<button id="train" class="primary">Build dataset &amp; train RF (binary, 10-fold)</button>`;
    }
    setView(html);
    document.getElementById("train")?.addEventListener("click", () => void trainNow());
  } catch (err) {
    fail(err);
  }
}

async function trainNow(): Promise<void> {
  setView(`<p class="loading">Building dataset and training…</p>`);
  try {
    const dataset = await api.buildDataset(subjectId, { w: 32 });
    lastTraining = await api.train(subjectId, {
      classifier: "rf",
      seed: 0,
      dataset_id: dataset.dataset_id,
      binary: true,
      cv_folds: 10,
    });
    await showDashboard();
  } catch (err) {
    fail(err);
  }
}

document.getElementById("tab-session")?.addEventListener("click", () => void showSession());
document.getElementById("tab-dashboard")?.addEventListener("click", () => void showDashboard());
document.getElementById("api-base")?.append(baseUrl);

void showSession();

export { EMOTION_NAMES };
