/** Session runner timeline: rest countdowns and clip cards.
 *
 * The target emotion stays hidden by default so the label cannot prime the
 * subject; a reveal toggle exists for the operator.
 */

import { esc } from "./render.js";
import { formatClock } from "./timer.js";
import type { SessionRunState } from "./state.js";
import { EMOTION_NAMES } from "./types.js";

export function sessionTimelineHtml(
  state: SessionRunState,
  remainingS: number | null,
  revealTargets: boolean,
): string {
  const plan = state.plan;
  let html = `<div class="session" data-session="${esc(plan.session_id)}">`;
  html += `<h2>Session ${esc(plan.session_id)}${plan.personalized ? " (personalized)" : ""}</h2>`;
  html += `<p>${plan.items.length} blocks, ${(plan.planned_total_s / 60).toFixed(1)} min planned</p>`;
  html += `<ol class="timeline">`;
  plan.items.forEach((item, index) => {
    const current = index === state.cursor;
    const past = index < state.cursor;
    const cls = `block ${item.kind} ${current ? "current" : past ? "done" : "upcoming"}`;
    if (item.kind === "rest") {
      const clock =
        current && remainingS !== null ? formatClock(remainingS) : formatClock(item.duration_s);
      html += `<li class="${cls}">Rest <span class="countdown">${clock}</span></li>`;
    } else {
      html += `<li class="${cls}">`;
      html += `<span class="title">${esc(item.title || item.clip_id)}</span> `;
      html += `<a href="${esc(item.source_url)}" target="_blank" rel="noopener">open clip</a>`;
      const target = EMOTION_NAMES[item.target_emotion] ?? String(item.target_emotion);
      html += revealTargets
        ? ` <span class="target revealed">${esc(target)}</span>`
        : ` <span class="target hidden-target" title="hidden to avoid priming">target hidden</span>`;
      html += ` <span class="duration">${formatClock(item.duration_s)}</span></li>`;
    }
  });
  html += `</ol>`;
  if (state.finished) {
    html += `<p class="finish">Session complete.</p>`;
  } else {
    const label = state.atLastItem ? "Finish &amp; rank" : "Next block";
    html += `<button id="advance" class="primary">${label}</button>`;
  }
  html += `<button id="reveal">${revealTargets ? "Hide" : "Reveal"} target emotions</button>`;
  return html + `</div>`;
}

export function errorScreenHtml(message: string, retry = true): string {
  let html = `<div class="error-screen"><h2>Cannot run session</h2>`;
  html += `<p class="message">${esc(message)}</p>`;
  if (retry) html += `<button id="retry" class="primary">Retry</button>`;
  return html + `</div>`;
}
