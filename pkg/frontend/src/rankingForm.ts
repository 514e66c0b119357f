/** Post-session ranking form: one required 1-10 score per shown clip,
 * optional evoked-emotion correction, effective span, and notes. */

import { esc } from "./render.js";
import type { SessionRunState } from "./state.js";
import { EMOTION_NAMES, EMOTIONS } from "./types.js";

export function rankingFormHtml(
  state: SessionRunState,
  serverErrors: Record<string, string> = {},
): string {
  const clips = state.shownClips;
  if (!clips.length) return `<p class="empty">No clips were shown.</p>`;
  let html = `<form class="rankings" data-session="${esc(state.plan.session_id)}">`;
  html += `<h2>Rank the clips (1 = ineffective, 10 = fully evoked)</h2>`;
  for (const clip of clips) {
    const draft = state.drafts.get(clip.clip_id)!;
    const err = serverErrors[clip.clip_id];
    html += `<fieldset class="clip-ranking" data-clip="${esc(clip.clip_id)}">`;
    html += `<legend>${esc(clip.title || clip.clip_id)}</legend>`;
    html += `<label>Score <select class="score" data-clip="${esc(clip.clip_id)}" required>`;
    html += `<option value="">--</option>`;
    for (let s = 1; s <= 10; s++) {
      const selected = draft.score === s ? " selected" : "";
      html += `<option value="${s}"${selected}>${s}</option>`;
    }
    html += `</select></label>`;
    html += `<label>Evoked emotion (if different) <select class="evoked" data-clip="${esc(clip.clip_id)}">`;
    html += `<option value="">as targeted</option>`;
    for (const code of EMOTIONS) {
      const selected = draft.evoked_emotion === code ? " selected" : "";
      html += `<option value="${code}"${selected}>${esc(EMOTION_NAMES[code])}</option>`;
    }
    html += `</select></label>`;
    html += `<label>Most effective part (s) `;
    html += `<input class="span-start" data-clip="${esc(clip.clip_id)}" type="number" min="0" placeholder="from" value="${draft.span_start ?? ""}">`;
    html += `<input class="span-end" data-clip="${esc(clip.clip_id)}" type="number" min="0" placeholder="to" value="${draft.span_end ?? ""}"></label>`;
    html += `<label>Notes <input class="notes" data-clip="${esc(clip.clip_id)}" type="text" value="${esc(draft.notes)}"></label>`;
    if (err) html += `<p class="server-error">${esc(err)}</p>`;
    html += `</fieldset>`;
  }
  const disabled = state.readyToSubmit ? "" : " disabled";
  html += `<button id="submit-rankings" class="primary" type="submit"${disabled}>Submit rankings</button>`;
  const problems = state.draftProblems();
  if (problems.length) {
    html += `<ul class="problems">`;
    for (const p of problems) html += `<li>${esc(p)}</li>`;
    html += `</ul>`;
  }
  return html + `</form>`;
}

export function nextSessionPreviewHtml(planHtml: string): string {
  return `<div class="preview"><h2>Next session preview</h2>${planHtml}</div>`;
}
