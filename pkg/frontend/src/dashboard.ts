/** Dashboard builders: confusion heat table, importance bars, convergence
 * progress. Pure functions from report JSON to HTML strings. */

import { esc, pct } from "./render.js";
import type { ConfusionDict, ConvergenceReport, ImportanceRow } from "./types.js";

function heat(count: number, columnTotal: number, diagonal: boolean): string {
  const share = columnTotal > 0 ? count / columnTotal : 0;
  const alpha = Math.min(0.85, share).toFixed(2);
  const color = diagonal ? `rgba(46,125,50,${alpha})` : `rgba(198,40,40,${alpha})`;
  return `background:${color}`;
}

export function confusionTableHtml(cm: ConfusionDict): string {
  const n = cm.labels.length;
  const columnTotals = cm.labels.map((_, j) =>
    cm.counts_pred_by_actual.reduce((acc, row) => acc + row[j], 0),
  );
  let html = `<table class="confusion" data-classes="${n}"><thead><tr><th>Real \\ Pred</th>`;
  for (const name of cm.label_names) html += `<th>${esc(name)}</th>`;
  html += `<th>Class error</th></tr></thead><tbody>`;
  for (let j = 0; j < n; j++) {
    html += `<tr class="actual-row"><th>${esc(cm.label_names[j])}</th>`;
    for (let i = 0; i < n; i++) {
      const count = cm.counts_pred_by_actual[i][j];
      html += `<td style="${heat(count, columnTotals[j], i === j)}">${count}</td>`;
    }
    const err = cm.per_class_error[String(cm.labels[j])] ?? 0;
    html += `<td>${pct(err)}</td></tr>`;
  }
  html += `</tbody><tfoot><tr><th>Average error</th>`;
  html += `<td colspan="${n + 1}">${pct(cm.mean_error)}</td></tr></tfoot></table>`;
  return html;
}

export function importanceListHtml(rows: ImportanceRow[]): string {
  if (!rows.length) return `<p class="empty">No importance data.</p>`;
  const top = rows[0].score || 1;
  let html = `<ol class="importance" data-rows="${rows.length}">`;
  for (const row of rows) {
    const width = Math.max(2, Math.round((100 * row.score) / top));
    html += `<li class="importance-row"><span class="feature">${esc(row.feature)}</span>`;
    html += `<span class="bar" style="width:${width}%"></span>`;
    html += `<span class="score">${row.score.toFixed(4)}</span></li>`;
  }
  return html + `</ol>`;
}

export function convergenceHtml(report: ConvergenceReport): string {
  const names: Record<string, string> = {
    "1": "Fear", "2": "Sad/Anger", "3": "Awe/Rev",
    "4": "Disgust", "5": "Joy/Amus", "6": "Content",
  };
  const deficient = new Set(report.deficient.map(String));
  let html = `<div class="convergence" data-status="${esc(report.status)}">`;
  html += `<p>Status: <strong>${esc(report.status)}</strong> `;
  html += `(${report.sessions_completed}/${report.session_cap} sessions, `;
  html += `target ${report.target_minutes} min of rank&ge;${report.min_score} material)</p><ul>`;
  for (const code of ["1", "2", "3", "4", "5", "6"]) {
    const minutes = report.minutes[code] ?? 0;
    const width = Math.min(100, Math.round((100 * minutes) / report.target_minutes));
    const cls = deficient.has(code) ? "deficient" : "ok";
    html += `<li class="${cls}"><span class="emotion">${esc(names[code])}</span>`;
    html += `<span class="bar" style="width:${width}%"></span>`;
    html += `<span class="minutes">${minutes.toFixed(1)} min</span></li>`;
  }
  return html + `</ul></div>`;
}

export function emptyDashboardHtml(): string {
  return `<p class="empty">No training runs yet. Upload recordings, build a dataset, and train a model to populate the dashboard.</p>`;
}
