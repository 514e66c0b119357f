/** Small HTML helpers shared by the views (no framework, just strings). */

export function esc(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function pct(fraction: number, digits = 1): string {
  return `${(100 * fraction).toFixed(digits)}%`;
}
