/** String rendering helpers shared by all views. */

export function escapeHtml(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/**
 * A value display: the API field, stringified, nothing else. Views must
 * route every number through this so no rounding or recomputation can
 * sneak in.
 */
export function verbatim(value: unknown): string {
  return escapeHtml(String(value));
}

export function timeRange(range: [number, number] | null): string {
  if (!range) return "";
  return `[${verbatim(range[0])}, ${verbatim(range[1])}]`;
}
