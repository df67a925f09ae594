/** Display helpers: countdowns, local dates, odds. Pure functions. */

/** hh:mm:ss until kickoff, clamped at zero once the match has started. */
export function countdown(kickoffIso: string, now: Date): string {
  const ms = new Date(kickoffIso).getTime() - now.getTime();
  const total = Math.max(0, Math.floor(ms / 1000));
  const h = Math.floor(total / 3600);
  const m = Math.floor((total % 3600) / 60);
  const s = total % 60;
  const pad = (n: number) => String(n).padStart(2, "0");
  return `${pad(h)}:${pad(m)}:${pad(s)}`;
}

/** Server timestamps are UTC; the operator sees local time. */
export function localDate(iso: string): string {
  const d = new Date(iso);
  const pad = (n: number) => String(n).padStart(2, "0");
  return (
    `${d.getFullYear()}-${pad(d.getMonth() + 1)}-${pad(d.getDate())} ` +
    `${pad(d.getHours())}:${pad(d.getMinutes())}:${pad(d.getSeconds())}`
  );
}

export function odds(value: number): string {
  return value.toFixed(2);
}

export function meanMedian(mean: number, median: number): string {
  return `${round8(mean)} / ${round8(median)}`;
}

function round8(value: number): string {
  return String(Math.round(value * 1e8) / 1e8);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
