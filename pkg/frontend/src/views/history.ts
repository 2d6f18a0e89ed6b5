// History view: the 24h hourly line, the previous-day comparison overlay,
// and the week high/low chart. Gap buckets draw as breaks. A failed week
// query surfaces the server's error text inline and leaves the last chart
// alone.

import { lineChart, rangeChart } from "../chart.js";
import { clear, el, numberLabel } from "../dom.js";
import type { CompareResponse, HistoryResponse, WeekResponse } from "../types.js";

export function renderHistory(root: HTMLElement, h: HistoryResponse): void {
  clear(root);
  root.appendChild(el("h2", "", `24h history: ${h.field} at ${h.node}`));
  root.appendChild(
    lineChart([{ values: h.buckets.map((b) => b.avg), className: "line current" }]),
  );
  const row = el("div", "bucket-row");
  h.buckets.forEach((b, hour) => {
    const cell = el(
      "span",
      b.gap ? "bucket gap" : "bucket",
      b.gap ? `${hour}h –` : `${hour}h ${numberLabel(b.avg)}`,
    );
    cell.title = b.gap
      ? "no data"
      : `min ${numberLabel(b.min)} max ${numberLabel(b.max)}`;
    row.appendChild(cell);
  });
  root.appendChild(row);
}

export function renderCompare(root: HTMLElement, c: CompareResponse): void {
  clear(root);
  root.appendChild(el("h2", "", `${c.field} at ${c.node} vs previous day`));
  root.appendChild(
    lineChart([
      { values: c.previous.map((b) => b.avg), className: "line previous" },
      { values: c.current.map((b) => b.avg), className: "line current" },
    ]),
  );
  const legend = el("div", "legend");
  const cur = c.current.filter((b) => !b.gap);
  const prev = c.previous.filter((b) => !b.gap);
  legend.appendChild(
    el("span", "legend-current", `today: ${cur.length ? numberLabel(cur[0].avg) : "–"}`),
  );
  legend.appendChild(
    el(
      "span",
      "legend-previous",
      `yesterday: ${prev.length ? numberLabel(prev[0].avg) : "–"}`,
    ),
  );
  root.appendChild(legend);
}

export function renderWeek(root: HTMLElement, w: WeekResponse): void {
  clear(root);
  root.appendChild(el("h2", "", `Week of daily extremes: ${w.field} at ${w.node}`));
  root.appendChild(rangeChart(w.days.map((d) => ({ high: d.high, low: d.low }))));
  const row = el("div", "bucket-row");
  w.days.forEach((d, i) => {
    const label = d.gap
      ? `day ${i}: no data`
      : `day ${i}: ${numberLabel(d.high)} / ${numberLabel(d.low)}`;
    row.appendChild(el("span", d.gap ? "bucket gap" : "bucket", label));
  });
  root.appendChild(row);
}

export function renderWeekError(errorBox: HTMLElement, message: string): void {
  clear(errorBox);
  errorBox.appendChild(el("span", "error-message", message));
}

// Client-side guard matching the server's one-year rule; the server still
// enforces it, this only saves a round trip for obviously stale dates.
export function weekStartTooOld(startIso: string, nowMs: number): boolean {
  const start = Date.parse(`${startIso}T00:00:00Z`);
  if (Number.isNaN(start)) return false;
  return start < nowMs - 365 * 24 * 3600 * 1000;
}
