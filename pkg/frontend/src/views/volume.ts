// Volume view: the 160-bucket per-second trend, the aggregated running
// total, and the rate-of-change badge. The badge flags itself using the
// thresholds the API reports; the client brings no thresholds of its own.

import { lineChart } from "../chart.js";
import { clear, el } from "../dom.js";
import type { VolumeResponse } from "../types.js";

export function rateBadgeText(rate: number | null): string {
  return rate === null ? "n/a" : `${(rate * 100).toFixed(1)}%`;
}

export function rateBadgeClass(v: VolumeResponse): string {
  if (v.rate === null) return "badge";
  if (v.rate >= v.rise_threshold) return "badge flag rise";
  if (v.rate <= -v.drop_threshold) return "badge flag drop";
  return "badge";
}

export function renderVolume(root: HTMLElement, v: VolumeResponse): void {
  clear(root);
  const head = el("div", "view-head");
  head.appendChild(el("h2", "", "Data volume"));
  const badge = el("span", rateBadgeClass(v), rateBadgeText(v.rate));
  badge.setAttribute("data-role", "rate-badge");
  head.appendChild(badge);
  root.appendChild(head);

  const stats = el("div", "stat-row");
  const entries: [string, string][] = [
    ["aggregated", String(v.aggregated)],
    [`last ${v.window_s}s`, String(v.recent)],
    [`prior ${v.window_s}s`, String(v.prior)],
  ];
  for (const [label, value] of entries) {
    const cell = el("div", "stat");
    cell.appendChild(el("span", "stat-label", label));
    const num = el("span", "stat-value", value);
    num.setAttribute("data-role", `stat-${label.split(" ")[0]}`);
    cell.appendChild(num);
    stats.appendChild(cell);
  }
  root.appendChild(stats);

  root.appendChild(lineChart([{ values: v.trend, className: "line trend" }]));
  root.appendChild(
    el("div", "chart-note", `per-second receive counts, trailing ${v.trend.length}s`),
  );
}
