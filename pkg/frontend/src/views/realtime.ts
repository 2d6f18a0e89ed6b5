// Realtime strip: latest value per field for the selected node.

import { clear, el, numberLabel, secondsLabel } from "../dom.js";
import type { RealtimeResponse } from "../types.js";

export function renderRealtime(root: HTMLElement, r: RealtimeResponse): void {
  clear(root);
  root.appendChild(el("h2", "", `Live readings: ${r.node}`));
  const row = el("div", "stat-row");
  for (const [field, snap] of Object.entries(r.readings)) {
    const cell = el("div", snap === null ? "stat empty" : "stat");
    cell.appendChild(el("span", "stat-label", field));
    cell.appendChild(
      el("span", "stat-value", snap === null ? "–" : numberLabel(snap.value)),
    );
    if (snap !== null) {
      cell.appendChild(el("span", "stat-when", `at ${secondsLabel(snap.sampled_at)}`));
    }
    row.appendChild(cell);
  }
  root.appendChild(row);
}
