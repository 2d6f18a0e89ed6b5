// Alerts view: the warning table, newest first, exactly as the API orders
// it. Every cell is a verbatim API field (times formatted as seconds).

import { clear, el, secondsLabel } from "../dom.js";
import type { AlertsResponse } from "../types.js";

export function renderAlerts(root: HTMLElement, a: AlertsResponse): void {
  clear(root);
  root.appendChild(el("h2", "", `Warnings (${a.alerts.length})`));
  if (a.alerts.length === 0) {
    root.appendChild(el("div", "empty", "no warnings"));
    return;
  }
  const table = el("table", "alert-table") as HTMLTableElement;
  const head = table.createTHead().insertRow();
  for (const title of ["kind", "node", "time", "evidence"]) {
    head.appendChild(el("th", "", title));
  }
  const body = table.createTBody();
  for (const alert of a.alerts) {
    const row = body.insertRow();
    row.className = `alert-row ${alert.kind}`;
    row.insertCell().textContent = alert.kind;
    row.insertCell().textContent = alert.node_id ?? "–";
    row.insertCell().textContent = secondsLabel(alert.detected_at);
    row.insertCell().textContent = alert.evidence;
  }
  root.appendChild(table);
}

export function renderAdvisories(root: HTMLElement, advisories: string[]): void {
  clear(root);
  if (advisories.length === 0) {
    root.className = "advisory-banner hidden";
    return;
  }
  root.className = "advisory-banner";
  for (const text of advisories) {
    root.appendChild(el("div", "advisory", text));
  }
}
