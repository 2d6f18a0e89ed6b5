// Dashboard bootstrap: independent polling loops per view, query controls
// for the history/compare/week forms, advisory banner, admin form.

import { ApiError, Client } from "./api.js";
import { el } from "./dom.js";
import { startPolling } from "./poll.js";
import { renderAdmin } from "./views/admin.js";
import { renderAdvisories, renderAlerts } from "./views/alerts.js";
import {
  renderCompare,
  renderHistory,
  renderWeek,
  renderWeekError,
  weekStartTooOld,
} from "./views/history.js";
import { renderPosition } from "./views/position.js";
import { renderRealtime } from "./views/realtime.js";
import { renderVolume } from "./views/volume.js";

const client = new Client();

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const meta = await client.meta();
  const node = meta.nodes[0] ?? "n1";
  const pollMs = meta.poll_ms;

  const volumeBox = must("volume");
  const realtimeBox = must("realtime");
  const advisoryBox = must("advisories");
  const alertsBox = must("alerts");
  const positionBox = must("position");

  startPolling(async () => renderVolume(volumeBox, await client.volume()), pollMs);
  startPolling(async () => {
    const rt = await client.realtime(node);
    renderRealtime(realtimeBox, rt);
    renderAdvisories(advisoryBox, rt.advisories);
  }, pollMs);
  startPolling(async () => renderAlerts(alertsBox, await client.alerts()), pollMs);
  startPolling(async () => renderPosition(positionBox, await client.position(node)), pollMs);

  wireHistoryForms(meta.now, node);

  renderAdmin(must("admin"), meta.admin_enabled, (address, action) => {
    void client.setWhitelist(address, action);
  });
}

function wireHistoryForms(nowMs: number, node: string): void {
  const historyBox = must("history");
  const compareBox = must("compare");
  const weekBox = must("week");
  const weekError = must("week-error");

  const dayInput = must("day-input") as HTMLInputElement;
  const hourInput = must("hour-input") as HTMLInputElement;
  const fieldInput = must("field-input") as HTMLSelectElement;
  const weekInput = must("week-input") as HTMLInputElement;

  const today = new Date(nowMs).toISOString().slice(0, 10);
  dayInput.value = today;
  weekInput.value = today;

  const runDay = async () => {
    const field = fieldInput.value;
    renderHistory(historyBox, await client.history(node, field, dayInput.value));
    const hour = Number(hourInput.value || "0");
    renderCompare(compareBox, await client.compare(node, field, dayInput.value, hour));
  };
  const runWeek = async () => {
    renderWeekError(weekError, "");
    if (weekStartTooOld(weekInput.value, nowMs)) {
      renderWeekError(weekError, "week start is more than a year old");
      return;
    }
    try {
      renderWeek(weekBox, await client.week(node, fieldInput.value, weekInput.value));
    } catch (err) {
      if (err instanceof ApiError) {
        renderWeekError(weekError, err.message);
      } else {
        throw err;
      }
    }
  };

  (must("day-go") as HTMLButtonElement).onclick = () => void runDay();
  (must("week-go") as HTMLButtonElement).onclick = () => void runWeek();
  void runDay();
  void runWeek();
}

boot().catch((err) => {
  document.body.appendChild(el("div", "boot-error", `failed to load: ${err}`));
});
