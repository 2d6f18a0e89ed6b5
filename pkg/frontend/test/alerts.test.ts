import { beforeEach, describe, expect, it } from "vitest";

import { renderAdvisories, renderAlerts } from "../src/views/alerts.js";
import type { AlertsResponse, RealtimeResponse } from "../src/types.js";
import { loadFixture } from "./fixtures.js";

const alerts = loadFixture<AlertsResponse>("alerts");
const realtime = loadFixture<RealtimeResponse>("realtime");

let root: HTMLElement;
beforeEach(() => {
  root = document.createElement("div");
});

describe("alerts view", () => {
  it("renders one row per alert in the API's (newest-first) order", () => {
    renderAlerts(root, alerts);
    const rows = root.querySelectorAll<HTMLTableRowElement>("tbody tr");
    expect(rows.length).toBe(alerts.alerts.length);
    rows.forEach((row, i) => {
      expect(row.cells[0].textContent).toBe(alerts.alerts[i].kind);
    });
  });

  it("renders kind, node, and evidence verbatim", () => {
    renderAlerts(root, alerts);
    const first = alerts.alerts[0];
    const row = root.querySelector<HTMLTableRowElement>("tbody tr")!;
    expect(row.cells[0].textContent).toBe(first.kind);
    expect(row.cells[1].textContent).toBe(first.node_id ?? "–");
    expect(row.cells[3].textContent).toBe(first.evidence);
  });

  it("shows the empty state without rows", () => {
    renderAlerts(root, { schema_version: 1, alerts: [] });
    expect(root.querySelector("table")).toBeNull();
    expect(root.textContent).toContain("no warnings");
  });
});

describe("advisory banner", () => {
  it("shows the fixture's watering advisory verbatim", () => {
    renderAdvisories(root, realtime.advisories);
    expect(realtime.advisories.length).toBeGreaterThan(0);
    expect(root.textContent).toContain(realtime.advisories[0]);
    expect(root.className).not.toContain("hidden");
  });

  it("hides itself when there is nothing to say", () => {
    renderAdvisories(root, []);
    expect(root.className).toContain("hidden");
  });
});
