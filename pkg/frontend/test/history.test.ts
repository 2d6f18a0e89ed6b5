import { beforeEach, describe, expect, it } from "vitest";

import {
  renderCompare,
  renderHistory,
  renderWeek,
  renderWeekError,
  weekStartTooOld,
} from "../src/views/history.js";
import type {
  CompareResponse,
  ErrorBody,
  HistoryResponse,
  WeekResponse,
} from "../src/types.js";
import { loadFixture } from "./fixtures.js";

const history = loadFixture<HistoryResponse>("history");
const compare = loadFixture<CompareResponse>("compare");
const week = loadFixture<WeekResponse>("week");
const weekError = loadFixture<ErrorBody>("week_error");

let root: HTMLElement;
beforeEach(() => {
  root = document.createElement("div");
});

describe("history view", () => {
  it("renders 24 hourly buckets with gaps marked", () => {
    renderHistory(root, history);
    const cells = root.querySelectorAll(".bucket");
    expect(cells.length).toBe(24);
    const gaps = root.querySelectorAll(".bucket.gap");
    expect(gaps.length).toBe(history.buckets.filter((b) => b.gap).length);
  });

  it("renders bucket averages verbatim (2 decimals)", () => {
    renderHistory(root, history);
    const first = history.buckets.findIndex((b) => !b.gap);
    expect(first).toBeGreaterThanOrEqual(0);
    const cell = root.querySelectorAll(".bucket")[first];
    expect(cell.textContent).toContain(history.buckets[first].avg!.toFixed(2));
  });

  it("draws gap buckets as path breaks, not zeros", () => {
    renderHistory(root, history);
    const d = root.querySelector("path")?.getAttribute("d") ?? "";
    const moves = (d.match(/M/g) ?? []).length;
    expect(moves).toBeGreaterThanOrEqual(1); // contiguous data: one pen-down per run
    const points = (d.match(/[ML]/g) ?? []).length;
    expect(points).toBe(history.buckets.filter((b) => !b.gap).length);
  });
});

describe("compare view", () => {
  it("overlays today against the same period yesterday", () => {
    renderCompare(root, compare);
    expect(root.querySelectorAll("path").length).toBe(2);
    expect(root.querySelector(".line.previous")).not.toBeNull();
    const legend = root.querySelector(".legend-current");
    const firstCurrent = compare.current.find((b) => !b.gap);
    if (firstCurrent) {
      expect(legend?.textContent).toContain(firstCurrent.avg!.toFixed(2));
    }
  });
});

describe("week view", () => {
  it("renders seven day cells with high/low verbatim", () => {
    renderWeek(root, week);
    const cells = root.querySelectorAll(".bucket");
    expect(cells.length).toBe(7);
    week.days.forEach((d, i) => {
      if (d.gap) {
        expect(cells[i].textContent).toContain("no data");
      } else {
        expect(cells[i].textContent).toContain(d.high!.toFixed(2));
        expect(cells[i].textContent).toContain(d.low!.toFixed(2));
      }
    });
  });

  it("draws one range bar per day with data", () => {
    renderWeek(root, week);
    const bars = root.querySelectorAll(".range-bar");
    expect(bars.length).toBe(week.days.filter((d) => !d.gap).length);
  });

  it("surfaces the server's 400 error inline without touching the chart", () => {
    renderWeek(root, week);
    const chartBefore = root.innerHTML;
    const errorBox = document.createElement("span");
    renderWeekError(errorBox, weekError.error);
    expect(errorBox.textContent).toBe(weekError.error);
    expect(root.innerHTML).toBe(chartBefore);
  });

  it("rejects out-of-year dates client-side", () => {
    const now = Date.parse("1971-02-10T00:00:00Z");
    expect(weekStartTooOld("1970-01-01", now)).toBe(true);
    expect(weekStartTooOld("1971-01-01", now)).toBe(false);
  });
});
