// Position view: the node marker on a plain lat/lon grid (no external map
// service) with the fix age, highlighted while a GPS tamper alert is live.

import { clear, el, numberLabel } from "../dom.js";
import type { PositionResponse } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 240;
const SPAN_DEG = 0.02; // grid window around the fix

export function renderPosition(root: HTMLElement, p: PositionResponse): void {
  clear(root);
  root.appendChild(el("h2", "", `Position: ${p.node}`));
  if (p.fix === null) {
    root.appendChild(el("div", "empty", "no GPS fix yet"));
    return;
  }
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute("class", p.tamper_active ? "map tampered" : "map");
  for (let i = 1; i < 4; i++) {
    for (const [x1, y1, x2, y2] of [
      [(SIZE / 4) * i, 0, (SIZE / 4) * i, SIZE],
      [0, (SIZE / 4) * i, SIZE, (SIZE / 4) * i],
    ]) {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(x1));
      line.setAttribute("y1", String(y1));
      line.setAttribute("x2", String(x2));
      line.setAttribute("y2", String(y2));
      line.setAttribute("class", "grid-line");
      svg.appendChild(line);
    }
  }
  const marker = document.createElementNS(SVG_NS, "circle");
  marker.setAttribute("cx", String(SIZE / 2));
  marker.setAttribute("cy", String(SIZE / 2));
  marker.setAttribute("r", "6");
  marker.setAttribute("class", p.tamper_active ? "marker tampered" : "marker");
  svg.appendChild(marker);
  root.appendChild(svg);

  const info = el("div", "fix-info");
  info.appendChild(el("span", "fix-coords", `${numberLabel(p.fix.lat, 5)}, ${numberLabel(p.fix.lon, 5)}`));
  const age = (p.now - p.fix.at) / 1000;
  info.appendChild(el("span", "fix-age", `updated ${age.toFixed(0)}s ago`));
  info.appendChild(
    el("span", "grid-span", `grid ${SPAN_DEG}° across`),
  );
  if (p.tamper_active) {
    info.appendChild(el("span", "tamper-flag", "GPS TAMPER WARNING"));
  }
  root.appendChild(info);
}
