// Hand-rolled SVG charts. Gap buckets become breaks in the path, never
// zeros: a missing hour must not draw as a zero-degree hour.

const SVG_NS = "http://www.w3.org/2000/svg";

export interface Series {
  values: (number | null)[];
  className: string;
}

function scale(values: (number | null)[][]): { lo: number; hi: number } {
  const present = values.flat().filter((v): v is number => v !== null);
  if (present.length === 0) return { lo: 0, hi: 1 };
  let lo = Math.min(...present);
  let hi = Math.max(...present);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = (hi - lo) * 0.08;
  return { lo: lo - pad, hi: hi + pad };
}

export function linePath(
  values: (number | null)[],
  width: number,
  height: number,
  lo: number,
  hi: number,
): string {
  const n = values.length;
  const step = n > 1 ? width / (n - 1) : 0;
  let path = "";
  let pen = false;
  values.forEach((v, i) => {
    if (v === null) {
      pen = false; // gap: lift the pen
      return;
    }
    const x = i * step;
    const y = height - ((v - lo) / (hi - lo)) * height;
    path += `${pen ? "L" : "M"}${x.toFixed(1)},${y.toFixed(1)}`;
    pen = true;
  });
  return path;
}

export function lineChart(
  series: Series[],
  width = 640,
  height = 160,
): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "chart");
  const { lo, hi } = scale(series.map((s) => s.values));
  for (const s of series) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", linePath(s.values, width, height, lo, hi));
    path.setAttribute("class", s.className);
    path.setAttribute("fill", "none");
    svg.appendChild(path);
  }
  return svg;
}

// Vertical high/low range bars (the week view).
export function rangeChart(
  pairs: { high: number | null; low: number | null }[],
  width = 640,
  height = 160,
): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "chart");
  const { lo, hi } = scale([
    pairs.map((p) => p.high),
    pairs.map((p) => p.low),
  ]);
  const slot = width / pairs.length;
  pairs.forEach((p, i) => {
    if (p.high === null || p.low === null) return;
    const x = i * slot + slot / 2;
    const yHigh = height - ((p.high - lo) / (hi - lo)) * height;
    const yLow = height - ((p.low - lo) / (hi - lo)) * height;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", x.toFixed(1));
    line.setAttribute("x2", x.toFixed(1));
    line.setAttribute("y1", yHigh.toFixed(1));
    line.setAttribute("y2", yLow.toFixed(1));
    line.setAttribute("class", "range-bar");
    svg.appendChild(line);
    for (const [y, cls] of [
      [yHigh, "range-cap high"],
      [yLow, "range-cap low"],
    ] as const) {
      const cap = document.createElementNS(SVG_NS, "line");
      cap.setAttribute("x1", (x - 6).toFixed(1));
      cap.setAttribute("x2", (x + 6).toFixed(1));
      cap.setAttribute("y1", y.toFixed(1));
      cap.setAttribute("y2", y.toFixed(1));
      cap.setAttribute("class", cls);
      svg.appendChild(cap);
    }
  });
  return svg;
}
