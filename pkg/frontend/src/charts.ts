/**
 * SVG chart builders for the diagnostics panels. Every mark is drawn
 * straight from DiagnosticsBundle numbers; nothing is recomputed here
 * beyond pixel scaling, and each mark carries its source values as
 * data- attributes so the mapping stays auditable.
 */

import type { DiagnosticsBundle } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const WIDTH = 420;
const HEIGHT = 320;
const MARGIN = { top: 28, right: 16, bottom: 46, left: 64 };

type Scale = (value: number) => number;

function svg(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, val] of Object.entries(attrs)) {
    el.setAttribute(key, String(val));
  }
  return el as SVGElement;
}

function linearScale(
  lo: number,
  hi: number,
  rangeLo: number,
  rangeHi: number,
): Scale {
  const span = hi - lo || 1;
  return (v) => rangeLo + ((v - lo) / span) * (rangeHi - rangeLo);
}

function extent(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

function tickValues(lo: number, hi: number, count = 5): number[] {
  const step = (hi - lo) / (count - 1);
  return Array.from({ length: count }, (_, i) => lo + i * step);
}

function formatTick(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 0.01 || a >= 10000)) return v.toExponential(1);
  if (a < 1) return v.toFixed(2);
  if (a < 100) return v.toFixed(1);
  return v.toFixed(0);
}

interface Frame {
  root: SVGElement;
  x: Scale;
  y: Scale;
  xDomain: [number, number];
  yDomain: [number, number];
}

/** Axes, tick labels, and titles shared by the scatter-style charts. */
function chartFrame(
  chart: string,
  title: string,
  xLabel: string,
  yLabel: string,
  xDomain: [number, number],
  yDomain: [number, number],
): Frame {
  const root = svg("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: WIDTH,
    height: HEIGHT,
    role: "img",
  });
  root.setAttribute("data-chart", chart);

  const x = linearScale(xDomain[0], xDomain[1], MARGIN.left, WIDTH - MARGIN.right);
  const y = linearScale(yDomain[0], yDomain[1], HEIGHT - MARGIN.bottom, MARGIN.top);

  const titleEl = svg("text", {
    x: WIDTH / 2,
    y: 16,
    "text-anchor": "middle",
    class: "chart-title",
  });
  titleEl.textContent = title;
  root.append(titleEl);

  root.append(
    svg("line", {
      x1: MARGIN.left,
      y1: HEIGHT - MARGIN.bottom,
      x2: WIDTH - MARGIN.right,
      y2: HEIGHT - MARGIN.bottom,
      class: "axis",
    }),
    svg("line", {
      x1: MARGIN.left,
      y1: MARGIN.top,
      x2: MARGIN.left,
      y2: HEIGHT - MARGIN.bottom,
      class: "axis",
    }),
  );

  for (const v of tickValues(xDomain[0], xDomain[1])) {
    const label = svg("text", {
      x: x(v),
      y: HEIGHT - MARGIN.bottom + 16,
      "text-anchor": "middle",
      class: "tick",
    });
    label.textContent = formatTick(v);
    root.append(label);
  }
  for (const v of tickValues(yDomain[0], yDomain[1])) {
    const label = svg("text", {
      x: MARGIN.left - 6,
      y: y(v) + 4,
      "text-anchor": "end",
      class: "tick",
    });
    label.textContent = formatTick(v);
    root.append(label);
  }

  const xLabelEl = svg("text", {
    x: (MARGIN.left + WIDTH - MARGIN.right) / 2,
    y: HEIGHT - 8,
    "text-anchor": "middle",
    class: "axis-label",
  });
  xLabelEl.textContent = xLabel;
  const yLabelEl = svg("text", {
    x: 14,
    y: (MARGIN.top + HEIGHT - MARGIN.bottom) / 2,
    "text-anchor": "middle",
    class: "axis-label",
    transform: `rotate(-90 14 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})`,
  });
  yLabelEl.textContent = yLabel;
  root.append(xLabelEl, yLabelEl);

  return { root, x, y, xDomain, yDomain };
}

function identityLine(frame: Frame): SVGElement {
  const lo = Math.max(frame.xDomain[0], frame.yDomain[0]);
  const hi = Math.min(frame.xDomain[1], frame.yDomain[1]);
  return svg("line", {
    x1: frame.x(lo),
    y1: frame.y(lo),
    x2: frame.x(hi),
    y2: frame.y(hi),
    class: "reference",
    "stroke-dasharray": "4 3",
  });
}

/** Held-out actual vs predicted values with the y = x reference. */
export function renderScatterChart(
  container: HTMLElement,
  bundle: DiagnosticsBundle,
): SVGElement {
  const actuals = bundle.pairs.map((p) => p[0]);
  const predicted = bundle.pairs.map((p) => p[1]);
  const domain = extent([...actuals, ...predicted]);
  const frame = chartFrame(
    "scatter",
    "Actual vs predicted",
    "Actual modulus (GPa)",
    "Predicted modulus (GPa)",
    domain,
    domain,
  );
  frame.root.append(identityLine(frame));
  for (const [actual, pred] of bundle.pairs) {
    const dot = svg("circle", {
      cx: frame.x(actual),
      cy: frame.y(pred),
      r: 4,
      class: "point",
      "data-actual": actual,
      "data-predicted": pred,
    });
    frame.root.append(dot);
  }
  container.append(frame.root);
  return frame.root;
}

/** Residuals against predicted values around a zero line. */
export function renderResidualChart(
  container: HTMLElement,
  bundle: DiagnosticsBundle,
): SVGElement {
  const predicted = bundle.pairs.map((p) => p[1]);
  const frame = chartFrame(
    "residual",
    "Residuals",
    "Predicted modulus (GPa)",
    "Residual (GPa)",
    extent(predicted),
    extent(bundle.residuals),
  );
  frame.root.append(
    svg("line", {
      x1: frame.x(frame.xDomain[0]),
      y1: frame.y(0),
      x2: frame.x(frame.xDomain[1]),
      y2: frame.y(0),
      class: "reference",
      "stroke-dasharray": "4 3",
    }),
  );
  bundle.residuals.forEach((residual, i) => {
    frame.root.append(
      svg("circle", {
        cx: frame.x(predicted[i]),
        cy: frame.y(residual),
        r: 4,
        class: "point",
        "data-residual": residual,
      }),
    );
  });
  container.append(frame.root);
  return frame.root;
}

/** Standardized residual quantiles against normal quantiles. */
export function renderQqChart(
  container: HTMLElement,
  bundle: DiagnosticsBundle,
): SVGElement {
  const theoretical = bundle.qq.map((p) => p[0]);
  const observed = bundle.qq.map((p) => p[1]);
  const domain = extent([...theoretical, ...observed]);
  const frame = chartFrame(
    "qq",
    "Residual normality",
    "Theoretical quantiles",
    "Observed quantiles",
    domain,
    domain,
  );
  frame.root.append(identityLine(frame));
  for (const [t, o] of bundle.qq) {
    frame.root.append(
      svg("circle", {
        cx: frame.x(t),
        cy: frame.y(o),
        r: 4,
        class: "point",
        "data-theoretical": t,
        "data-observed": o,
      }),
    );
  }
  container.append(frame.root);
  return frame.root;
}

const HEAT_CELL = 44;
const HEAT_LEFT = 110;
const HEAT_TOP = 34;

function heatColor(r: number): string {
  // -1 -> blue, 0 -> white, +1 -> red
  const clamped = Math.max(-1, Math.min(1, r));
  const other = Math.round(255 * (1 - Math.abs(clamped)));
  return clamped >= 0
    ? `rgb(255, ${other}, ${other})`
    : `rgb(${other}, ${other}, 255)`;
}

/** Feature/target correlation matrix as a colored grid. */
export function renderHeatmapChart(
  container: HTMLElement,
  bundle: DiagnosticsBundle,
): SVGElement {
  const n = bundle.labels.length;
  const width = HEAT_LEFT + n * HEAT_CELL + 16;
  const height = HEAT_TOP + n * HEAT_CELL + 90;
  const root = svg("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
    role: "img",
  });
  root.setAttribute("data-chart", "heatmap");

  const title = svg("text", {
    x: width / 2,
    y: 16,
    "text-anchor": "middle",
    class: "chart-title",
  });
  title.textContent = "Feature correlation";
  root.append(title);

  bundle.correlation.forEach((row, i) => {
    row.forEach((r, j) => {
      const cell = svg("rect", {
        x: HEAT_LEFT + j * HEAT_CELL,
        y: HEAT_TOP + i * HEAT_CELL,
        width: HEAT_CELL - 2,
        height: HEAT_CELL - 2,
        fill: heatColor(r),
        class: "cell",
        "data-row": bundle.labels[i],
        "data-col": bundle.labels[j],
        "data-r": r,
      });
      const tip = svg("title", {});
      tip.textContent = `${bundle.labels[i]} x ${bundle.labels[j]}: ${r.toFixed(3)}`;
      cell.append(tip);
      const text = svg("text", {
        x: HEAT_LEFT + j * HEAT_CELL + (HEAT_CELL - 2) / 2,
        y: HEAT_TOP + i * HEAT_CELL + HEAT_CELL / 2 + 3,
        "text-anchor": "middle",
        class: "cell-value",
      });
      text.textContent = r.toFixed(2);
      root.append(cell, text);
    });
    const rowLabel = svg("text", {
      x: HEAT_LEFT - 8,
      y: HEAT_TOP + i * HEAT_CELL + HEAT_CELL / 2 + 3,
      "text-anchor": "end",
      class: "tick",
    });
    rowLabel.textContent = bundle.labels[i];
    root.append(rowLabel);
  });
  bundle.labels.forEach((label, j) => {
    const colLabel = svg("text", {
      x: HEAT_LEFT + j * HEAT_CELL + HEAT_CELL / 2,
      y: HEAT_TOP + n * HEAT_CELL + 14,
      "text-anchor": "end",
      class: "tick",
      transform: `rotate(-36 ${HEAT_LEFT + j * HEAT_CELL + HEAT_CELL / 2} ${HEAT_TOP + n * HEAT_CELL + 14})`,
    });
    colLabel.textContent = label;
    root.append(colLabel);
  });

  container.append(root);
  return root;
}

const BAR_HEIGHT = 26;
const BAR_LEFT = 150;

/** Feature importances as horizontal bars, one per input feature. */
export function renderImportanceChart(
  container: HTMLElement,
  bundle: DiagnosticsBundle,
): SVGElement {
  const features = bundle.labels.slice(0, bundle.importances.length);
  const width = 420;
  const height = 40 + features.length * (BAR_HEIGHT + 8);
  const root = svg("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
    role: "img",
  });
  root.setAttribute("data-chart", "importance");

  const title = svg("text", {
    x: width / 2,
    y: 16,
    "text-anchor": "middle",
    class: "chart-title",
  });
  title.textContent = "Feature importances";
  root.append(title);

  const maxImportance = Math.max(...bundle.importances, 1e-12);
  const scale = linearScale(0, maxImportance, 0, width - BAR_LEFT - 60);

  bundle.importances.forEach((weight, i) => {
    const y = 32 + i * (BAR_HEIGHT + 8);
    root.append(
      svg("rect", {
        x: BAR_LEFT,
        y,
        width: Math.max(scale(weight), 1),
        height: BAR_HEIGHT,
        class: "bar",
        "data-feature": features[i],
        "data-importance": weight,
      }),
    );
    const name = svg("text", {
      x: BAR_LEFT - 8,
      y: y + BAR_HEIGHT / 2 + 4,
      "text-anchor": "end",
      class: "tick",
    });
    name.textContent = features[i];
    const value = svg("text", {
      x: BAR_LEFT + Math.max(scale(weight), 1) + 6,
      y: y + BAR_HEIGHT / 2 + 4,
      class: "tick",
    });
    value.textContent = weight.toFixed(3);
    root.append(name, value);
  });

  container.append(root);
  return root;
}

/** All five diagnostics charts, in reading order. */
export function renderAllCharts(
  container: HTMLElement,
  bundle: DiagnosticsBundle,
): void {
  renderScatterChart(container, bundle);
  renderResidualChart(container, bundle);
  renderQqChart(container, bundle);
  renderHeatmapChart(container, bundle);
  renderImportanceChart(container, bundle);
}
