// Per-algorithm heatmap panels over the (m, n) sweep grid: number of goods on
// the X axis, number of agents on the Y axis, blank cells where m < n or the
// summary holds no value.

import { BLANK_FILL, viridis } from "./color.js";
import { dataBlock, document, fmt, tag } from "./svg.js";
import {
  CellMetric,
  OptimalMetric,
  SweepSummary,
  isCellMetric,
  isOptimalMetric,
} from "./types.js";

export interface HeatmapCellDatum {
  n: number;
  m: number;
  value: number | null;
}

export interface HeatmapPanel {
  name: string;
  cells: HeatmapCellDatum[];
}

export interface HeatmapData {
  kind: "heatmap";
  metric: string;
  nValues: number[];
  mValues: number[];
  domain: [number, number];
  panels: HeatmapPanel[];
}

/** Fixed value bounds per metric so panels stay cross-comparable. */
function metricDomain(metric: CellMetric | OptimalMetric, maxAgents: number): [number, number] {
  switch (metric) {
    case "mean_normalized_regret":
    case "worst_normalized_regret":
    case "ef_frequency":
    case "ef_exists_frequency":
      return [0, 1];
    default:
      // hidden-goods counts and regrets are bounded by n_max - 1
      return [0, Math.max(1, maxAgents - 1)];
  }
}

export function extractHeatmap(summary: SweepSummary, metric: string): HeatmapData {
  const source: Array<{ n: number; m: number; panel: string; value: number | null }> = [];
  if (isCellMetric(metric)) {
    for (const cell of summary.cells) {
      source.push({ n: cell.n, m: cell.m, panel: cell.algorithm, value: cell[metric] });
    }
  } else if (isOptimalMetric(metric)) {
    for (const cell of summary.optimal_cells) {
      source.push({ n: cell.n, m: cell.m, panel: "optimal", value: cell[metric] });
    }
  } else {
    throw new Error(`unknown heatmap metric "${metric}"`);
  }
  const nValues = [...new Set(source.map((c) => c.n))].sort((a, b) => a - b);
  const mValues = [...new Set(source.map((c) => c.m))].sort((a, b) => a - b);
  const panelNames = [...new Set(source.map((c) => c.panel))].sort();
  const panels: HeatmapPanel[] = panelNames.map((name) => {
    const byKey = new Map<string, number | null>();
    for (const c of source) {
      if (c.panel === name) {
        byKey.set(`${c.n}:${c.m}`, c.value);
      }
    }
    const cells: HeatmapCellDatum[] = [];
    for (const n of nValues) {
      for (const m of mValues) {
        const value = byKey.get(`${n}:${m}`);
        cells.push({ n, m, value: value === undefined ? null : value });
      }
    }
    return { name, cells };
  });
  return {
    kind: "heatmap",
    metric,
    nValues,
    mValues,
    domain: metricDomain(metric, Math.max(...nValues)),
    panels,
  };
}

const CELL = 30;
const PANEL_GAP = 26;
const MARGIN = { top: 46, left: 54, bottom: 40, right: 100 };

export function renderHeatmap(summary: SweepSummary, metric: string): { svg: string; data: HeatmapData } {
  const data = extractHeatmap(summary, metric);
  const gridW = data.mValues.length * CELL;
  const gridH = data.nValues.length * CELL;
  const width = MARGIN.left + data.panels.length * (gridW + PANEL_GAP) + MARGIN.right;
  const height = MARGIN.top + gridH + MARGIN.bottom;
  const [lo, hi] = data.domain;
  const children: string[] = [dataBlock(data)];

  data.panels.forEach((panel, p) => {
    const x0 = MARGIN.left + p * (gridW + PANEL_GAP);
    children.push(
      tag("text", { x: x0 + gridW / 2, y: MARGIN.top - 14, "text-anchor": "middle", "font-size": 13 }, [], panel.name),
    );
    for (const cell of panel.cells) {
      const col = data.mValues.indexOf(cell.m);
      const row = data.nValues.indexOf(cell.n);
      const fill =
        cell.value === null ? BLANK_FILL : viridis(hi === lo ? 0 : (cell.value - lo) / (hi - lo));
      children.push(
        tag("rect", {
          x: x0 + col * CELL,
          y: MARGIN.top + row * CELL,
          width: CELL - 1,
          height: CELL - 1,
          fill,
        }),
      );
    }
    data.mValues.forEach((m, col) => {
      children.push(
        tag(
          "text",
          {
            x: x0 + col * CELL + CELL / 2,
            y: MARGIN.top + gridH + 16,
            "text-anchor": "middle",
            "font-size": 10,
          },
          [],
          String(m),
        ),
      );
    });
    children.push(
      tag(
        "text",
        { x: x0 + gridW / 2, y: MARGIN.top + gridH + 32, "text-anchor": "middle", "font-size": 11 },
        [],
        "goods m",
      ),
    );
  });
  data.nValues.forEach((n, row) => {
    children.push(
      tag(
        "text",
        {
          x: MARGIN.left - 10,
          y: MARGIN.top + row * CELL + CELL / 2 + 4,
          "text-anchor": "end",
          "font-size": 10,
        },
        [],
        String(n),
      ),
    );
  });
  children.push(
    tag(
      "text",
      {
        x: 14,
        y: MARGIN.top + gridH / 2,
        "text-anchor": "middle",
        "font-size": 11,
        transform: `rotate(-90 14 ${fmt(MARGIN.top + gridH / 2)})`,
      },
      [],
      "agents n",
    ),
  );

  // colorbar with the metric label
  const barX = width - MARGIN.right + 24;
  const steps = 24;
  for (let s = 0; s < steps; s++) {
    children.push(
      tag("rect", {
        x: barX,
        y: MARGIN.top + ((steps - 1 - s) * gridH) / steps,
        width: 14,
        height: gridH / steps + 0.5,
        fill: viridis(s / (steps - 1)),
      }),
    );
  }
  children.push(
    tag("text", { x: barX + 20, y: MARGIN.top + 8, "font-size": 10 }, [], fmt(hi)),
    tag("text", { x: barX + 20, y: MARGIN.top + gridH, "font-size": 10 }, [], fmt(lo)),
    tag(
      "text",
      {
        x: barX + 44,
        y: MARGIN.top + gridH / 2,
        "text-anchor": "middle",
        "font-size": 11,
        transform: `rotate(-90 ${fmt(barX + 44)} ${fmt(MARGIN.top + gridH / 2)})`,
      },
      [],
      data.metric,
    ),
  );

  return { svg: document(width, height, children), data };
}
