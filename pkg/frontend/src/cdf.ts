// Hidden-goods CDF chart: for each algorithm, the fraction of instances whose
// output is HEF-k, per k.

import { seriesColor } from "./color.js";
import { dataBlock, document, fmt, tag } from "./svg.js";
import { SweepSummary } from "./types.js";

export interface CdfData {
  kind: "cdf";
  kValues: number[];
  series: Record<string, number[]>;
}

export function extractCdf(summary: SweepSummary): CdfData {
  const series: Record<string, number[]> = {};
  for (const name of Object.keys(summary.cdf.fraction_hef_k).sort()) {
    series[name] = [...summary.cdf.fraction_hef_k[name]];
  }
  return { kind: "cdf", kValues: [...summary.cdf.k_values], series };
}

const WIDTH = 460;
const HEIGHT = 300;
const MARGIN = { top: 24, left: 56, bottom: 44, right: 140 };

export function renderCdf(summary: SweepSummary): { svg: string; data: CdfData } {
  const data = extractCdf(summary);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const kMax = Math.max(...data.kValues, 1);
  const x = (k: number) => MARGIN.left + (k / kMax) * plotW;
  const y = (frac: number) => MARGIN.top + (1 - frac) * plotH;
  const children: string[] = [dataBlock(data)];

  // frame and gridlines
  children.push(
    tag("rect", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: plotW,
      height: plotH,
      fill: "none",
      stroke: "#333",
    }),
  );
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    children.push(
      tag("line", {
        x1: MARGIN.left,
        x2: MARGIN.left + plotW,
        y1: y(frac),
        y2: y(frac),
        stroke: "#ddd",
      }),
      tag(
        "text",
        { x: MARGIN.left - 6, y: y(frac) + 3, "text-anchor": "end", "font-size": 10 },
        [],
        frac.toFixed(2),
      ),
    );
  }
  for (const k of data.kValues) {
    children.push(
      tag(
        "text",
        { x: x(k), y: MARGIN.top + plotH + 16, "text-anchor": "middle", "font-size": 10 },
        [],
        String(k),
      ),
    );
  }
  children.push(
    tag(
      "text",
      { x: MARGIN.left + plotW / 2, y: HEIGHT - 10, "text-anchor": "middle", "font-size": 11 },
      [],
      "hidden goods k",
    ),
    tag(
      "text",
      {
        x: 16,
        y: MARGIN.top + plotH / 2,
        "text-anchor": "middle",
        "font-size": 11,
        transform: `rotate(-90 16 ${fmt(MARGIN.top + plotH / 2)})`,
      },
      [],
      "fraction of instances HEF-k",
    ),
  );

  Object.keys(data.series).forEach((name, idx) => {
    const color = seriesColor(idx);
    const points = data.series[name]
      .map((frac, i) => `${fmt(x(data.kValues[i]))},${fmt(y(frac))}`)
      .join(" ");
    children.push(
      tag("polyline", { points, fill: "none", stroke: color, "stroke-width": 2 }),
    );
    for (let i = 0; i < data.kValues.length; i++) {
      children.push(
        tag("circle", { cx: x(data.kValues[i]), cy: y(data.series[name][i]), r: 2.5, fill: color }),
      );
    }
    const ly = MARGIN.top + 14 + idx * 16;
    children.push(
      tag("line", {
        x1: MARGIN.left + plotW + 10,
        x2: MARGIN.left + plotW + 28,
        y1: ly,
        y2: ly,
        stroke: color,
        "stroke-width": 2,
      }),
      tag("text", { x: MARGIN.left + plotW + 32, y: ly + 4, "font-size": 10 }, [], name),
    );
  });

  return { svg: document(WIDTH, HEIGHT, children), data };
}
