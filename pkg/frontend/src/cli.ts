#!/usr/bin/env node
// plots <metric> --summary PATH --out PATH
//
// <metric> is "cdf" or one of the summary heatmap columns
// (mean_normalized_regret, worst_normalized_regret, worst_regret,
// mean_hidden_non_ef, worst_k_hidden, ef_frequency, mean_k_opt, worst_k_opt,
// ef_exists_frequency). Output is an SVG image; the plotted data is embedded
// in a metadata block so downstream checks can read it back.

import { readFileSync, writeFileSync } from "node:fs";
import { renderCdf } from "./cdf.js";
import { renderHeatmap } from "./heatmap.js";
import { CELL_METRICS, OPTIMAL_METRICS, parseSummary } from "./types.js";

export interface CliResult {
  code: number;
  message: string;
}

export function run(argv: string[]): CliResult {
  const positional: string[] = [];
  const options = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) {
        return { code: 2, message: `missing value for ${arg}` };
      }
      options.set(arg.slice(2), value);
      i++;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 1 || !options.has("summary") || !options.has("out")) {
    return {
      code: 2,
      message: "usage: plots <metric> --summary summary.json --out chart.svg",
    };
  }
  const metric = positional[0];
  let summaryText: string;
  try {
    summaryText = readFileSync(options.get("summary")!, "utf-8");
  } catch (err) {
    return { code: 2, message: `cannot read summary: ${String(err)}` };
  }
  let svg: string;
  try {
    const summary = parseSummary(summaryText);
    svg = metric === "cdf" ? renderCdf(summary).svg : renderHeatmap(summary, metric).svg;
  } catch (err) {
    const known = ["cdf", ...CELL_METRICS, ...OPTIMAL_METRICS].join(", ");
    return { code: 1, message: `${err instanceof Error ? err.message : String(err)} (metrics: ${known})` };
  }
  writeFileSync(options.get("out")!, svg);
  return { code: 0, message: `wrote ${options.get("out")}` };
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  const result = run(process.argv.slice(2));
  if (result.code === 0) {
    console.log(result.message);
  } else {
    console.error(result.message);
  }
  process.exit(result.code);
}
