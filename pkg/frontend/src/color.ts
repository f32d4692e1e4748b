// Perceptually uniform sequential colors (viridis anchors, linearly
// interpolated) for heatmap cells, plus a categorical palette for CDF lines.

const VIRIDIS: Array<[number, number, number]> = [
  [68, 1, 84],
  [71, 19, 101],
  [72, 36, 117],
  [70, 52, 128],
  [65, 68, 135],
  [59, 82, 139],
  [53, 95, 141],
  [47, 108, 142],
  [42, 120, 142],
  [37, 132, 142],
  [33, 145, 140],
  [30, 156, 137],
  [34, 168, 132],
  [47, 180, 124],
  [68, 191, 112],
  [94, 201, 98],
  [122, 209, 81],
  [155, 217, 60],
  [189, 223, 38],
  [223, 227, 24],
  [253, 231, 37],
];

/** Map t in [0, 1] onto the viridis ramp. */
export function viridis(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const pos = clamped * (VIRIDIS.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.min(lo + 1, VIRIDIS.length - 1);
  const frac = pos - lo;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  const [r1, g1, b1] = VIRIDIS[lo];
  const [r2, g2, b2] = VIRIDIS[hi];
  return `rgb(${mix(r1, r2)},${mix(g1, g2)},${mix(b1, b2)})`;
}

export const BLANK_FILL = "#e8e8e8"; // cells outside the grid (m < n) or unavailable

const SERIES_COLORS = ["#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377"];

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length];
}
