// Minimal SVG string assembly; no DOM needed.

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join(" ");
  const open = attrText ? `<${name} ${attrText}>` : `<${name}>`;
  if (children.length === 0 && text === undefined) {
    return attrText ? `<${name} ${attrText}/>` : `<${name}/>`;
  }
  return `${open}${text !== undefined ? esc(text) : ""}${children.join("")}</${name}>`;
}

/** Deterministic short number formatting for coordinates. */
export function fmt(x: number): string {
  const rounded = Math.round(x * 100) / 100;
  return Number.isInteger(rounded) ? String(rounded) : String(rounded);
}

export function document(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">` +
    children.join("") +
    `</svg>\n`
  );
}

/** Embed the plotted data so tests can assert on the artifact itself. */
export function dataBlock(payload: unknown): string {
  return `<metadata id="chart-data">${esc(JSON.stringify(payload))}</metadata>`;
}

/** Read back the payload embedded by dataBlock. */
export function readDataBlock(svg: string): unknown {
  const match = svg.match(/<metadata id="chart-data">([\s\S]*?)<\/metadata>/);
  if (!match) {
    throw new Error("no chart-data metadata block in SVG");
  }
  const unescaped = match[1]
    .replace(/&quot;/g, '"')
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(unescaped);
}
