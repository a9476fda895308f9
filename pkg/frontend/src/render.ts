/** SVG board rendering as pure string building.
 *
 * The view's layout coordinates are in "lattice units" (adjacent vertices
 * about 1 apart, for lattices exactly 1), so sizes below are fractions of
 * a unit. Vertices carry data-id so a single delegated click handler can
 * map clicks back to vertex ids; no per-node listeners.
 */

import type { BoardView } from "./api.js";

const VERTEX_RADIUS = 0.3;
const EDGE_WIDTH = 0.05;
const PADDING = 0.8;

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

function fallbackGrid(count: number): [number, number][] {
  // layout should always be present (the service fills a radial fallback),
  // but render something sane if a vertex arrives without coordinates
  const side = Math.max(1, Math.ceil(Math.sqrt(count)));
  const coords: [number, number][] = [];
  for (let i = 0; i < count; i += 1) {
    coords.push([i % side, Math.floor(i / side)]);
  }
  return coords;
}

export function boardSvg(view: BoardView, hint: string[], flash: string[] = []): string {
  const coords: [number, number][] = view.vertices.map(
    (v, i) => v.layout ?? fallbackGrid(view.vertices.length)[i]!,
  );
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const [x, y] of coords) {
    minX = Math.min(minX, x);
    minY = Math.min(minY, y);
    maxX = Math.max(maxX, x);
    maxY = Math.max(maxY, y);
  }
  if (coords.length === 0) {
    minX = minY = 0;
    maxX = maxY = 1;
  }
  const viewBox = [
    minX - PADDING,
    minY - PADDING,
    maxX - minX + 2 * PADDING,
    maxY - minY + 2 * PADDING,
  ]
    .map((n) => n.toFixed(3))
    .join(" ");

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${viewBox}" class="board" role="img">`,
  );

  parts.push(`<g class="edges" stroke-width="${EDGE_WIDTH}">`);
  for (const [a, b] of view.edges) {
    const pa = coords[a];
    const pb = coords[b];
    if (pa === undefined || pb === undefined) {
      continue;
    }
    parts.push(`<line x1="${pa[0]}" y1="${pa[1]}" x2="${pb[0]}" y2="${pb[1]}"/>`);
  }
  parts.push("</g>");

  const pending = new Set(view.pending);
  const hinted = new Set(hint);
  const flashing = new Set(flash);
  parts.push('<g class="vertices">');
  view.vertices.forEach((vertex, i) => {
    const [x, y] = coords[i]!;
    const classes = ["vertex", vertex.status];
    if (pending.has(vertex.id)) {
      classes.push("pending");
    }
    if (hinted.has(vertex.id)) {
      classes.push("hint");
    }
    if (flashing.has(vertex.id)) {
      classes.push("new-burn");
    }
    const id = escapeXml(vertex.id);
    parts.push(
      `<circle cx="${x}" cy="${y}" r="${VERTEX_RADIUS}" ` +
        `class="${classes.join(" ")}" data-id="${id}">` +
        `<title>${id} (${vertex.status})</title></circle>`,
    );
  });
  parts.push("</g>");
  parts.push("</svg>");
  return parts.join("");
}
