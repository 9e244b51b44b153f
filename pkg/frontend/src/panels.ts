/** The linked views: a label-colored data panel and the ranked-length panel. */
import { clusterSizes, colorFor, eCutRank } from "./model.js";
import type { DecisionGraphDocument, DecisionPoint } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

/** 2-D coordinates when the document has them, cluster-size bars otherwise. */
export function renderDataPanel(
  container: HTMLElement,
  doc: DecisionGraphDocument,
  labels: number[] | null,
  width = 520,
  height = 360,
): void {
  container.textContent = "";
  if (doc.points2d) {
    renderCoordScatter(container, doc.points2d, labels, width, height);
  } else {
    renderSizeBars(container, labels ?? new Array(doc.n).fill(0), width, height);
  }
}

function renderCoordScatter(
  container: HTMLElement,
  pts: [number, number][],
  labels: number[] | null,
  width: number,
  height: number,
): void {
  const svg = el("svg", { width, height, class: "dataview" });
  const xs = pts.map((p) => p[0]);
  const ys = pts.map((p) => p[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (v: number) =>
    8 + ((v - x0) / (x1 - x0 || 1)) * (width - 16);
  const sy = (v: number) =>
    height - 8 - ((v - y0) / (y1 - y0 || 1)) * (height - 16);
  pts.forEach(([x, y], i) => {
    const c = el("circle", { cx: sx(x), cy: sy(y), r: 2.5 });
    c.style.fill = labels ? colorFor(labels[i]) : "#888";
    svg.appendChild(c);
  });
  container.appendChild(svg);
}

function renderSizeBars(
  container: HTMLElement,
  labels: number[],
  width: number,
  height: number,
): void {
  const sizes = clusterSizes(labels);
  const svg = el("svg", { width, height, class: "dataview" });
  const max = Math.max(...sizes, 1);
  const bw = Math.max(2, Math.min(48, (width - 20) / sizes.length - 4));
  sizes.forEach((s, c) => {
    const h = (s / max) * (height - 40);
    const x = 10 + c * (bw + 4);
    const bar = el("rect", { x, y: height - 24 - h, width: bw, height: h });
    bar.style.fill = colorFor(c);
    svg.appendChild(bar);
    const lab = el("text", {
      x: x + bw / 2, y: height - 8, "text-anchor": "middle", class: "tick",
    });
    lab.textContent = String(s);
    svg.appendChild(lab);
  });
  container.appendChild(svg);
}

/** Ranked edge lengths, longest first; selected edges are highlighted. */
export function renderRankPanel(
  container: HTMLElement,
  doc: DecisionGraphDocument,
  selectedIds: Set<number>,
  width = 220,
  maxRows = 60,
): void {
  container.textContent = "";
  const ranked = eCutRank(doc);
  const rows = ranked.slice(0, maxRows);
  const rowH = 16;
  const height = rows.length * rowH + 8;
  const svg = el("svg", { width, height, class: "rankpanel" });
  const maxLen = rows.length ? rows[0].edgeLen : 1;
  rows.forEach((p: DecisionPoint, r: number) => {
    const w = maxLen > 0 ? (p.edgeLen / maxLen) * (width - 80) : 0;
    const bar = el("rect", {
      x: 54, y: 4 + r * rowH, width: Math.max(w, 1), height: rowH - 4,
      class: selectedIds.has(p.id) ? "rankbar selected" : "rankbar",
    });
    svg.appendChild(bar);
    const lab = el("text", { x: 4, y: 15 + r * rowH, class: "tick" });
    lab.textContent = `#${r + 1} n${p.id}`;
    svg.appendChild(lab);
  });
  container.appendChild(svg);
  if (ranked.length > maxRows) {
    const more = document.createElement("div");
    more.className = "muted";
    more.textContent = `… ${ranked.length - maxRows} shorter edges`;
    container.appendChild(more);
  }
}
