/** The decision-graph scatter: potential on x, edge length on y, box drags
 * and mark clicks for selection.  The drag rectangle is converted to the
 * half-open region (edge_len >= bottom, potential <= right), which is what
 * actually gets posted; the shaded overlay shows that effective region.
 */
import { dragToBox, marksInBox } from "./model.js";
import type { BoxBounds, DecisionPoint, Selection } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MARGIN = { top: 12, right: 16, bottom: 42, left: 56 };

interface Scale {
  (v: number): number;
  invert(px: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 === d1) {
    d0 -= 1;
    d1 += 1;
  }
  const f = ((v: number) => r0 + ((v - d0) / (d1 - d0)) * (r1 - r0)) as Scale;
  f.invert = (px: number) => d0 + ((px - r0) / (r1 - r0)) * (d1 - d0);
  return f;
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (lo === hi) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (count * step) / span;
  const mult = err <= 0.15 ? 10 : err <= 0.35 ? 5 : err <= 0.75 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) out.push(v);
  return out;
}

function fmt(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e5 || a < 1e-3)) return v.toExponential(1);
  return String(Math.round(v * 1000) / 1000);
}

export interface ScatterCallbacks {
  onBox(bounds: BoxBounds): void;
  onPick(id: number, additive: boolean): void;
}

export class DecisionScatter {
  private svg: SVGSVGElement;
  private plot: SVGGElement;
  private overlay: SVGRectElement;
  private dragRect: SVGRectElement;
  private marks = new Map<number, SVGCircleElement>();
  private x: Scale;
  private y: Scale;
  private width: number;
  private height: number;

  constructor(
    container: HTMLElement,
    private points: DecisionPoint[],
    private callbacks: ScatterCallbacks,
    width = 520,
    height = 420,
  ) {
    this.width = width;
    this.height = height;
    container.textContent = "";
    this.svg = el("svg", { width, height, class: "scatter" });
    container.appendChild(this.svg);

    const xs = points.map((p) => p.potential);
    const ys = points.map((p) => p.edgeLen);
    const pad = (lo: number, hi: number) => {
      const m = (hi - lo || 2) * 0.06;
      return [lo - m, hi + m] as const;
    };
    const [x0, x1] = pad(Math.min(...xs, Infinity), Math.max(...xs, -Infinity));
    const [y0, y1] = pad(Math.min(...ys, Infinity), Math.max(...ys, -Infinity));
    this.x = linearScale(
      points.length ? x0 : 0, points.length ? x1 : 1,
      MARGIN.left, width - MARGIN.right,
    );
    this.y = linearScale(
      points.length ? y0 : 0, points.length ? y1 : 1,
      height - MARGIN.bottom, MARGIN.top,
    );

    this.drawAxes();
    this.plot = el("g");
    this.svg.appendChild(this.plot);
    this.overlay = el("rect", { class: "selection-region", visibility: "hidden" });
    this.plot.appendChild(this.overlay);
    for (const p of points) {
      const c = el("circle", {
        cx: this.x(p.potential), cy: this.y(p.edgeLen), r: 3.5,
        class: "mark", "data-id": p.id,
      });
      c.addEventListener("click", (ev) => {
        ev.stopPropagation();
        this.callbacks.onPick(p.id, ev.shiftKey);
      });
      this.plot.appendChild(c);
      this.marks.set(p.id, c);
    }
    this.dragRect = el("rect", { class: "drag-rect", visibility: "hidden" });
    this.svg.appendChild(this.dragRect);
    this.wireDrag();
  }

  private drawAxes(): void {
    const axis = el("g", { class: "axes" });
    const bottom = this.height - MARGIN.bottom;
    axis.appendChild(el("line", {
      x1: MARGIN.left, y1: bottom, x2: this.width - MARGIN.right, y2: bottom,
    }));
    axis.appendChild(el("line", {
      x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: bottom,
    }));
    for (const t of ticks(this.x.invert(MARGIN.left), this.x.invert(this.width - MARGIN.right), 6)) {
      const px = this.x(t);
      axis.appendChild(el("line", { x1: px, y1: bottom, x2: px, y2: bottom + 5 }));
      const lab = el("text", { x: px, y: bottom + 18, "text-anchor": "middle", class: "tick" });
      lab.textContent = fmt(t);
      axis.appendChild(lab);
    }
    for (const t of ticks(this.y.invert(bottom), this.y.invert(MARGIN.top), 6)) {
      const py = this.y(t);
      axis.appendChild(el("line", { x1: MARGIN.left - 5, y1: py, x2: MARGIN.left, y2: py }));
      const lab = el("text", {
        x: MARGIN.left - 8, y: py + 4, "text-anchor": "end", class: "tick",
      });
      lab.textContent = fmt(t);
      axis.appendChild(lab);
    }
    const xl = el("text", {
      x: (MARGIN.left + this.width - MARGIN.right) / 2, y: this.height - 6,
      "text-anchor": "middle", class: "axis-label",
    });
    xl.textContent = "potential";
    axis.appendChild(xl);
    const yl = el("text", {
      x: 14, y: (MARGIN.top + this.height - MARGIN.bottom) / 2,
      "text-anchor": "middle", class: "axis-label",
      transform: `rotate(-90 14 ${(MARGIN.top + this.height - MARGIN.bottom) / 2})`,
    });
    yl.textContent = "edge length";
    axis.appendChild(yl);
    this.svg.appendChild(axis);
  }

  private wireDrag(): void {
    let start: [number, number] | null = null;
    const px = (ev: MouseEvent): [number, number] => {
      const r = this.svg.getBoundingClientRect();
      return [ev.clientX - r.left, ev.clientY - r.top];
    };
    this.svg.addEventListener("mousedown", (ev) => {
      start = px(ev);
    });
    this.svg.addEventListener("mousemove", (ev) => {
      if (!start) return;
      const [cx, cy] = px(ev);
      this.dragRect.setAttribute("visibility", "visible");
      this.dragRect.setAttribute("x", String(Math.min(start[0], cx)));
      this.dragRect.setAttribute("y", String(Math.min(start[1], cy)));
      this.dragRect.setAttribute("width", String(Math.abs(cx - start[0])));
      this.dragRect.setAttribute("height", String(Math.abs(cy - start[1])));
    });
    const finish = (ev: MouseEvent) => {
      if (!start) return;
      const [cx, cy] = px(ev);
      const moved = Math.abs(cx - start[0]) > 3 || Math.abs(cy - start[1]) > 3;
      const [sx, sy] = start;
      start = null;
      this.dragRect.setAttribute("visibility", "hidden");
      if (!moved) return; // clicks are handled by the marks themselves
      this.callbacks.onBox(
        dragToBox(
          this.x.invert(sx), this.y.invert(sy),
          this.x.invert(cx), this.y.invert(cy),
        ),
      );
    };
    this.svg.addEventListener("mouseup", finish);
    this.svg.addEventListener("mouseleave", finish);
  }

  /** Highlight the current selection; box selections also shade the region. */
  showSelection(sel: Selection): void {
    let selected: Set<number>;
    if (sel.kind === "box") {
      selected = new Set(marksInBox(this.points, sel.bounds).map((p) => p.id));
      const rx = this.x(sel.bounds.maxPotential);
      const ry = this.y(sel.bounds.minEdgeLen);
      this.overlay.setAttribute("visibility", "visible");
      this.overlay.setAttribute("x", String(MARGIN.left));
      this.overlay.setAttribute("y", String(MARGIN.top));
      this.overlay.setAttribute("width", String(Math.max(0, rx - MARGIN.left)));
      this.overlay.setAttribute("height", String(Math.max(0, ry - MARGIN.top)));
    } else {
      this.overlay.setAttribute("visibility", "hidden");
      selected = new Set(sel.kind === "nodes" ? sel.ids : []);
    }
    for (const [id, mark] of this.marks) {
      mark.classList.toggle("selected", selected.has(id));
    }
  }
}
