/** Pure view-model logic: document validation, selections, rankings, colors.
 *
 * Everything here is DOM-free so the test suite can drive it headlessly and
 * replay recorded HTTP exchanges against it.
 */
import type {
  BoxBounds,
  CutRequest,
  DecisionGraphDocument,
  DecisionPoint,
  Selection,
} from "./types.js";

export class DocumentError extends Error {}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Schema check for a decision-graph document; throws instead of half-rendering. */
export function validateDocument(raw: unknown): DecisionGraphDocument {
  if (typeof raw !== "object" || raw === null) {
    throw new DocumentError("document is not an object");
  }
  const doc = raw as Record<string, unknown>;
  const n = doc.n;
  if (typeof n !== "number" || !Number.isInteger(n) || n < 1) {
    throw new DocumentError("n must be a positive integer");
  }
  const parent = doc.parent;
  const edgeLen = doc.edge_len;
  const potential = doc.potential;
  if (!Array.isArray(parent) || parent.length !== n) {
    throw new DocumentError("parent must list one entry per node");
  }
  if (!Array.isArray(edgeLen) || edgeLen.length !== n) {
    throw new DocumentError("edge_len must list one entry per node");
  }
  if (!Array.isArray(potential) || potential.length !== n) {
    throw new DocumentError("potential must list one entry per node");
  }
  parent.forEach((p, i) => {
    if (!Number.isInteger(p) || (p as number) < 0 || (p as number) >= n) {
      throw new DocumentError(`parent[${i}] out of range`);
    }
  });
  potential.forEach((p, i) => {
    if (!isFiniteNumber(p)) throw new DocumentError(`potential[${i}] not finite`);
  });
  edgeLen.forEach((w, i) => {
    const isRoot = parent[i] === i;
    if (isRoot) {
      if (w !== null) throw new DocumentError(`edge_len[${i}] must be null for the root`);
    } else if (!isFiniteNumber(w)) {
      throw new DocumentError(`edge_len[${i}] must be a finite number`);
    }
  });
  const points2d = doc.points2d;
  if (points2d !== null && points2d !== undefined) {
    if (!Array.isArray(points2d) || points2d.length !== n) {
      throw new DocumentError("points2d must be null or one [x,y] per node");
    }
    points2d.forEach((xy, i) => {
      if (!Array.isArray(xy) || xy.length !== 2 || !xy.every(isFiniteNumber)) {
        throw new DocumentError(`points2d[${i}] must be [x, y]`);
      }
    });
  }
  const trace = doc.trace;
  if (!Array.isArray(trace) || !trace.every((t) => Number.isInteger(t))) {
    throw new DocumentError("trace must be a list of integers");
  }
  return {
    n,
    parent: parent as number[],
    edge_len: edgeLen as (number | null)[],
    potential: potential as number[],
    points2d: (points2d ?? null) as [number, number][] | null,
    trace: trace as number[],
  };
}

/** One mark per non-root node, in id order. */
export function decisionPoints(doc: DecisionGraphDocument): DecisionPoint[] {
  const out: DecisionPoint[] = [];
  for (let i = 0; i < doc.n; i++) {
    const w = doc.edge_len[i];
    if (w !== null) {
      out.push({ id: i, potential: doc.potential[i], edgeLen: w });
    }
  }
  return out;
}

/** Drag rectangle (any corner order, data coordinates) to the half-open
 * selection region: everything above the drag's bottom edge and left of its
 * right edge is in.
 */
export function dragToBox(
  x0: number,
  y0: number,
  x1: number,
  y1: number,
): BoxBounds {
  return { minEdgeLen: Math.min(y0, y1), maxPotential: Math.max(x0, x1) };
}

export function marksInBox(points: DecisionPoint[], box: BoxBounds): DecisionPoint[] {
  return points.filter(
    (p) => p.edgeLen >= box.minEdgeLen && p.potential <= box.maxPotential,
  );
}

export function selectionSize(points: DecisionPoint[], sel: Selection): number {
  if (sel.kind === "none") return 0;
  if (sel.kind === "nodes") return sel.ids.length;
  return marksInBox(points, sel.bounds).length;
}

/** Selections post as box or node-set cut requests; "none" is the empty node set
 * of a degenerate box, so the whole tree stays one cluster.
 */
export function selectionToSpec(sel: Selection): CutRequest {
  if (sel.kind === "box") {
    return {
      box: {
        min_edge_len: sel.bounds.minEdgeLen,
        max_potential: sel.bounds.maxPotential,
      },
    };
  }
  if (sel.kind === "nodes") return { nodes: [...sel.ids].sort((a, b) => a - b) };
  return { nodes: [] };
}

/** Edges by decreasing length, ties by smaller id: the ranked side panel. */
export function eCutRank(doc: DecisionGraphDocument): DecisionPoint[] {
  return decisionPoints(doc).sort(
    (a, b) => b.edgeLen - a.edgeLen || a.id - b.id,
  );
}

export function clusterSizes(labels: number[]): number[] {
  const sizes: number[] = [];
  for (const l of labels) sizes[l] = (sizes[l] ?? 0) + 1;
  return sizes;
}

const PALETTE = [
  "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
  "#edc948", "#76b7b2", "#ff9da7", "#9c755f", "#bab0ac",
  "#1170aa", "#fc7d0b", "#57606c", "#7b848f", "#c85200",
  "#5fa2ce", "#a3cce9", "#ffbc79", "#c8d0d9", "#a3acb9",
];

export function colorFor(label: number): string {
  return PALETTE[label % PALETTE.length];
}
