/** Wire and view-state types shared across the app. */

/** The exported decision-graph document served at GET /decision-graph. */
export interface DecisionGraphDocument {
  n: number;
  parent: number[];
  /** Edge length per node; null for the root. */
  edge_len: (number | null)[];
  potential: number[];
  points2d: [number, number][] | null;
  trace: number[];
}

/** One selectable mark: a non-root node's edge. */
export interface DecisionPoint {
  id: number;
  potential: number;
  edgeLen: number;
}

/** Data-coordinate selection region: edge_len >= minEdgeLen, potential <= maxPotential. */
export interface BoxBounds {
  minEdgeLen: number;
  maxPotential: number;
}

export type Selection =
  | { kind: "none" }
  | { kind: "box"; bounds: BoxBounds }
  | { kind: "nodes"; ids: number[] };

export type CutRequest =
  | { topk: number }
  | { autogap: { window: number } }
  | { box: { min_edge_len: number; max_potential: number } }
  | { nodes: number[] };

export interface CutResponse {
  labels: number[];
  clusters: number;
}

export interface ViewState {
  document: DecisionGraphDocument;
  selection: Selection;
  lastCut: CutResponse | null;
}
