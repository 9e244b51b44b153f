import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { test } from "node:test";
import { fileURLToPath } from "node:url";

import {
  DocumentError,
  clusterSizes,
  colorFor,
  decisionPoints,
  dragToBox,
  eCutRank,
  marksInBox,
  selectionSize,
  selectionToSpec,
  validateDocument,
} from "../src/model.js";
import type { DecisionGraphDocument } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = JSON.parse(
  readFileSync(join(here, "..", "..", "tests", "fixtures", "two_blob.json"), "utf-8"),
);

const doc = (): DecisionGraphDocument => validateDocument(fixture.document);

test("fixture document validates", () => {
  const d = doc();
  assert.equal(d.n, 6);
  assert.deepEqual(d.trace, [2, 1]);
});

test("validation rejects malformed documents wholesale", () => {
  const good = fixture.document;
  const broken: unknown[] = [
    null,
    {},
    { ...good, parent: [1, 1, 1] },
    { ...good, parent: [9, 1, 1, 4, 1, 4] },
    { ...good, edge_len: [1, 2, 1, 1, 10, 1] }, // root must be null
    { ...good, edge_len: [1, null, 1, 1, null, 1] }, // non-root must be a number
    { ...good, potential: [3, 12, 3, 3, "x", 3] },
    { ...good, points2d: [[0, 0]] },
    { ...good, trace: "nope" },
    { ...good, n: 0 },
  ];
  for (const raw of broken) {
    assert.throws(() => validateDocument(raw), DocumentError);
  }
});

test("decision points: one mark per non-root node", () => {
  const pts = decisionPoints(doc());
  assert.equal(pts.length, 5);
  assert.deepEqual(pts.map((p) => p.id), [0, 2, 3, 4, 5]);
  const popout = pts.find((p) => p.id === 4)!;
  assert.equal(popout.edgeLen, 10.0);
  assert.equal(popout.potential, 12.0);
});

test("single-node document has an empty points array", () => {
  const single = validateDocument({
    n: 1, parent: [0], edge_len: [null], potential: [0.0],
    points2d: null, trace: [1],
  });
  assert.deepEqual(decisionPoints(single), []);
});

test("a 5000-mark document keeps every mark", () => {
  const n = 5000;
  const parent = Array.from({ length: n }, (_, i) => (i === 0 ? 0 : 0));
  const edge_len = Array.from({ length: n }, (_, i) => (i === 0 ? null : i * 0.001));
  const potential = Array.from({ length: n }, (_, i) => i * 0.01);
  const d = validateDocument({ n, parent, edge_len, potential, points2d: null, trace: [1] });
  assert.equal(decisionPoints(d).length, n - 1);
});

test("drag corners in any order give the same half-open region", () => {
  const a = dragToBox(13.0, 5.5, 11.0, 11.0);
  const b = dragToBox(11.0, 11.0, 13.0, 5.5);
  assert.deepEqual(a, b);
  assert.deepEqual(a, { minEdgeLen: 5.5, maxPotential: 13.0 });
});

test("box membership is edge_len >= min and potential <= max", () => {
  const pts = decisionPoints(doc());
  const hits = marksInBox(pts, { minEdgeLen: 5.5, maxPotential: 13.0 });
  assert.deepEqual(hits.map((p) => p.id), [4]);
  assert.deepEqual(marksInBox(pts, { minEdgeLen: 11.0, maxPotential: 2.0 }), []);
  // the region is half-open: a huge box takes everything
  assert.equal(marksInBox(pts, { minEdgeLen: 0, maxPotential: 99 }).length, 5);
});

test("selections convert to the wire spec", () => {
  assert.deepEqual(
    selectionToSpec({ kind: "box", bounds: { minEdgeLen: 5.5, maxPotential: 13.0 } }),
    { box: { min_edge_len: 5.5, max_potential: 13.0 } },
  );
  assert.deepEqual(selectionToSpec({ kind: "nodes", ids: [3, 0, 2] }), {
    nodes: [0, 2, 3],
  });
  assert.deepEqual(selectionToSpec({ kind: "none" }), { nodes: [] });
});

test("selection sizes", () => {
  const pts = decisionPoints(doc());
  assert.equal(selectionSize(pts, { kind: "none" }), 0);
  assert.equal(
    selectionSize(pts, { kind: "box", bounds: { minEdgeLen: 5.5, maxPotential: 13.0 } }),
    1,
  );
  assert.equal(selectionSize(pts, { kind: "nodes", ids: [0, 2, 3] }), 3);
});

test("ranked panel data: lengths descending, ties by id", () => {
  const ranked = eCutRank(doc());
  assert.deepEqual(ranked.map((p) => p.id), [4, 0, 2, 3, 5]);
  assert.equal(ranked[0].edgeLen, 10.0);
});

test("cluster sizes and stable colors", () => {
  assert.deepEqual(clusterSizes([0, 0, 0, 1, 1, 1]), [3, 3]);
  assert.equal(colorFor(3), colorFor(3));
  assert.notEqual(colorFor(0), colorFor(1));
});
