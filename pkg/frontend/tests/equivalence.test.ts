/** Replays the recorded HTTP exchanges for the two-blob run and checks the
 * UI-side logic against them: a box selection around the single pop-out mark
 * must produce exactly the request whose recorded labels match the CLI's
 * topk:1 labels, and the displayed cluster count must equal selection size
 * plus one for scripted selections of size 0, 1 and 3.
 */
import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { test } from "node:test";
import { fileURLToPath } from "node:url";

import {
  decisionPoints,
  dragToBox,
  marksInBox,
  selectionSize,
  selectionToSpec,
  validateDocument,
} from "../src/model.js";
import type { CutResponse, Selection } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = JSON.parse(
  readFileSync(join(here, "..", "..", "tests", "fixtures", "two_blob.json"), "utf-8"),
);

const doc = validateDocument(fixture.document);
const points = decisionPoints(doc);

function recorded(name: string): { request: unknown; response: CutResponse } {
  const hit = fixture.exchanges.find((e: { name: string }) => e.name === name);
  assert.ok(hit, `missing recorded exchange ${name}`);
  return hit;
}

test("box around the pop-out mark posts the recorded request", () => {
  // drag from (11, 11) to (13, 5.5) in data coordinates: encloses only the
  // mark at (potential 12, edge length 10)
  const bounds = dragToBox(11.0, 11.0, 13.0, 5.5);
  const selected = marksInBox(points, bounds);
  assert.deepEqual(selected.map((p) => p.id), [4]);
  assert.deepEqual(selectionToSpec({ kind: "box", bounds }), recorded("box-around-popout").request);
});

test("box labels equal the CLI topk:1 labels", () => {
  const boxLabels = recorded("box-around-popout").response.labels;
  assert.deepEqual(boxLabels, fixture.cli_labels_topk1);
  assert.deepEqual(boxLabels, recorded("topk-1").response.labels);
});

test("picking the pop-out node gives the same labels as the CLI cut", () => {
  const sel: Selection = { kind: "nodes", ids: [4] };
  assert.deepEqual(selectionToSpec(sel), recorded("nodes-popout").request);
  assert.deepEqual(recorded("nodes-popout").response.labels, fixture.cli_labels_topk1);
});

test("displayed cluster count is selection size + 1 for sizes 0, 1, 3", () => {
  const cases: { sel: Selection; exchange: string }[] = [
    {
      sel: { kind: "box", bounds: { minEdgeLen: 11.0, maxPotential: 2.0 } },
      exchange: "box-empty",
    },
    {
      sel: { kind: "box", bounds: { minEdgeLen: 5.5, maxPotential: 13.0 } },
      exchange: "box-around-popout",
    },
    { sel: { kind: "nodes", ids: [0, 2, 3] }, exchange: "nodes-three" },
  ];
  const sizes: number[] = [];
  for (const { sel, exchange } of cases) {
    const size = selectionSize(points, sel);
    sizes.push(size);
    const { request, response } = recorded(exchange);
    assert.deepEqual(selectionToSpec(sel), request);
    assert.equal(response.clusters, size + 1);
    assert.equal(response.labels.length, doc.n);
    assert.equal(new Set(response.labels).size, response.clusters);
  }
  assert.deepEqual(sizes, [0, 1, 3]);
});

test("empty selection keeps everything in one cluster", () => {
  assert.equal(recorded("box-empty").response.clusters, 1);
  assert.deepEqual(selectionToSpec({ kind: "none" }), { nodes: [] });
});
