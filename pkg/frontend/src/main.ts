/** App wiring: load the document, render, post selections, recolor. */
import { ApiError, Client } from "./api.js";
import {
  decisionPoints,
  marksInBox,
  selectionSize,
  selectionToSpec,
  validateDocument,
} from "./model.js";
import { renderDataPanel, renderRankPanel } from "./panels.js";
import { DecisionScatter } from "./scatter.js";
import type { DecisionGraphDocument, Selection } from "./types.js";

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function showBanner(message: string | null): void {
  const banner = byId("banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

class App {
  private selection: Selection = { kind: "none" };
  private scatter: DecisionScatter;
  private points;

  constructor(
    private client: Client,
    private doc: DecisionGraphDocument,
  ) {
    this.points = decisionPoints(doc);
    byId("meta").textContent =
      `${doc.n} nodes, ${this.points.length} candidate edges, ` +
      `layer root counts ${doc.trace.join(" > ") || "n/a"}`;
    this.scatter = new DecisionScatter(byId("scatter"), this.points, {
      onBox: (bounds) => this.select({ kind: "box", bounds }),
      onPick: (id, additive) => this.pick(id, additive),
    });
    if (this.points.length === 0) {
      showBanner("single-node dataset: nothing to cut");
    }
    renderDataPanel(byId("dataview"), doc, null);
    renderRankPanel(byId("rankpanel"), doc, new Set());
    byId("clusters").textContent = "1 cluster (no cut)";
    byId("clear").addEventListener("click", () =>
      this.select({ kind: "none" }),
    );
  }

  private pick(id: number, additive: boolean): void {
    let ids: number[];
    if (additive && this.selection.kind === "nodes") {
      const have = new Set(this.selection.ids);
      if (have.has(id)) have.delete(id);
      else have.add(id);
      ids = [...have];
    } else {
      ids = [id];
    }
    this.select({ kind: "nodes", ids });
  }

  /** Selections replace each other; each one posts a fresh cut. */
  private async select(sel: Selection): Promise<void> {
    this.selection = sel;
    this.scatter.showSelection(sel);
    const size = selectionSize(this.points, sel);
    const selectedIds =
      sel.kind === "nodes"
        ? new Set(sel.ids)
        : sel.kind === "box"
          ? new Set(marksInBox(this.points, sel.bounds).map((p) => p.id))
          : new Set<number>();
    renderRankPanel(byId("rankpanel"), this.doc, selectedIds);
    try {
      const cut = await this.client.cut(selectionToSpec(sel));
      showBanner(null);
      byId("clusters").textContent =
        `${cut.clusters} cluster${cut.clusters === 1 ? "" : "s"} ` +
        `(${size} edge${size === 1 ? "" : "s"} selected)`;
      renderDataPanel(byId("dataview"), this.doc, cut.labels);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") {
        return; // a newer selection took over
      }
      // selection stays in place so the user can adjust it
      showBanner(err instanceof ApiError ? err.message : String(err));
    }
  }
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  const client = new Client(base);
  try {
    const doc = validateDocument(await client.decisionGraph());
    new App(client, doc);
  } catch (err) {
    showBanner(
      err instanceof ApiError
        ? `server error: ${err.message}`
        : `invalid decision-graph document: ${err instanceof Error ? err.message : err}`,
    );
  }
}

boot();
