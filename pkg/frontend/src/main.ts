/** DOM wiring: canvas render loop, search form, centrality table and the
 * inspection drawer. All state lives in ExplorerStore; this file only
 * translates DOM events into store calls and store state into pixels.
 */

import { ApiClient, CentralityRow, Metric } from "./api.js";
import { colorFor, step } from "./layout.js";
import { ExplorerState, ExplorerStore } from "./store.js";

const COLUMNS: (keyof CentralityRow)[] = [
  "node_id",
  "label",
  "degree",
  "betweenness",
  "closeness",
  "eigenvector",
  "relevance",
];

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

export function mount(endpoint: string): ExplorerStore {
  const api = new ApiClient(endpoint);
  const store = new ExplorerStore(api);

  const canvas = el<HTMLCanvasElement>("canvas");
  const ctx = canvas.getContext("2d")!;
  const banner = el<HTMLDivElement>("truncation-banner");
  const summaryBox = el<HTMLDivElement>("summary");
  const tableBody = el<HTMLTableSectionElement>("table-body");
  const tableHead = el<HTMLTableRowElement>("table-head");
  const drawer = el<HTMLDivElement>("drawer");

  function renderFrame(): void {
    const { graph, highlightedEdges, highlightedNode } = store.getState();
    step(graph);
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.save();
    ctx.translate(canvas.width / 2, canvas.height / 2);
    const byId = new Map(graph.nodes.map((n) => [n.id, n]));
    for (const e of graph.edges) {
      const a = byId.get(e.src);
      const b = byId.get(e.dst);
      if (!a || !b) continue;
      ctx.strokeStyle = highlightedEdges.has(e.edgeId) ? "#ff6b6b" : "#ced4da";
      ctx.lineWidth = highlightedEdges.has(e.edgeId) ? 2.5 : 1;
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    }
    for (const n of graph.nodes) {
      ctx.fillStyle = colorFor(n.label);
      ctx.beginPath();
      ctx.arc(n.x, n.y, n.id === highlightedNode ? 9 : 5, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.restore();
    requestAnimationFrame(renderFrame);
  }

  function renderState(state: ExplorerState): void {
    banner.hidden = !state.showTruncationBanner;
    if (state.summary) {
      summaryBox.textContent =
        `${state.summary.node_count} nodes / ${state.summary.edge_count} edges`;
    }
    tableBody.replaceChildren(
      ...state.tableRows.map((row) => {
        const tr = document.createElement("tr");
        tr.onclick = () => store.selectRow(row.node_id);
        for (const col of COLUMNS) {
          const td = document.createElement("td");
          const v = row[col];
          td.textContent = typeof v === "number" ? v.toPrecision(4) : String(v);
          tr.appendChild(td);
        }
        return tr;
      }),
    );
    if (state.completeness) {
      const c = state.completeness;
      drawer.textContent =
        `${c.databook_id}: ${c.is_complete ? "COMPLETE" : "INCOMPLETE"}` +
        (c.missing_doc_types.length
          ? ` — missing ${c.missing_doc_types.join(", ")}`
          : "") +
        (c.isolated_documents.length
          ? ` — isolated ${c.isolated_documents.join(", ")}`
          : "");
    }
    if (state.lastError) {
      summaryBox.textContent = state.lastError;
    }
  }

  tableHead.replaceChildren(
    ...COLUMNS.map((col) => {
      const th = document.createElement("th");
      th.textContent = col;
      th.onclick = () => store.sortBy(col);
      return th;
    }),
  );

  el<HTMLFormElement>("search-form").onsubmit = (ev) => {
    ev.preventDefault();
    const v = (id: string) => el<HTMLInputElement>(id).value.trim();
    void store.runTraversal({
      src_label: v("src-label") || undefined,
      rel_type: v("rel-type") || undefined,
      dst_label: v("dst-label") || undefined,
      prop_filters: v("prop-key")
        ? [{ key: v("prop-key"), value: v("prop-value") }]
        : [],
      limit: Number(v("limit") || "1000"),
    });
  };

  el<HTMLSelectElement>("metric").onchange = (ev) => {
    void store.selectMetric((ev.target as HTMLSelectElement).value as Metric);
  };

  el<HTMLFormElement>("drawer-form").onsubmit = (ev) => {
    ev.preventDefault();
    const databook = el<HTMLInputElement>("databook-id").value.trim();
    if (databook) void store.openCompleteness(databook);
  };

  el<HTMLButtonElement>("delete-databook").onclick = () => {
    const databook = el<HTMLInputElement>("databook-id").value.trim();
    if (databook) void store.deleteDatabook(databook);
  };

  store.subscribe(renderState);
  void store.refreshSummary();
  void store.selectMetric("relevance");
  requestAnimationFrame(renderFrame);
  return store;
}
