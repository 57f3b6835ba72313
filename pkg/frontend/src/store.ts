/** Explorer state: the canvas graph, highlights, the centrality table and
 * the inspection drawer. Views subscribe and re-render on change.
 *
 * Concurrent fetches are allowed; every fetch records a sequence number
 * and a response is dropped when a newer request of the same kind has
 * been issued since (stale responses never clobber fresh state).
 */

import {
  ApiClient,
  CentralityRow,
  CompletenessReport,
  GraphSummary,
  Metric,
  TraceReport,
  TraversalForm,
  Triple,
} from "./api.js";
import { LayoutGraph, RENDER_CAP, buildLayout } from "./layout.js";

export type SortDirection = "asc" | "desc";

export interface ExplorerState {
  summary: GraphSummary | null;
  graph: LayoutGraph;
  /** edge ids returned by the latest traversal search */
  highlightedEdges: Set<number>;
  /** node id selected from the centrality table, if any */
  highlightedNode: number | null;
  /** true when the last load exceeded the render cap */
  showTruncationBanner: boolean;
  metric: Metric;
  tableRows: CentralityRow[];
  sortColumn: keyof CentralityRow;
  sortDirection: SortDirection;
  completeness: CompletenessReport | null;
  trace: TraceReport | null;
  lastError: string | null;
}

type Listener = (state: ExplorerState) => void;

function emptyGraph(): LayoutGraph {
  return { nodes: [], edges: [], truncated: false };
}

export class ExplorerStore {
  private state: ExplorerState = {
    summary: null,
    graph: emptyGraph(),
    highlightedEdges: new Set(),
    highlightedNode: null,
    showTruncationBanner: false,
    metric: "relevance",
    tableRows: [],
    sortColumn: "relevance",
    sortDirection: "desc",
    completeness: null,
    trace: null,
    lastError: null,
  };

  private listeners: Listener[] = [];
  private seq: Record<string, number> = {};

  constructor(
    private readonly api: ApiClient,
    private readonly renderCap = RENDER_CAP,
  ) {}

  getState(): ExplorerState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private commit(patch: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...patch };
    for (const l of this.listeners) l(this.state);
  }

  private nextSeq(kind: string): number {
    this.seq[kind] = (this.seq[kind] ?? 0) + 1;
    return this.seq[kind]!;
  }

  private isCurrent(kind: string, n: number): boolean {
    return this.seq[kind] === n;
  }

  async refreshSummary(): Promise<void> {
    const n = this.nextSeq("summary");
    try {
      const summary = await this.api.summary();
      if (!this.isCurrent("summary", n)) return;
      this.commit({
        summary,
        showTruncationBanner: summary.node_count > this.renderCap,
        lastError: null,
      });
    } catch (err) {
      if (this.isCurrent("summary", n)) this.commit({ lastError: String(err) });
    }
  }

  /** Run the search side panel's traversal form: lay out the result and
   * highlight every returned edge. */
  async runTraversal(form: TraversalForm): Promise<Triple[]> {
    const n = this.nextSeq("traverse");
    const triples = await this.api.traverse(form);
    if (!this.isCurrent("traverse", n)) return triples;
    const graph = buildLayout(triples, this.renderCap);
    this.commit({
      graph,
      highlightedEdges: new Set(graph.edges.map((e) => e.edgeId)),
      showTruncationBanner:
        graph.truncated ||
        (this.state.summary !== null &&
          this.state.summary.node_count > this.renderCap),
      lastError: null,
    });
    return triples;
  }

  async selectMetric(metric: Metric): Promise<void> {
    const n = this.nextSeq("centrality");
    const rows = await this.api.centrality(metric);
    if (!this.isCurrent("centrality", n)) return;
    // the server returns rows sorted by the requested metric, descending
    this.commit({
      metric,
      tableRows: rows,
      sortColumn: metric,
      sortDirection: "desc",
      lastError: null,
    });
  }

  /** Re-sort rows already fetched; clicking the active column flips order. */
  sortBy(column: keyof CentralityRow): void {
    const direction: SortDirection =
      this.state.sortColumn === column && this.state.sortDirection === "desc"
        ? "asc"
        : "desc";
    const rows = [...this.state.tableRows].sort((a, b) => {
      const av = a[column];
      const bv = b[column];
      const cmp =
        typeof av === "number" && typeof bv === "number"
          ? av - bv
          : String(av).localeCompare(String(bv));
      return direction === "asc" ? cmp : -cmp;
    });
    this.commit({ tableRows: rows, sortColumn: column, sortDirection: direction });
  }

  /** Clicking a table row highlights that node on the canvas. */
  selectRow(nodeId: number): void {
    this.commit({ highlightedNode: nodeId });
  }

  async openCompleteness(databookId: string): Promise<void> {
    const n = this.nextSeq("completeness");
    const report = await this.api.completeness(databookId);
    if (this.isCurrent("completeness", n)) {
      this.commit({ completeness: report, lastError: null });
    }
  }

  async openTrace(docId: string, maxDepth = 16): Promise<void> {
    const n = this.nextSeq("trace");
    const report = await this.api.trace(docId, maxDepth);
    if (this.isCurrent("trace", n)) {
      this.commit({ trace: report, lastError: null });
    }
  }

  async deleteDatabook(databookId: string): Promise<void> {
    await this.api.deleteDatabook(databookId);
    this.commit({ completeness: null, trace: null });
    await this.refreshSummary();
  }
}
