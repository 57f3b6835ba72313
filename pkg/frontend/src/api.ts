/** Typed client for the graphled HTTP API.
 *
 * The explorer never mutates server state except through these endpoints
 * and never recomputes analytics client-side: everything rendered comes
 * straight from an API response.
 */

export interface ApiNode {
  node_id: number;
  label: string;
  props: Record<string, string>;
}

export interface ApiEdge {
  edge_id: number;
  src: number;
  dst: number;
  rel_type: string;
  props: Record<string, string>;
}

export interface Triple {
  src: ApiNode;
  edge: ApiEdge;
  dst: ApiNode;
}

export interface GraphSummary {
  node_count: number;
  edge_count: number;
  labels: Record<string, number>;
}

export interface TraversalForm {
  src_label?: string;
  rel_type?: string;
  dst_label?: string;
  prop_filters?: { key: string; value: string }[];
  limit?: number;
}

export type Metric =
  | "degree"
  | "betweenness"
  | "closeness"
  | "eigenvector"
  | "relevance";

export interface CentralityRow {
  node_id: number;
  label: string;
  degree: number;
  betweenness: number;
  closeness: number;
  eigenvector: number;
  relevance: number;
}

export interface CompletenessReport {
  databook_id: string;
  is_complete: boolean;
  missing_doc_types: string[];
  isolated_documents: string[];
  connected: boolean;
}

export interface TraceReport {
  root: string;
  visited: { doc_id: string; via: string }[];
  broken_links: { doc_id: string; key: string; reason: string }[];
  flagged_databooks: string[];
  complete_trace: boolean;
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
}

export class ApiRequestError extends Error {
  constructor(public readonly detail: ApiError) {
    super(`${detail.code}: ${detail.message}`);
  }
}

async function unwrap<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiRequestError(body as ApiError);
  }
  return body as T;
}

/** The single configuration knob: the service endpoint URL. */
export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  async summary(): Promise<GraphSummary> {
    return unwrap(await fetch(`${this.baseUrl}/v1/graph/summary`));
  }

  async traverse(form: TraversalForm): Promise<Triple[]> {
    const resp = await fetch(`${this.baseUrl}/v1/query/traverse`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(form),
    });
    const body = await unwrap<{ triples: Triple[] }>(resp);
    return body.triples;
  }

  async centrality(metric: Metric, top?: number): Promise<CentralityRow[]> {
    const params = new URLSearchParams({ metric });
    if (top !== undefined) params.set("top", String(top));
    const resp = await fetch(`${this.baseUrl}/v1/centrality?${params}`);
    const body = await unwrap<{ rows: CentralityRow[] }>(resp);
    return body.rows;
  }

  async completeness(databookId: string): Promise<CompletenessReport> {
    return unwrap(
      await fetch(
        `${this.baseUrl}/v1/inspect/completeness/${encodeURIComponent(databookId)}`,
      ),
    );
  }

  async trace(docId: string, maxDepth = 16): Promise<TraceReport> {
    return unwrap(
      await fetch(
        `${this.baseUrl}/v1/inspect/trace/${encodeURIComponent(docId)}?max_depth=${maxDepth}`,
      ),
    );
  }

  async deleteDatabook(
    databookId: string,
  ): Promise<{ deleted_nodes: number; deleted_edges: number }> {
    return unwrap(
      await fetch(
        `${this.baseUrl}/v1/graph/${encodeURIComponent(databookId)}`,
        { method: "DELETE" },
      ),
    );
  }

  async ingest(loaderJson: string): Promise<{
    databooks: number;
    documents: number;
    mentions: number;
  }> {
    return unwrap(
      await fetch(`${this.baseUrl}/v1/ingest`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: loaderJson,
      }),
    );
  }
}
