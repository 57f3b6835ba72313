"""HTTP API over the pipeline and graph operations.

Single active graph per server. Ingest builds the new graph off to the
side and swaps it in atomically, so concurrent readers always see either
the old or the new graph, never a half-built one. Benchmarks run on a
scratch store and never touch the active graph.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import centrality as centrality_mod
from .disambiguation import FilterConfig, disambiguate
from .errors import GraphledError
from .graphstore import (
    PropertyGraph,
    TraversalQuery,
    build_graph,
    delete_databook,
)
from .ingest import DocumentSet, extract_entities, parse_loader_json, serialize_document_set
from .inspection import check_completeness, check_conformance, load_rules, trace
from .workload import WorkloadSpec, run_benchmark

DEFAULT_LISTEN = "127.0.0.1:8098"

METRICS = ("degree", "betweenness", "closeness", "eigenvector", "relevance")


class ServerState:
    def __init__(self):
        self.graph = PropertyGraph()
        self.document_set = DocumentSet()
        self.write_lock = threading.Lock()  # serializes ingest/delete


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


def _node_dict(n):
    return {"node_id": n.node_id, "label": n.label, "props": n.props}


def _edge_dict(e):
    return {"edge_id": e.edge_id, "src": e.src, "dst": e.dst,
            "rel_type": e.rel_type, "props": e.props}


def create_app(cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="graphled", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = ServerState()
    app.state.graphled = state

    @app.exception_handler(GraphledError)
    async def graphled_error_handler(request: Request, exc: GraphledError):
        return _error_response(exc.http_status, exc.code, str(exc))

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return _error_response(400, "bad_request", str(exc))

    @app.post("/v1/ingest", status_code=201)
    async def ingest(request: Request):
        body = await request.body()
        with state.write_lock:
            ds = parse_loader_json(body)
            mentions = extract_entities(ds)
            if mentions:
                report = disambiguate(mentions, FilterConfig())
            else:
                from .disambiguation import DisambiguationReport
                report = DisambiguationReport(
                    canonical_of={}, clusters=[], provenance=[], removed_count=0)
            graph = build_graph(ds, report)
            # atomic swap: readers see old or new, never partial
            state.document_set = ds
            state.graph = graph
        return {
            "databooks": len(ds.databooks),
            "documents": len(ds.documents),
            "mentions": len(mentions),
        }

    @app.get("/v1/graph/summary")
    async def summary():
        g = state.graph
        with g.read_lock:
            return {
                "node_count": g.node_count(),
                "edge_count": g.edge_count(),
                "labels": g.label_histogram(),
            }

    @app.post("/v1/query/traverse")
    async def traverse_route(request: Request):
        body = await request.json()
        q = TraversalQuery(
            src_label=body.get("src_label"),
            rel_type=body.get("rel_type"),
            dst_label=body.get("dst_label"),
            prop_filters=[(f["key"], f["value"])
                          for f in body.get("prop_filters", [])],
            limit=body.get("limit", 1000),
        )
        triples = state.graph.traverse(q)
        return {
            "triples": [
                {"src": _node_dict(s), "edge": _edge_dict(e), "dst": _node_dict(d)}
                for s, e, d in triples
            ]
        }

    @app.get("/v1/centrality")
    async def centrality_route(metric: str = "relevance", top: int | None = None):
        if metric not in METRICS:
            return _error_response(
                400, "bad_metric",
                f"metric must be one of {', '.join(METRICS)}")
        g = state.graph
        with g.read_lock:
            rows = centrality_mod.centrality_table(g)
        rows.sort(key=lambda r: r[metric], reverse=True)
        if top is not None:
            rows = rows[:top]
        return {"metric": metric, "rows": rows}

    @app.get("/v1/inspect/completeness/{databook_id}")
    async def completeness_route(databook_id: str):
        g = state.graph
        with g.read_lock:
            return check_completeness(g, databook_id).to_dict()

    @app.post("/v1/inspect/conformance")
    async def conformance_route(request: Request):
        body = await request.body()
        rules = load_rules(body)
        return {"results": check_conformance(state.document_set, rules)}

    @app.get("/v1/inspect/trace/{doc_id}")
    async def trace_route(doc_id: str, max_depth: int = 16):
        g = state.graph
        with g.read_lock:
            return trace(g, doc_id, max_depth=max_depth).to_dict()

    @app.delete("/v1/graph/{databook_id}")
    async def delete_route(databook_id: str):
        with state.write_lock:
            counts = delete_databook(state.graph, databook_id)
            state.document_set = DocumentSet(
                documents=list(state.document_set.documents),
                databooks=[db for db in state.document_set.databooks
                           if db.databook_id != databook_id],
            )
        return counts

    @app.post("/v1/benchmark")
    async def benchmark_route(request: Request):
        body = await request.body()
        spec = WorkloadSpec.from_json(body)
        report = run_benchmark(spec)  # scratch store, never the active graph
        return report.to_dict()

    @app.get("/v1/export")
    async def export_route():
        return JSONResponse(content={"loader": serialize_document_set(state.document_set)})

    return app


def serve(listen: str = DEFAULT_LISTEN, cors_origins: list[str] | None = None):
    import uvicorn

    host, _, port = listen.partition(":")
    uvicorn.run(create_app(cors_origins), host=host or "127.0.0.1",
                port=int(port or 8098), log_level="info")
