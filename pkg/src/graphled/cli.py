"""Command-line entry point: pipeline, inspections, benchmark, server."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .centrality import centrality_table, table_to_csv
from .disambiguation import (
    FilterConfig,
    ambiguity_metrics,
    disambiguate,
    load_filter_config,
    load_stopwords,
)
from .errors import GraphledError
from .graphstore import PropertyGraph, build_graph
from .ingest import extract_entities, parse_loader_json
from .inspection import (
    check_completeness,
    check_conformance,
    classify_ocr_accuracy,
    corpus_accuracy_summary,
    load_rules,
    trace,
)
from .service import DEFAULT_LISTEN, serve
from .workload import WorkloadSpec, run_benchmark


def _load_config(args) -> FilterConfig:
    cfg = load_filter_config(args.config) if getattr(args, "config", None) else FilterConfig()
    if getattr(args, "stopwords", None):
        cfg = FilterConfig(
            stopwords=load_stopwords(args.stopwords),
            lev_max_norm_dist=cfg.lev_max_norm_dist,
            lev_len_ratio_band=cfg.lev_len_ratio_band,
            lcs_min_sim=cfg.lcs_min_sim,
            sm_min_ratio=cfg.sm_min_ratio,
            junk_chars=cfg.junk_chars,
        )
    return cfg


def _pipeline(loader_path: str, cfg: FilterConfig):
    with open(loader_path, "rb") as fh:
        ds = parse_loader_json(fh.read())
    mentions = extract_entities(ds)
    if not mentions:
        from .disambiguation import DisambiguationReport
        report = DisambiguationReport(
            canonical_of={}, clusters=[], provenance=[], removed_count=0)
    else:
        report = disambiguate(mentions, cfg)
    return ds, mentions, report


def cmd_ingest(args) -> int:
    ds, mentions, report = _pipeline(args.loader, _load_config(args))
    g = build_graph(ds, report)
    size = g.save(args.out)
    print(f"documents={len(ds.documents)} databooks={len(ds.databooks)} "
          f"mentions={len(mentions)}")
    print(f"nodes={g.node_count()} edges={g.edge_count()} bytes={size}")
    return 0


def cmd_disambiguate(args) -> int:
    _, mentions, report = _pipeline(args.loader, _load_config(args))
    distinct = len({m.raw_value for m in mentions})
    metrics = ambiguity_metrics(report, distinct, args.ground_truth)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    print(f"mentions={len(mentions)} distinct_raw={distinct} "
          f"canonical={len(report.clusters)} removed={report.removed_count}")
    print(f"reduction={100 * metrics['reduction_pct']:.2f}%")
    if "removal_pct" in metrics:
        print(f"removal={100 * metrics['removal_pct']:.2f}%")
    return 0


def cmd_inspect(args) -> int:
    ok = True
    if args.task == "completeness":
        g = PropertyGraph.load(args.graph, indexed_keys=["doc_id", "value", "databook_id"])
        databook_ids = ([args.databook] if args.databook else
                        sorted(g.node(n).props["databook_id"]
                               for n in g.nodes_by_label("databook")))
        for db_id in databook_ids:
            rep = check_completeness(g, db_id)
            ok &= rep.is_complete
            print(json.dumps(rep.to_dict()))
    elif args.task == "conformance":
        with open(args.loader, "rb") as fh:
            ds = parse_loader_json(fh.read())
        with open(args.rules, "rb") as fh:
            rules = load_rules(fh.read())
        results = check_conformance(ds, rules)
        for r in results:
            ok &= r["verdict"] != "fail"
            print(f"{r['doc_id']}\t{r['rule_id']}\t{r['verdict']}\t{r['detail']}")
    elif args.task == "trace":
        g = PropertyGraph.load(args.graph, indexed_keys=["doc_id", "value", "databook_id"])
        rep = trace(g, args.root, max_depth=args.max_depth)
        ok = rep.complete_trace
        print(json.dumps(rep.to_dict(), indent=2))
    return 0 if ok else 1


def cmd_centrality(args) -> int:
    g = PropertyGraph.load(args.graph)
    rows = centrality_table(g)
    rows.sort(key=lambda r: r[args.metric], reverse=True)
    if args.top:
        rows = rows[:args.top]
    sys.stdout.write(table_to_csv(rows))
    return 0


def cmd_bench(args) -> int:
    if args.spec:
        with open(args.spec, "rb") as fh:
            spec = WorkloadSpec.from_json(fh.read())
    else:
        spec = WorkloadSpec()
    if args.seed is not None:
        spec.seed = args.seed
    report = run_benchmark(spec)
    csv_text = report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    sys.stdout.write(csv_text)
    print(f"nodes={report.node_count} edges={report.edge_count} "
          f"audit_problems={len(report.audit_problems)}")
    return 0 if not report.audit_problems else 1


def cmd_ocr_eval(args) -> int:
    with open(args.pairs, encoding="utf-8") as fh:
        pairs = json.load(fh)
    labels = [classify_ocr_accuracy(p["ocr"], p["truth"]) for p in pairs]
    summary = corpus_accuracy_summary(labels)
    print(f"fields={len(labels)}")
    print(f"total_hit={summary['total_hit_pct']:.2f}%")
    print(f"partial_hit={summary['partial_pct']:.2f}%")
    print(f"inconsistency={summary['inconsistency_pct']:.2f}%")
    return 0


def cmd_serve(args) -> int:
    serve(args.listen)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphled",
        description="Linked engineering document graphs: ingest, disambiguate, "
                    "inspect, benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse, disambiguate, build and save a graph")
    p.add_argument("loader", help="loader JSON file")
    p.add_argument("--out", required=True, help="output graph file (.gl)")
    p.add_argument("--config", help="filter config file (key=value)")
    p.add_argument("--stopwords", help="stopword list file")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("disambiguate", help="run the pipeline and print metrics")
    p.add_argument("loader")
    p.add_argument("--report", help="write DisambiguationReport JSON here")
    p.add_argument("--config")
    p.add_argument("--stopwords")
    p.add_argument("--ground-truth", type=int, default=None,
                   help="known number of true entities (enables removal%%)")
    p.set_defaults(func=cmd_disambiguate)

    p = sub.add_parser("inspect", help="run an inspection; exit 0 iff all pass")
    insp = p.add_subparsers(dest="task", required=True)
    c = insp.add_parser("completeness")
    c.add_argument("graph", help="graph file saved by ingest")
    c.add_argument("--databook", help="only this databook (default: all)")
    t = insp.add_parser("conformance")
    t.add_argument("loader")
    t.add_argument("--rules", required=True, help="JSON rules file")
    tr = insp.add_parser("trace")
    tr.add_argument("graph")
    tr.add_argument("--root", required=True, help="root doc_id")
    tr.add_argument("--max-depth", type=int, default=16)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("centrality", help="centrality table as CSV on stdout")
    p.add_argument("graph")
    p.add_argument("--metric", default="relevance",
                   choices=["degree", "betweenness", "closeness",
                            "eigenvector", "relevance"])
    p.add_argument("--top", type=int, default=None)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("bench", help="run the workload benchmark")
    p.add_argument("--spec", help="WorkloadSpec JSON file (default: built-in mix)")
    p.add_argument("--out", help="write the report CSV here")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ocr-eval", help="grade OCR/ground-truth field pairs")
    p.add_argument("pairs", help='JSON: [{"ocr": ..., "truth": ...}, ...]')
    p.set_defaults(func=cmd_ocr_eval)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--listen",
                   default=os.environ.get("GRAPHLED_LISTEN", DEFAULT_LISTEN))
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphledError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
