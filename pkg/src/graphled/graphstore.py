"""Embedded property-graph store.

Labelled nodes and edges with string properties, adjacency and label
indexes, optional hash indexes on declared property keys, node-edge-node
traversal queries and JSON-lines persistence. Concurrency contract:
many readers or one writer; readers never observe partial mutations.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

from .errors import (
    AmbiguousMerge,
    FormatError,
    UnknownDatabook,
    UnknownNode,
)

LABELS = ("document", "topic", "databook", "synthetic")
MAGIC = "GRAPHLED1"


@dataclass(frozen=True)
class Node:
    node_id: int
    label: str
    props: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    edge_id: int
    src: int
    dst: int
    rel_type: str
    props: dict[str, str] = field(default_factory=dict)


@dataclass
class TraversalQuery:
    src_label: str | None = None
    rel_type: str | None = None
    dst_label: str | None = None
    prop_filters: list[tuple[str, str]] = field(default_factory=list)
    limit: int = 1000

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("limit must be >= 1")


class _RWLock:
    """Writer-preferring readers/writer lock."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False
        self._writers_waiting = 0

    def acquire_read(self):
        with self._cond:
            while self._writer or self._writers_waiting:
                self._cond.wait()
            self._readers += 1

    def release_read(self):
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_write(self):
        with self._cond:
            self._writers_waiting += 1
            while self._writer or self._readers:
                self._cond.wait()
            self._writers_waiting -= 1
            self._writer = True

    def release_write(self):
        with self._cond:
            self._writer = False
            self._cond.notify_all()


class _ReadGuard:
    def __init__(self, lock):
        self._lock = lock

    def __enter__(self):
        self._lock.acquire_read()

    def __exit__(self, *exc):
        self._lock.release_read()


class _WriteGuard:
    def __init__(self, lock):
        self._lock = lock

    def __enter__(self):
        self._lock.acquire_write()

    def __exit__(self, *exc):
        self._lock.release_write()


class PropertyGraph:
    """In-memory property graph with dense integer ids (never reused)."""

    def __init__(self, indexed_keys: list[str] | None = None):
        self._nodes: dict[int, Node] = {}
        self._edges: dict[int, Edge] = {}
        self._out: dict[int, list[int]] = {}
        self._in: dict[int, list[int]] = {}
        self._by_label: dict[str, set[int]] = {}
        self._indexed_keys = set(indexed_keys or [])
        self._prop_index: dict[tuple[str, str], set[int]] = {}
        self._next_node = 0
        self._next_edge = 0
        self._lock = _RWLock()
        self.read_lock = _ReadGuard(self._lock)
        self.write_lock = _WriteGuard(self._lock)

    # ------------------------------------------------------------ basics

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    def nodes(self):
        return list(self._nodes)

    def edges(self):
        return list(self._edges.values())

    def node(self, node_id: int) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node {node_id}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._nodes

    def label_histogram(self) -> dict[str, int]:
        return {lab: len(ids) for lab, ids in sorted(self._by_label.items()) if ids}

    def nodes_by_label(self, label: str) -> list[int]:
        return sorted(self._by_label.get(label, ()))

    def out_edges(self, node_id: int) -> list[Edge]:
        self.node(node_id)
        return [self._edges[e] for e in self._out[node_id]]

    def in_edges(self, node_id: int) -> list[Edge]:
        self.node(node_id)
        return [self._edges[e] for e in self._in[node_id]]

    def degree(self, node_id: int) -> int:
        # self-loop appears in both lists, hence counts 2
        return len(self._out[node_id]) + len(self._in[node_id])

    def neighbors(self, node_id: int) -> set[int]:
        """Undirected simple neighborhood (self excluded)."""
        out = {self._edges[e].dst for e in self._out[node_id]}
        out |= {self._edges[e].src for e in self._in[node_id]}
        out.discard(node_id)
        return out

    # --------------------------------------------------------- mutations

    def create_node(self, label: str, props: dict[str, str] | None = None) -> int:
        if label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        props = dict(props or {})
        with self.write_lock:
            node_id = self._next_node
            self._next_node += 1
            self._nodes[node_id] = Node(node_id, label, props)
            self._out[node_id] = []
            self._in[node_id] = []
            self._by_label.setdefault(label, set()).add(node_id)
            self._index_props(node_id, props)
            return node_id

    def _index_props(self, node_id, props):
        for key in self._indexed_keys & props.keys():
            self._prop_index.setdefault((key, props[key]), set()).add(node_id)

    def _unindex_props(self, node_id, props):
        for key in self._indexed_keys & props.keys():
            bucket = self._prop_index.get((key, props[key]))
            if bucket:
                bucket.discard(node_id)

    def create_edge(self, src: int, dst: int, rel_type: str,
                    props: dict[str, str] | None = None) -> int:
        with self.write_lock:
            if src not in self._nodes:
                raise UnknownNode(f"no node {src}")
            if dst not in self._nodes:
                raise UnknownNode(f"no node {dst}")
            edge_id = self._next_edge
            self._next_edge += 1
            self._edges[edge_id] = Edge(edge_id, src, dst, rel_type,
                                        dict(props or {}))
            self._out[src].append(edge_id)
            self._in[dst].append(edge_id)
            return edge_id

    def delete_node(self, node_id: int) -> int:
        """Delete a node, cascading incident edges; returns cascade count."""
        with self.write_lock:
            if node_id not in self._nodes:
                raise UnknownNode(f"no node {node_id}")
            incident = set(self._out[node_id]) | set(self._in[node_id])
            for eid in incident:
                e = self._edges.pop(eid)
                if e.src != node_id:
                    self._out[e.src].remove(eid)
                if e.dst != node_id:
                    self._in[e.dst].remove(eid)
            node = self._nodes.pop(node_id)
            self._unindex_props(node_id, node.props)
            self._by_label[node.label].discard(node_id)
            del self._out[node_id]
            del self._in[node_id]
            return len(incident)

    def find_nodes(self, label: str | None = None,
                   props: dict[str, str] | None = None) -> list[int]:
        props = props or {}
        indexed = [k for k in props if k in self._indexed_keys]
        if indexed:
            key = indexed[0]
            candidates = set(self._prop_index.get((key, props[key]), set()))
        elif label is not None:
            candidates = set(self._by_label.get(label, set()))
        else:
            candidates = set(self._nodes)
        out = []
        for nid in candidates:
            node = self._nodes.get(nid)
            if node is None:
                continue
            if label is not None and node.label != label:
                continue
            if all(node.props.get(k) == v for k, v in props.items()):
                out.append(nid)
        return sorted(out)

    def merge_node(self, label: str, match_props: dict[str, str]) -> tuple[int, bool]:
        """Get-or-create a node matching label + all match_props."""
        if not match_props:
            raise ValueError("merge_node requires non-empty match_props")
        if label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        with self.write_lock:
            matches = self._find_unlocked(label, match_props)
            if len(matches) > 1:
                raise AmbiguousMerge(
                    f"{len(matches)} nodes match label={label!r} {match_props!r}"
                )
            if matches:
                return matches[0], False
            node_id = self._next_node
            self._next_node += 1
            props = dict(match_props)
            self._nodes[node_id] = Node(node_id, label, props)
            self._out[node_id] = []
            self._in[node_id] = []
            self._by_label.setdefault(label, set()).add(node_id)
            self._index_props(node_id, props)
            return node_id, True

    def _find_unlocked(self, label, props):
        indexed = [k for k in props if k in self._indexed_keys]
        if indexed:
            key = indexed[0]
            candidates = self._prop_index.get((key, props[key]), set())
        else:
            candidates = self._by_label.get(label, ())
        out = []
        for nid in candidates:
            node = self._nodes[nid]
            if node.label != label:
                continue
            if all(node.props.get(k) == v for k, v in props.items()):
                out.append(nid)
        return sorted(out)

    # ------------------------------------------------------------- query

    def traverse(self, q: TraversalQuery) -> list[tuple[Node, Edge, Node]]:
        """All edge triples matching every constraint, ordered by edge_id."""
        with self.read_lock:
            out = []
            for eid in sorted(self._edges):
                e = self._edges[eid]
                if q.rel_type is not None and e.rel_type != q.rel_type:
                    continue
                src = self._nodes[e.src]
                dst = self._nodes[e.dst]
                if q.src_label is not None and src.label != q.src_label:
                    continue
                if q.dst_label is not None and dst.label != q.dst_label:
                    continue
                merged = {**src.props, **e.props, **dst.props}
                if any(merged.get(k) != v for k, v in q.prop_filters):
                    continue
                out.append((src, e, dst))
                if len(out) >= q.limit:
                    break
            return out

    # ------------------------------------------------------------- audit

    def audit(self) -> list[str]:
        """Rebuild adjacency from the edge list; report every discrepancy."""
        with self.read_lock:
            problems = []
            want_out = {nid: [] for nid in self._nodes}
            want_in = {nid: [] for nid in self._nodes}
            for eid, e in self._edges.items():
                if e.src not in self._nodes:
                    problems.append(f"edge {eid} has dangling src {e.src}")
                    continue
                if e.dst not in self._nodes:
                    problems.append(f"edge {eid} has dangling dst {e.dst}")
                    continue
                want_out[e.src].append(eid)
                want_in[e.dst].append(eid)
            for nid in self._nodes:
                if sorted(self._out[nid]) != sorted(want_out[nid]):
                    problems.append(f"out-adjacency mismatch at node {nid}")
                if sorted(self._in[nid]) != sorted(want_in[nid]):
                    problems.append(f"in-adjacency mismatch at node {nid}")
            for label, ids in self._by_label.items():
                for nid in ids:
                    if nid not in self._nodes or self._nodes[nid].label != label:
                        problems.append(f"label index mismatch at node {nid}")
            return problems

    # ------------------------------------------------------- persistence

    def save(self, path) -> int:
        """Write header + JSON lines (nodes strictly before edges)."""
        with self.read_lock:
            lines = [MAGIC]
            for nid in sorted(self._nodes):
                n = self._nodes[nid]
                lines.append(json.dumps(
                    {"n": n.node_id, "l": n.label, "p": n.props},
                    ensure_ascii=False))
            for eid in sorted(self._edges):
                e = self._edges[eid]
                lines.append(json.dumps(
                    {"e": e.edge_id, "s": e.src, "d": e.dst,
                     "t": e.rel_type, "p": e.props},
                    ensure_ascii=False))
        data = ("\n".join(lines) + "\n").encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(data)
        return len(data)

    @classmethod
    def load(cls, path, indexed_keys: list[str] | None = None) -> "PropertyGraph":
        with open(path, "rb") as fh:
            data = fh.read()
        text = data.decode("utf-8", errors="replace")
        if not text.endswith("\n"):
            raise FormatError("truncated file (missing trailing newline)")
        lines = text.split("\n")[:-1]
        if not lines or lines[0] != MAGIC:
            raise FormatError(f"bad magic line, expected {MAGIC!r}")
        g = cls(indexed_keys=indexed_keys)
        seen_edge = False
        for lineno, line in enumerate(lines[1:], start=2):
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"line {lineno}: bad JSON ({exc})") from exc
            if "n" in obj:
                if seen_edge:
                    raise FormatError(f"line {lineno}: node after edges")
                nid, label, props = obj["n"], obj["l"], obj["p"]
                if label not in LABELS:
                    raise FormatError(f"line {lineno}: unknown label {label!r}")
                g._nodes[nid] = Node(nid, label, dict(props))
                g._out[nid] = []
                g._in[nid] = []
                g._by_label.setdefault(label, set()).add(nid)
                g._index_props(nid, props)
                g._next_node = max(g._next_node, nid + 1)
            elif "e" in obj:
                seen_edge = True
                eid = obj["e"]
                src, dst = obj["s"], obj["d"]
                if src not in g._nodes or dst not in g._nodes:
                    raise FormatError(f"line {lineno}: edge endpoint missing")
                g._edges[eid] = Edge(eid, src, dst, obj["t"], dict(obj["p"]))
                g._out[src].append(eid)
                g._in[dst].append(eid)
                g._next_edge = max(g._next_edge, eid + 1)
            else:
                raise FormatError(f"line {lineno}: neither node nor edge")
        return g


# ------------------------------------------------------------- building

def build_graph(ds, report) -> PropertyGraph:
    """Build the document/topic/databook graph from a parsed set + report.

    One document node per Document (input order), one topic node per
    canonical value (merge semantics), a document->topic edge per topic
    mention (rel_type = mention key), one databook node per Databook with
    "contains" edges to its documents.
    """
    from .ingest import extract_entities  # local import avoids cycle at import time

    ds.validate_references()
    g = PropertyGraph(indexed_keys=["doc_id", "value", "databook_id"])
    doc_node: dict[str, int] = {}
    for doc in ds.documents:
        doc_node[doc.doc_id] = g.create_node("document", {
            "doc_id": doc.doc_id,
            "doc_type": doc.doc_type,
            "source_file": doc.source_file,
        })

    topic_node: dict[tuple[str, str], int] = {}
    for m in extract_entities(ds):
        canonical = report.canonical_of.get(m.raw_value, m.raw_value)
        tkey = (m.key, canonical)
        if tkey not in topic_node:
            topic_node[tkey] = g.create_node("topic", {
                "key": m.key,
                "value": canonical,
            })
        g.create_edge(doc_node[m.doc_id], topic_node[tkey], m.key,
                      {"raw_value": m.raw_value})

    for db in ds.databooks:
        db_node = g.create_node("databook", {
            "databook_id": db.databook_id,
            "required_doc_types": json.dumps(list(db.required_doc_types)),
        })
        for doc_id in db.document_ids:
            g.create_edge(db_node, doc_node[doc_id], "contains")
    return g


def databook_node(g: PropertyGraph, databook_id: str) -> int:
    matches = g.find_nodes("databook", {"databook_id": databook_id})
    if not matches:
        raise UnknownDatabook(f"no databook {databook_id!r}")
    return matches[0]


def document_node(g: PropertyGraph, doc_id: str) -> int:
    matches = g.find_nodes("document", {"doc_id": doc_id})
    if not matches:
        raise UnknownNode(f"no document {doc_id!r}")
    return matches[0]


def delete_databook(g: PropertyGraph, databook_id: str) -> dict[str, int]:
    """Remove a databook node, its exclusive documents and orphaned topics."""
    db_nid = databook_node(g, databook_id)
    doc_ids = [e.dst for e in g.out_edges(db_nid) if e.rel_type == "contains"]
    deleted_nodes = 0
    deleted_edges = g.delete_node(db_nid)
    deleted_nodes += 1
    for doc_nid in doc_ids:
        # keep documents still contained in another databook
        still_owned = any(
            g.node(e.src).label == "databook" for e in g.in_edges(doc_nid)
        )
        if still_owned:
            continue
        topics = [e.dst for e in g.out_edges(doc_nid)
                  if g.node(e.dst).label == "topic"]
        deleted_edges += g.delete_node(doc_nid)
        deleted_nodes += 1
        for t in topics:
            if g.has_node(t) and g.degree(t) == 0:
                g.delete_node(t)
                deleted_nodes += 1
    return {"deleted_nodes": deleted_nodes, "deleted_edges": deleted_edges}
