"""Automated inspections: completeness, conformance, traceability, OCR grading."""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field

from .disambiguation import FilterConfig, normalize_tokens
from .errors import (
    EmptyAfterNormalize,
    EmptyCorpus,
    EmptyTruth,
    UnknownNode,
)
from .graphstore import PropertyGraph, databook_node, document_node
from .similarity import sequence_matcher_ratio

PARTIAL_HIT_THRESHOLD = 0.5
DEFAULT_MAX_DEPTH = 16


# ------------------------------------------------------------ completeness

@dataclass
class CompletenessReport:
    databook_id: str
    is_complete: bool
    missing_doc_types: list[str]
    isolated_documents: list[str]
    connected: bool

    def to_dict(self):
        return {
            "databook_id": self.databook_id,
            "is_complete": self.is_complete,
            "missing_doc_types": self.missing_doc_types,
            "isolated_documents": self.isolated_documents,
            "connected": self.connected,
        }


def _databook_documents(g: PropertyGraph, db_nid: int) -> list[int]:
    return [e.dst for e in g.out_edges(db_nid) if e.rel_type == "contains"]


def check_completeness(g: PropertyGraph, databook_id: str,
                       required_doc_types: list[str] | None = None) -> CompletenessReport:
    """Type checklist plus connectivity through shared topic nodes.

    When ``required_doc_types`` is None the list stored on the databook
    node is used.
    """
    db_nid = databook_node(g, databook_id)
    if required_doc_types is None:
        stored = g.node(db_nid).props.get("required_doc_types", "[]")
        required_doc_types = json.loads(stored)

    doc_nids = _databook_documents(g, db_nid)
    present_types = {g.node(d).props.get("doc_type", "generic") for d in doc_nids}
    missing = [t for t in required_doc_types if t not in present_types]

    # induced subgraph: the databook's documents plus the topics they reference
    doc_set = set(doc_nids)
    topic_of: dict[int, set[int]] = {}
    for d in doc_nids:
        topic_of[d] = {e.dst for e in g.out_edges(d)
                       if g.node(e.dst).label == "topic"}
    isolated = sorted(
        g.node(d).props["doc_id"] for d in doc_nids if not topic_of[d]
    )

    connected = True
    if len(doc_nids) > 1:
        seen = set()
        queue = deque(doc_nids[:1])
        seen.add(doc_nids[0])
        while queue:
            d = queue.popleft()
            for t in topic_of[d]:
                for e in g.in_edges(t):
                    other = e.src
                    if other in doc_set and other not in seen:
                        seen.add(other)
                        queue.append(other)
        connected = seen == doc_set
    elif not doc_nids:
        connected = True

    is_complete = not missing and connected
    return CompletenessReport(
        databook_id=databook_id,
        is_complete=is_complete,
        missing_doc_types=missing,
        isolated_documents=isolated,
        connected=connected,
    )


# ------------------------------------------------------------- conformance

@dataclass(frozen=True)
class ConformanceRule:
    rule_id: str
    doc_type: str
    field_key: str
    check: str  # numeric_range | regex_match | value_in_set | required_present
    standard_ref: str = ""
    min_value: float | None = None
    max_value: float | None = None
    units: str = ""
    pattern: str = ""
    allowed: tuple[str, ...] = ()

    def __post_init__(self):
        if self.check == "numeric_range":
            if self.min_value is None or self.max_value is None:
                raise ValueError("numeric_range needs min_value and max_value")
            if self.min_value > self.max_value:
                raise ValueError("numeric_range needs min <= max")
        elif self.check == "regex_match":
            re.compile(self.pattern)
        elif self.check not in ("value_in_set", "required_present"):
            raise ValueError(f"unknown check {self.check!r}")


def load_rules(data: str | bytes) -> list[ConformanceRule]:
    """Rules file: JSON array of rule objects."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    rules = []
    for obj in json.loads(data):
        rules.append(ConformanceRule(
            rule_id=obj["rule_id"],
            doc_type=obj["doc_type"],
            field_key=obj["field_key"],
            check=obj["check"],
            standard_ref=obj.get("standard_ref", ""),
            min_value=obj.get("min"),
            max_value=obj.get("max"),
            units=obj.get("units", ""),
            pattern=obj.get("pattern", ""),
            allowed=tuple(obj.get("allowed", ())),
        ))
    return rules


_DECIMAL = re.compile(r"^[+-]?\d+(?:[.,]\d+)?$")


def parse_decimal(text: str) -> float | None:
    """Decimal with dot or comma separator (OCR locale noise); None if unparseable."""
    text = text.strip()
    if not _DECIMAL.match(text):
        return None
    return float(text.replace(",", "."))


def _eval_rule(rule: ConformanceRule, value: str | None):
    if rule.check == "required_present":
        if value is None or not value.strip():
            return "fail", "field missing"
        return "pass", "present"
    if value is None:
        return "fail", "field missing"
    if rule.check == "numeric_range":
        num = parse_decimal(value)
        if num is None:
            return "fail", "unparseable"
        if rule.min_value <= num <= rule.max_value:
            return "pass", f"{num} in [{rule.min_value}, {rule.max_value}]"
        return "fail", f"{num} outside [{rule.min_value}, {rule.max_value}]"
    if rule.check == "regex_match":
        if re.fullmatch(rule.pattern, value):
            return "pass", "matched"
        return "fail", f"no match for /{rule.pattern}/"
    if rule.check == "value_in_set":
        if value in rule.allowed:
            return "pass", "allowed value"
        return "fail", f"{value!r} not in allowed set"
    return "inapplicable", f"unknown check {rule.check!r}"


def check_conformance(ds, rules: list[ConformanceRule]) -> list[dict]:
    """Evaluate every rule against every document of its doc_type."""
    results = []
    for rule in rules:
        for doc in ds.documents:
            if doc.doc_type != rule.doc_type:
                continue
            value = None
            for block in doc.blocks:
                if block.key == rule.field_key:
                    value = block.value
                    break
            verdict, detail = _eval_rule(rule, value)
            results.append({
                "doc_id": doc.doc_id,
                "rule_id": rule.rule_id,
                "verdict": verdict,
                "detail": detail,
                "standard_ref": rule.standard_ref,
            })
    return results


# ------------------------------------------------------------ traceability

@dataclass
class TraceReport:
    root: str
    visited: list[tuple[str, str]]  # (doc_id, via "key=value" or "" for root)
    broken_links: list[tuple[str, str, str]]  # (doc_id, key, reason)
    flagged_databooks: list[str]
    complete_trace: bool

    def to_dict(self):
        return {
            "root": self.root,
            "visited": [{"doc_id": d, "via": v} for d, v in self.visited],
            "broken_links": [
                {"doc_id": d, "key": k, "reason": r} for d, k, r in self.broken_links
            ],
            "flagged_databooks": self.flagged_databooks,
            "complete_trace": self.complete_trace,
        }


def trace(g: PropertyGraph, root_doc: str,
          max_depth: int = DEFAULT_MAX_DEPTH) -> TraceReport:
    """BFS over document->topic->document links up to max_depth document hops.

    A topic with degree 1 is an unresolved cross-reference (broken link);
    incomplete databooks touched along the way are flagged as faults.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    root_nid = document_node(g, root_doc)

    visited: list[tuple[str, str]] = [(root_doc, "")]
    seen = {root_nid}
    broken: list[tuple[str, str, str]] = []
    seen_topics: set[int] = set()
    frontier = [root_nid]
    depth = 0
    while frontier and depth < max_depth:
        nxt = []
        for d in frontier:
            for e in g.out_edges(d):
                t = e.dst
                if g.node(t).label != "topic":
                    continue
                topic = g.node(t)
                if t not in seen_topics:
                    seen_topics.add(t)
                    if g.degree(t) == 1:
                        broken.append((
                            g.node(d).props["doc_id"],
                            topic.props.get("key", ""),
                            "no counterpart document",
                        ))
                for back in g.in_edges(t):
                    other = back.src
                    if other in seen or g.node(other).label != "document":
                        continue
                    seen.add(other)
                    via = f"{topic.props.get('key', '')}={topic.props.get('value', '')}"
                    visited.append((g.node(other).props["doc_id"], via))
                    nxt.append(other)
        frontier = nxt
        depth += 1

    flagged = []
    for d in seen:
        for e in g.in_edges(d):
            owner = g.node(e.src)
            if owner.label != "databook" or e.rel_type != "contains":
                continue
            db_id = owner.props["databook_id"]
            if db_id in flagged:
                continue
            if not check_completeness(g, db_id).is_complete:
                flagged.append(db_id)
    flagged.sort()

    return TraceReport(
        root=root_doc,
        visited=visited,
        broken_links=broken,
        flagged_databooks=flagged,
        complete_trace=not broken and not flagged,
    )


# ------------------------------------------------------------ OCR grading

@dataclass(frozen=True)
class OcrAccuracyLabel:
    cls: str  # total_hit | partial_hit | inconsistency
    similarity: float


def classify_ocr_accuracy(ocr_value: str, truth_value: str,
                          cfg: FilterConfig | None = None) -> OcrAccuracyLabel:
    """Grade an OCR field against ground truth by normalized block similarity."""
    if not truth_value.strip():
        raise EmptyTruth("ground-truth value is empty")
    # junk must be empty so identical values always grade as total hits
    cfg = cfg or FilterConfig(stopwords=frozenset(), junk_chars=frozenset())
    try:
        a = normalize_tokens(ocr_value, cfg)
    except EmptyAfterNormalize:
        a = ""
    try:
        b = normalize_tokens(truth_value, cfg)
    except EmptyAfterNormalize:
        b = ""
    sim = sequence_matcher_ratio(a, b, cfg.junk_chars)
    if sim == 1.0:
        cls = "total_hit"
    elif sim >= PARTIAL_HIT_THRESHOLD:
        cls = "partial_hit"
    else:
        cls = "inconsistency"
    return OcrAccuracyLabel(cls=cls, similarity=sim)


def corpus_accuracy_summary(labels: list[OcrAccuracyLabel]) -> dict[str, float]:
    if not labels:
        raise EmptyCorpus("no labels to summarize")
    n = len(labels)
    counts = {"total_hit": 0, "partial_hit": 0, "inconsistency": 0}
    for lab in labels:
        counts[lab.cls] += 1
    return {
        "total_hit_pct": 100.0 * counts["total_hit"] / n,
        "partial_pct": 100.0 * counts["partial_hit"] / n,
        "inconsistency_pct": 100.0 * counts["inconsistency"] / n,
    }
