import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from graphled.disambiguation import disambiguate
from graphled.errors import AmbiguousMerge, FormatError, UnknownNode
from graphled.graphstore import (
    PropertyGraph,
    TraversalQuery,
    build_graph,
    delete_databook,
)
from graphled.ingest import extract_entities, parse_loader_json


def _star_loader(n_docs=5, topic="L-1"):
    docs = [
        {
            "doc_id": f"D{i}",
            "doc_type": "purchase-order",
            "source_file": f"s/D{i}.pdf",
            "blocks": [
                {"key": "OS_LOTE", "value": topic,
                 "box": {"x": 0, "y": 0, "w": 1, "h": 1}, "link": True},
            ],
        }
        for i in range(n_docs)
    ]
    return json.dumps({
        "documents": docs,
        "databooks": [{
            "databook_id": "B1",
            "document_ids": [d["doc_id"] for d in docs],
            "required_doc_types": ["purchase-order"],
        }],
    })


def _pipeline(loader):
    ds = parse_loader_json(loader)
    mentions = extract_entities(ds)
    report = disambiguate(mentions)
    return ds, build_graph(ds, report)


class TestBasics:
    def test_create_delete_cascade(self):
        g = PropertyGraph()
        a = g.create_node("document")
        b = g.create_node("document")
        g.create_edge(a, b, "ref")
        cascade = g.delete_node(a)
        assert cascade == 1
        assert g.node_count() == 1
        assert g.edge_count() == 0

    def test_edge_missing_endpoint(self):
        g = PropertyGraph()
        a = g.create_node("document")
        with pytest.raises(UnknownNode):
            g.create_edge(a, 999, "ref")

    def test_hub_spoke_construction(self):
        g = PropertyGraph()
        hub = g.create_node("synthetic")
        for _ in range(100):
            leaf = g.create_node("synthetic")
            g.create_edge(hub, leaf, "spoke")
        assert g.node_count() == 101
        assert g.edge_count() == 100
        assert g.degree(hub) == 100

    def test_self_loop_degree_counts_two(self):
        g = PropertyGraph()
        a = g.create_node("synthetic")
        g.create_edge(a, a, "self")
        assert g.degree(a) == 2

    def test_ids_not_reused(self):
        g = PropertyGraph()
        a = g.create_node("synthetic")
        g.delete_node(a)
        b = g.create_node("synthetic")
        assert b != a


class TestMerge:
    def test_merge_twice_same_node(self):
        g = PropertyGraph()
        n1, created1 = g.merge_node("topic", {"value": "L-1"})
        n2, created2 = g.merge_node("topic", {"value": "L-1"})
        assert (created1, created2) == (True, False)
        assert n1 == n2

    def test_merge_on_empty_store_creates(self):
        g = PropertyGraph()
        _, created = g.merge_node("topic", {"value": "x"})
        assert created

    def test_ambiguous_merge(self):
        g = PropertyGraph()
        g.create_node("topic", {"value": "x"})
        g.create_node("topic", {"value": "x"})
        with pytest.raises(AmbiguousMerge):
            g.merge_node("topic", {"value": "x"})

    def test_merge_requires_props(self):
        with pytest.raises(ValueError):
            PropertyGraph().merge_node("topic", {})


class TestBuildGraph:
    def test_two_docs_share_topic(self):
        _, g = _pipeline(_star_loader(n_docs=2))
        assert len(g.nodes_by_label("document")) == 2
        assert len(g.nodes_by_label("topic")) == 1
        topic_edges = [e for e in g.edges() if e.rel_type == "OS_LOTE"]
        assert len(topic_edges) == 2

    def test_star_shape(self):
        _, g = _pipeline(_star_loader(n_docs=7))
        (topic,) = g.nodes_by_label("topic")
        assert g.degree(topic) == 7

    def test_supplier_corpus_topic_count(self):
        from graphled.synthdata import supplier_corpus_loader_json

        _, g = _pipeline(supplier_corpus_loader_json())
        topics = [n for n in g.nodes_by_label("topic")
                  if g.node(n).props["key"] == "SUPPLIER"]
        assert len(topics) == 17

    def test_deterministic_numbering(self):
        _, g1 = _pipeline(_star_loader())
        _, g2 = _pipeline(_star_loader())
        assert [(n, g1.node(n).label) for n in sorted(g1.nodes())] == \
               [(n, g2.node(n).label) for n in sorted(g2.nodes())]


class TestTraverse:
    def test_no_constraints(self):
        g = PropertyGraph()
        a = g.create_node("document")
        b = g.create_node("topic")
        g.create_edge(a, b, "ref")
        triples = g.traverse(TraversalQuery())
        assert len(triples) == 1
        assert triples[0][0].node_id == a

    def test_rel_type_mismatch_empty(self):
        g = PropertyGraph()
        a = g.create_node("document")
        b = g.create_node("topic")
        g.create_edge(a, b, "ref")
        assert g.traverse(TraversalQuery(rel_type="nope")) == []

    def test_star_doc_to_topic(self):
        _, g = _pipeline(_star_loader(n_docs=5))
        q = TraversalQuery(src_label="document", dst_label="topic")
        assert len(g.traverse(q)) == 5

    def test_limit_and_order(self):
        g = PropertyGraph()
        a = g.create_node("document")
        b = g.create_node("topic")
        for _ in range(10):
            g.create_edge(a, b, "ref")
        triples = g.traverse(TraversalQuery(limit=3))
        assert [t[1].edge_id for t in triples] == [0, 1, 2]

    def test_limit_must_be_positive(self):
        with pytest.raises(ValueError):
            TraversalQuery(limit=0)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_results_satisfy_constraints(self, data):
        rng = random.Random(data.draw(st.integers(0, 10**6)))
        g = PropertyGraph()
        labels = ["document", "topic", "synthetic"]
        ids = [g.create_node(rng.choice(labels)) for _ in range(8)]
        for _ in range(15):
            g.create_edge(rng.choice(ids), rng.choice(ids),
                          rng.choice(["a", "b"]))
        q = TraversalQuery(
            src_label=data.draw(st.sampled_from([None, "document", "topic"])),
            rel_type=data.draw(st.sampled_from([None, "a", "b"])),
            dst_label=data.draw(st.sampled_from([None, "synthetic", "topic"])),
        )
        for src, edge, dst in g.traverse(q):
            assert q.src_label is None or src.label == q.src_label
            assert q.rel_type is None or edge.rel_type == q.rel_type
            assert q.dst_label is None or dst.label == q.dst_label


class TestAuditAndPersistence:
    def test_audit_clean_after_mutations(self):
        g = PropertyGraph()
        rng = random.Random(3)
        ids = [g.create_node("synthetic") for _ in range(30)]
        for _ in range(60):
            g.create_edge(rng.choice(ids), rng.choice(ids), "e")
        for nid in rng.sample(ids, 10):
            g.delete_node(nid)
        assert g.audit() == []

    def test_empty_graph_round_trip(self, tmp_path):
        g = PropertyGraph()
        path = tmp_path / "g.gl"
        g.save(path)
        g2 = PropertyGraph.load(path)
        assert g2.node_count() == 0
        assert g2.edge_count() == 0

    def test_random_graph_round_trip(self, tmp_path):
        rng = random.Random(42)
        g = PropertyGraph()
        ids = [
            g.create_node(rng.choice(["document", "topic", "synthetic"]),
                          {"k": str(rng.randint(0, 99))})
            for _ in range(500)
        ]
        for _ in range(900):
            g.create_edge(rng.choice(ids), rng.choice(ids), "e",
                          {"w": str(rng.random())})
        path = tmp_path / "g.gl"
        byte_count = g.save(path)
        assert byte_count == path.stat().st_size
        g2 = PropertyGraph.load(path)
        assert sorted((n, g.node(n).label, g.node(n).props) for n in g.nodes()) == \
               sorted((n, g2.node(n).label, g2.node(n).props) for n in g2.nodes())
        key = lambda e: (e.edge_id, e.src, e.dst, e.rel_type, tuple(e.props))
        assert sorted(map(key, g.edges())) == sorted(map(key, g2.edges()))
        assert g2.audit() == []

    def test_truncated_file_rejected(self, tmp_path):
        g = PropertyGraph()
        ids = [g.create_node("synthetic", {"p": "x" * 50}) for _ in range(20)]
        g.create_edge(ids[0], ids[1], "e")
        path = tmp_path / "g.gl"
        g.save(path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) - 30])
        with pytest.raises(FormatError):
            PropertyGraph.load(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "g.gl"
        path.write_text("NOTAGRAPH\n")
        with pytest.raises(FormatError):
            PropertyGraph.load(path)


class TestDeleteDatabook:
    def test_delete_removes_subgraph(self):
        _, g = _pipeline(_star_loader(n_docs=3))
        delete_databook(g, "B1")
        assert g.node_count() == 0
        assert g.edge_count() == 0
        assert g.audit() == []

    def test_shared_documents_survive(self):
        loader = json.loads(_star_loader(n_docs=3))
        loader["databooks"].append({
            "databook_id": "B2",
            "document_ids": ["D0"],
            "required_doc_types": [],
        })
        _, g = _pipeline(json.dumps(loader))
        delete_databook(g, "B1")
        assert len(g.nodes_by_label("document")) == 1
        assert g.audit() == []
