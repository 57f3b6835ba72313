"""Synthetic workload generators and the concurrent benchmark driver.

Write patterns build dandelion hubs, unbalanced n-ary trees, random
nodes/links, index-heavy and fat nodes, and merge traffic; read patterns
aggregate, fetch random nodes and walk long paths. The driver runs a
weighted mix over worker streams and reports per-pattern RUNS/AVG/MIN/MAX
latencies. With a fixed seed the logical graph (node/edge content) is
identical across runs regardless of stream interleaving: every task owns
an RNG derived from (seed, pattern, task index) and links only within its
stream's node pool.
"""

from __future__ import annotations

import csv
import io
import json
import random
import threading
import time
from dataclasses import dataclass, field

from .errors import DepthZero, EmptyGraph, InsufficientNodes
from .graphstore import PropertyGraph

WRITE_PATTERNS = (
    "fat_node_append", "nary_tree", "merge_write", "random_linkage",
    "hub_spoke", "raw_write", "index_heavy",
)
READ_PATTERNS = ("aggregate_read", "random_access_read", "long_path_read")
ALL_PATTERNS = WRITE_PATTERNS + READ_PATTERNS

# Weights are runs per n=1000 (observed production mix).
DEFAULT_MIX = (
    ("fat_node_append", 1050),
    ("nary_tree", 1003),
    ("merge_write", 985),
    ("random_linkage", 1010),
    ("hub_spoke", 481),
    ("raw_write", 2933),
    ("index_heavy", 1002),
    ("aggregate_read", 552),
    ("random_access_read", 952),
    ("long_path_read", 62),
)

FAT_NODE_CHARS = 4096
INDEXED_PROP_COUNT = 10
LONG_PATH_MAX_HOPS = 32


@dataclass
class WorkloadSpec:
    n: int = 1000
    concurrency: int = 10
    seed: int = 1
    mix: list[tuple[str, float]] = field(
        default_factory=lambda: [(p, w) for p, w in DEFAULT_MIX]
    )

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")
        for pattern, weight in self.mix:
            if pattern not in ALL_PATTERNS:
                raise ValueError(f"unknown pattern {pattern!r}")
            if weight <= 0:
                raise ValueError(f"weight for {pattern} must be > 0")

    def runs_for(self, pattern: str, weight: float) -> int:
        return max(1, round(self.n * weight / 1000.0))

    @classmethod
    def from_json(cls, data: str | bytes) -> "WorkloadSpec":
        obj = json.loads(data)
        kwargs = {k: obj[k] for k in ("n", "concurrency", "seed") if k in obj}
        if "mix" in obj:
            kwargs["mix"] = [(m["pattern"], m["weight"]) for m in obj["mix"]]
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "concurrency": self.concurrency,
            "seed": self.seed,
            "mix": [{"pattern": p, "weight": w} for p, w in self.mix],
        })


@dataclass
class PatternStats:
    runs: int = 0
    failures: int = 0
    total_ms: float = 0.0
    min_ms: float = float("inf")
    max_ms: float = 0.0

    def record(self, ms: float):
        self.runs += 1
        self.total_ms += ms
        self.min_ms = min(self.min_ms, ms)
        self.max_ms = max(self.max_ms, ms)

    @property
    def avg_ms(self) -> float:
        return self.total_ms / self.runs if self.runs else 0.0


@dataclass
class BenchmarkReport:
    per_pattern: dict[str, PatternStats]
    node_count: int
    edge_count: int
    wall_ms: float
    audit_problems: list[str]

    @property
    def total_runs(self) -> int:
        return sum(s.runs for s in self.per_pattern.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["pattern", "runs", "avg_ms", "min_ms", "max_ms"])
        for pattern in ALL_PATTERNS:
            if pattern not in self.per_pattern:
                continue
            s = self.per_pattern[pattern]
            writer.writerow([
                pattern, s.runs, f"{s.avg_ms:.3f}",
                f"{s.min_ms:.3f}" if s.runs else "0.000",
                f"{s.max_ms:.3f}",
            ])
        writer.writerow(["total", self.total_runs, "", "", f"{self.wall_ms:.1f}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "patterns": {
                p: {"runs": s.runs, "failures": s.failures,
                    "avg_ms": s.avg_ms,
                    "min_ms": s.min_ms if s.runs else 0.0,
                    "max_ms": s.max_ms}
                for p, s in self.per_pattern.items()
            },
            "total_runs": self.total_runs,
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "wall_ms": self.wall_ms,
            "audit_problems": self.audit_problems,
        }


# ------------------------------------------------------------- generators
# Every generator tags created nodes with a "wid" property so the logical
# graph can be compared across runs independently of id assignment order.

def gen_hub_spoke(g: PropertyGraph, rng: random.Random, leaves: int,
                  tag: str = "hub") -> dict[str, int]:
    hub = g.create_node("synthetic", {"wid": f"{tag}:hub", "kind": "hub"})
    for i in range(leaves):
        leaf = g.create_node("synthetic", {"wid": f"{tag}:leaf{i}", "kind": "leaf"})
        g.create_edge(hub, leaf, "spoke")
    return {"nodes": leaves + 1, "edges": leaves, "hub": hub}


def gen_nary_tree(g: PropertyGraph, rng: random.Random, branching: int,
                  depth: int, tag: str = "tree") -> dict[str, int]:
    """Unbalanced tree: per-node child count drawn uniformly in [1, branching]."""
    if depth < 1:
        raise DepthZero("tree depth must be >= 1")
    root = g.create_node("synthetic", {"wid": f"{tag}:0", "kind": "tree"})
    level = [root]
    nodes, edges, serial = 1, 0, 1
    for _ in range(depth):
        nxt = []
        for parent in level:
            for _ in range(rng.randint(1, branching)):
                child = g.create_node(
                    "synthetic", {"wid": f"{tag}:{serial}", "kind": "tree"})
                serial += 1
                g.create_edge(parent, child, "child")
                nodes += 1
                edges += 1
                nxt.append(child)
        level = nxt
    return {"nodes": nodes, "edges": edges, "root": root}


def gen_raw_write(g: PropertyGraph, rng: random.Random, count: int,
                  tag: str = "raw") -> dict[str, int]:
    """Random nodes plus random edges among them."""
    ids = [
        g.create_node("synthetic", {"wid": f"{tag}:{i}",
                                    "val": str(rng.randint(0, 10**6))})
        for i in range(count)
    ]
    edges = 0
    if len(ids) >= 2:
        for _ in range(max(1, count - 1)):
            src, dst = rng.sample(ids, 2)
            g.create_edge(src, dst, "raw")
            edges += 1
    return {"nodes": count, "edges": edges, "ids": ids}


def gen_random_linkage(g: PropertyGraph, rng: random.Random, count: int,
                       pool: list[int]) -> dict[str, int]:
    """Edges between uniformly chosen nodes from the caller's pool."""
    if len(pool) < 2:
        raise InsufficientNodes("need at least 2 nodes to link")
    for _ in range(count):
        src, dst = rng.sample(pool, 2)
        g.create_edge(src, dst, "link")
    return {"nodes": 0, "edges": count}


def gen_index_heavy(g: PropertyGraph, rng: random.Random, count: int,
                    k: int = INDEXED_PROP_COUNT, tag: str = "idx") -> dict[str, int]:
    for i in range(count):
        props = {"wid": f"{tag}:{i}"}
        props.update({f"attr{j}": str(rng.randint(0, 9999)) for j in range(k)})
        g.create_node("synthetic", props)
    return {"nodes": count, "edges": 0}


def gen_fat_node(g: PropertyGraph, rng: random.Random, count: int,
                 length: int = FAT_NODE_CHARS, tag: str = "fat") -> dict[str, int]:
    for i in range(count):
        payload = "".join(rng.choice("abcdefgh") for _ in range(length))
        g.create_node("synthetic", {"wid": f"{tag}:{i}", "payload": payload})
    return {"nodes": count, "edges": 0}


def gen_merge_write(g: PropertyGraph, rng: random.Random, calls: int,
                    reuse_fraction: float = 0.5, tag: str = "mrg") -> dict[str, int]:
    """merge_node traffic; ``reuse_fraction`` of calls hit pre-existing keys."""
    created = 0
    distinct = max(1, round(calls * (1.0 - reuse_fraction)))
    keys = [f"{tag}:{i}" for i in range(distinct)]
    for i in range(calls):
        key = keys[i % len(keys)]
        _, was_created = g.merge_node("synthetic", {"wid": key})
        created += int(was_created)
    return {"nodes": created, "edges": 0, "created": created}


def run_read(g: PropertyGraph, rng: random.Random, kind: str) -> dict:
    """Execute one read query and return what it saw."""
    with g.read_lock:
        nodes = g.nodes()
        if kind == "aggregate_read":
            return {"label_counts": g.label_histogram()}
        if not nodes:
            raise EmptyGraph(f"{kind} needs at least one node")
        if kind == "random_access_read":
            nid = nodes[rng.randrange(len(nodes))]
            return {"node": g.node(nid)}
        if kind == "long_path_read":
            cur = nodes[rng.randrange(len(nodes))]
            path = [cur]
            for _ in range(LONG_PATH_MAX_HOPS):
                nbrs = sorted(g.neighbors(cur))
                nbrs = [v for v in nbrs if v not in path]
                if not nbrs:
                    break
                cur = nbrs[rng.randrange(len(nbrs))]
                path.append(cur)
            return {"path": path, "hops": len(path) - 1}
        raise ValueError(f"unknown read kind {kind!r}")


# ----------------------------------------------------------------- driver

def _execute_task(g, pattern, rng, tag, pool):
    if pattern == "hub_spoke":
        stats = gen_hub_spoke(g, rng, leaves=rng.randint(10, 100), tag=tag)
    elif pattern == "nary_tree":
        stats = gen_nary_tree(g, rng, branching=3,
                              depth=rng.randint(3, 6), tag=tag)
    elif pattern == "raw_write":
        stats = gen_raw_write(g, rng, count=rng.randint(4, 12), tag=tag)
        pool.extend(stats["ids"])
    elif pattern == "random_linkage":
        stats = gen_random_linkage(g, rng, count=12, pool=pool)
    elif pattern == "index_heavy":
        stats = gen_index_heavy(g, rng, count=5, tag=tag)
    elif pattern == "fat_node_append":
        stats = gen_fat_node(g, rng, count=2, tag=tag)
    elif pattern == "merge_write":
        stats = gen_merge_write(g, rng, calls=8, tag=tag)
    elif pattern in READ_PATTERNS:
        stats = run_read(g, rng, pattern)
    else:
        raise ValueError(f"unknown pattern {pattern!r}")
    return stats


def run_benchmark(spec: WorkloadSpec, store: PropertyGraph | None = None) -> BenchmarkReport:
    """Run the weighted pattern mix over ``concurrency`` worker streams."""
    g = store if store is not None else PropertyGraph(indexed_keys=["wid"])

    # deterministic task list: (pattern, serial), shuffled once by seed,
    # dealt round-robin to streams
    tasks: list[tuple[str, int]] = []
    for pattern, weight in spec.mix:
        for serial in range(spec.runs_for(pattern, weight)):
            tasks.append((pattern, serial))
    random.Random(spec.seed).shuffle(tasks)
    streams: list[list[tuple[str, int]]] = [
        tasks[i::spec.concurrency] for i in range(spec.concurrency)
    ]

    stats = {p: PatternStats() for p, _ in spec.mix}
    stats_lock = threading.Lock()

    def worker(stream_idx: int, stream_tasks: list[tuple[str, int]]):
        # bootstrap pool so random_linkage always has nodes to draw from
        pool = [
            g.create_node("synthetic", {"wid": f"s{stream_idx}:boot{i}"})
            for i in range(2)
        ]
        for pattern, serial in stream_tasks:
            rng = random.Random(f"{spec.seed}:{pattern}:{serial}")
            tag = f"{pattern}:{serial}"
            t0 = time.perf_counter()
            failed = False
            try:
                _execute_task(g, pattern, rng, tag, pool)
            except (EmptyGraph, InsufficientNodes):
                failed = True
            ms = (time.perf_counter() - t0) * 1000.0
            with stats_lock:
                stats[pattern].record(ms)
                if failed:
                    stats[pattern].failures += 1

    t_start = time.perf_counter()
    threads = [
        threading.Thread(target=worker, args=(i, s), daemon=True)
        for i, s in enumerate(streams)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    wall_ms = (time.perf_counter() - t_start) * 1000.0

    return BenchmarkReport(
        per_pattern=stats,
        node_count=g.node_count(),
        edge_count=g.edge_count(),
        wall_ms=wall_ms,
        audit_problems=g.audit(),
    )


def logical_signature(g: PropertyGraph) -> tuple:
    """Interleaving-independent content signature: node and edge multisets."""
    node_sig = sorted(
        (n.label, tuple(sorted(n.props.items()))) for n in
        (g.node(v) for v in g.nodes())
    )
    wid_of = {v: g.node(v).props.get("wid", str(v)) for v in g.nodes()}
    edge_sig = sorted(
        (e.rel_type, wid_of[e.src], wid_of[e.dst],
         tuple(sorted(e.props.items())))
        for e in g.edges()
    )
    return tuple(node_sig), tuple(edge_sig)
