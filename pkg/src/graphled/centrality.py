"""Centrality metrics and the aggregate relevance score.

Degree keeps edge direction (in + out, self-loop counts 2); the
path-based metrics work on the undirected simple collapse of the graph.
Relevance is the sum of min-max-normalized degree, betweenness and
eigenvector scores; closeness is computed for display only.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque

from .errors import NoEdges

EIGEN_TOL = 1e-8
EIGEN_MAX_ITER = 1000


def _undirected_adj(g) -> dict[int, set[int]]:
    """Simple undirected adjacency: parallel edges collapsed, self-loops dropped."""
    adj = {v: set() for v in g.nodes()}
    for e in g.edges():
        if e.src != e.dst:
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
    return adj


def degree_centrality(g) -> dict[int, int]:
    return {v: g.degree(v) for v in g.nodes()}


def betweenness_centrality(g) -> dict[int, float]:
    """Brandes' accumulation on the undirected simple view.

    Endpoints excluded; each unordered pair counted once (raw undirected
    sums halved).
    """
    adj = _undirected_adj(g)
    bc = {v: 0.0 for v in adj}
    for s in adj:
        stack = []
        preds: dict[int, list[int]] = {v: [] for v in adj}
        sigma = {v: 0.0 for v in adj}
        sigma[s] = 1.0
        dist = {v: -1 for v in adj}
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in adj}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return {v: x / 2.0 for v, x in bc.items()}


def closeness_centrality(g) -> dict[int, float]:
    """Wasserman-Faust component-scaled closeness on the undirected view."""
    adj = _undirected_adj(g)
    n = len(adj)
    out = {}
    for s in adj:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        r = len(dist)
        total = sum(dist.values())
        if r <= 1 or n <= 1 or total == 0:
            out[s] = 0.0
        else:
            out[s] = ((r - 1) / (n - 1)) * ((r - 1) / total)
    return out


def eigenvector_centrality(g) -> tuple[dict[int, float], bool]:
    """Power iteration on the undirected adjacency, L2-normalized.

    Iterates x <- (A + I) x, which has the same eigenvectors as A but a
    strictly dominant eigenvalue on every component, so bipartite graphs
    converge too. Returns (scores, converged).
    """
    adj = _undirected_adj(g)
    if not any(adj.values()):
        raise NoEdges("eigenvector centrality needs at least one edge")
    nodes = sorted(adj)
    x = {v: 1.0 / math.sqrt(len(nodes)) for v in nodes}
    converged = False
    for _ in range(EIGEN_MAX_ITER):
        nxt = {v: x[v] + sum(x[w] for w in adj[v]) for v in nodes}
        norm = math.sqrt(sum(val * val for val in nxt.values()))
        nxt = {v: val / norm for v, val in nxt.items()}
        if max(abs(nxt[v] - x[v]) for v in nodes) < EIGEN_TOL:
            x = nxt
            converged = True
            break
        x = nxt
    return x, converged


def _min_max(scores: dict[int, float]) -> dict[int, float]:
    lo = min(scores.values())
    hi = max(scores.values())
    if hi == lo:
        return {v: 0.0 for v in scores}
    return {v: (s - lo) / (hi - lo) for v, s in scores.items()}


def relevance_scores(g, normalize: bool = True) -> dict[int, float]:
    """Sum of degree, betweenness and eigenvector scores per node.

    Each metric is min-max normalized to [0, 1] first (constant metric
    contributes zeros) unless ``normalize`` is false. A graph with no
    edges substitutes zeros for the eigenvector term.
    """
    nodes = g.nodes()
    if not nodes:
        return {}
    deg = {v: float(d) for v, d in degree_centrality(g).items()}
    btw = betweenness_centrality(g)
    try:
        eig, _ = eigenvector_centrality(g)
    except NoEdges:
        eig = {v: 0.0 for v in nodes}
    if normalize:
        deg, btw, eig = _min_max(deg), _min_max(btw), _min_max(eig)
    return {v: deg[v] + btw[v] + eig[v] for v in nodes}


def centrality_table(g) -> list[dict]:
    """Per-node rows with all four metrics plus the aggregate relevance."""
    deg = degree_centrality(g)
    btw = betweenness_centrality(g)
    clo = closeness_centrality(g)
    try:
        eig, _ = eigenvector_centrality(g)
    except NoEdges:
        eig = {v: 0.0 for v in g.nodes()}
    rel = relevance_scores(g)
    rows = []
    for v in sorted(g.nodes()):
        rows.append({
            "node_id": v,
            "label": g.node(v).label,
            "degree": deg[v],
            "betweenness": btw[v],
            "closeness": clo[v],
            "eigenvector": eig[v],
            "relevance": rel[v],
        })
    return rows


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=[
        "node_id", "label", "degree", "betweenness",
        "closeness", "eigenvector", "relevance",
    ])
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
