"""Staged entity-disambiguation pipeline.

Variants of the same real-world entity are clustered by running three
string filters (edit distance, LCS, junk-aware block matching) over
normalized values, linking any pair at least one filter accepts, and
taking connected components. Every transformation is logged to a
provenance trail.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import DivisionDomain, EmptyAfterNormalize
from .ingest import EntityMention
from .similarity import lcs_length, levenshtein_distance, sequence_matcher_ratio

# Corporate decorations that carry no entity identity in supplier fields.
DEFAULT_STOPWORDS = frozenset(
    {"the", "of", "and",
     "inc", "ltd", "llc", "co", "sa", "corp", "group", "supplier"}
)

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


@dataclass(frozen=True)
class FilterConfig:
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    lev_max_norm_dist: float = 0.2
    lev_len_ratio_band: tuple[float, float] = (0.8, 1.25)
    lcs_min_sim: float = 0.8
    sm_min_ratio: float = 0.85
    junk_chars: frozenset[str] = frozenset({" "})

    def __post_init__(self):
        for name in ("lev_max_norm_dist", "lcs_min_sim", "sm_min_ratio"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        low, high = self.lev_len_ratio_band
        if not low <= 1.0 <= high:
            raise ValueError("length-ratio band must bracket 1.0")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "junk_chars", frozenset(self.junk_chars))


def load_stopwords(path) -> frozenset[str]:
    """One token per line, '#' starts a comment."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                words.add(line.lower())
    return frozenset(words)


def load_filter_config(path) -> FilterConfig:
    """key=value config file (strings quoted or bare, sets comma-separated)."""
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip().strip('"').strip("'")

    kwargs = {}
    if "stopwords" in raw:
        kwargs["stopwords"] = frozenset(
            t.strip().lower() for t in raw["stopwords"].split(",") if t.strip()
        )
    if "junk_chars" in raw:
        kwargs["junk_chars"] = frozenset(raw["junk_chars"])
    for name in ("lev_max_norm_dist", "lcs_min_sim", "sm_min_ratio"):
        if name in raw:
            kwargs[name] = float(raw[name])
    if "lev_len_ratio_low" in raw or "lev_len_ratio_high" in raw:
        kwargs["lev_len_ratio_band"] = (
            float(raw.get("lev_len_ratio_low", 0.8)),
            float(raw.get("lev_len_ratio_high", 1.25)),
        )
    return FilterConfig(**kwargs)


def normalize_tokens(value: str, cfg: FilterConfig) -> str:
    """Lowercase, split punctuation to spaces, drop stopwords, collapse blanks.

    The original raw value is kept for display; this produces only the
    comparison key. Raises EmptyAfterNormalize when nothing survives.
    """
    lowered = _NON_ALNUM.sub(" ", value.lower())
    tokens = [t for t in lowered.split() if t not in cfg.stopwords]
    if not tokens:
        raise EmptyAfterNormalize(f"nothing left of {value!r} after normalization")
    return " ".join(tokens)


def lev_accepts(a: str, b: str, cfg: FilterConfig) -> bool:
    if not a and not b:
        return False
    longer = max(len(a), len(b))
    if longer == 0:
        return False
    ratio = min(len(a), len(b)) / longer
    low, high = cfg.lev_len_ratio_band
    if not low <= ratio <= high:
        return False
    return levenshtein_distance(a, b) / longer <= cfg.lev_max_norm_dist


def lcs_accepts(a: str, b: str, cfg: FilterConfig) -> bool:
    longer = max(len(a), len(b))
    if longer == 0:
        return False
    return lcs_length(a, b) / longer >= cfg.lcs_min_sim


def sm_accepts(a: str, b: str, cfg: FilterConfig) -> bool:
    if not a and not b:
        return False
    return sequence_matcher_ratio(a, b, cfg.junk_chars) >= cfg.sm_min_ratio


# filters applied in fixed pipeline order; a pair links if ANY accepts
FILTER_STAGES = (
    ("levenshtein", lev_accepts),
    ("lcs", lcs_accepts),
    ("sequence_matcher", sm_accepts),
)


@dataclass(frozen=True)
class ProvenanceRecord:
    mention: EntityMention
    stage: str  # stopword | levenshtein | lcs | sequence_matcher | canonicalize
    before: str
    after: str

    def __post_init__(self):
        if self.before == self.after:
            raise ValueError("provenance records only record actual changes")


@dataclass
class DisambiguationReport:
    canonical_of: dict[str, str]
    clusters: list[tuple[str, list[str]]]
    provenance: list[ProvenanceRecord]
    removed_count: int
    unclustered: list[str] = field(default_factory=list)  # empty-after-normalize

    def to_json(self) -> str:
        return json.dumps(
            {
                "canonical_of": self.canonical_of,
                "clusters": [
                    {"canonical": c, "members": m} for c, m in self.clusters
                ],
                "provenance": [
                    {
                        "doc_id": r.mention.doc_id,
                        "key": r.mention.key,
                        "stage": r.stage,
                        "before": r.before,
                        "after": r.after,
                    }
                    for r in self.provenance
                ],
                "removed_count": self.removed_count,
                "unclustered": self.unclustered,
            },
            ensure_ascii=False,
            indent=2,
        )


class UnionFind:
    """Disjoint sets over arbitrary hashable items (path halving, union by size)."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self):
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def _linked_stage(a: str, b: str, cfg: FilterConfig) -> str | None:
    for stage, accepts in FILTER_STAGES:
        if accepts(a, b, cfg):
            return stage
    return None


def _pair_links(pairs, norm_of, cfg):
    out = []
    for a, b in pairs:
        stage = _linked_stage(norm_of[a], norm_of[b], cfg)
        if stage is not None:
            out.append((a, b, stage))
    return out


def disambiguate(
    mentions: list[EntityMention],
    cfg: FilterConfig | None = None,
    workers: int = 1,
) -> DisambiguationReport:
    """Cluster grammatical variants of the same entity.

    Pairs are compared only within the same mention key, linked when any
    filter accepts, clustered by connected components; the canonical value
    is the most frequent raw value (lexicographic tie-break). Output is
    independent of the mention input order and of ``workers``.
    """
    if not mentions:
        raise ValueError("disambiguate requires at least one mention")
    cfg = cfg or FilterConfig()

    provenance: list[ProvenanceRecord] = []
    norm_of: dict[str, str] = {}
    key_of: dict[str, str] = {}
    unclustered: list[str] = []
    raw_counts: Counter = Counter()
    first_mention: dict[str, EntityMention] = {}

    for m in sorted(mentions, key=lambda m: (m.key, m.raw_value, m.doc_id)):
        raw_counts[m.raw_value] += 1
        first_mention.setdefault(m.raw_value, m)

    for raw in sorted(raw_counts):
        m = first_mention[raw]
        try:
            norm = normalize_tokens(raw, cfg)
        except EmptyAfterNormalize:
            if raw not in unclustered:
                unclustered.append(raw)
            provenance.append(
                ProvenanceRecord(mention=m, stage="stopword",
                                 before=raw, after="")
            )
            continue
        norm_of[raw] = norm
        key_of[raw] = m.key
        if norm != raw:
            provenance.append(
                ProvenanceRecord(mention=m, stage="stopword",
                                 before=raw, after=norm)
            )

    values = sorted(norm_of)
    uf = UnionFind(values)

    pairs = [
        (a, b)
        for i, a in enumerate(values)
        for b in values[i + 1:]
        if key_of[a] == key_of[b]
    ]
    if workers > 1 and pairs:
        shard = max(1, len(pairs) // workers)
        chunks = [pairs[i:i + shard] for i in range(0, len(pairs), shard)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(lambda c: _pair_links(c, norm_of, cfg), chunks)
        links = [link for chunk in results for link in chunk]
    else:
        links = _pair_links(pairs, norm_of, cfg)

    # sort so provenance order is stable regardless of sharding
    for a, b, stage in sorted(links):
        uf.union(a, b)
        provenance.append(
            ProvenanceRecord(mention=first_mention[b], stage=stage,
                             before=b, after=a)
        )

    canonical_of: dict[str, str] = {}
    clusters: list[tuple[str, list[str]]] = []
    for members in uf.groups():
        members.sort()
        canonical = min(members, key=lambda v: (-raw_counts[v], v))
        for v in members:
            canonical_of[v] = canonical
            if v != canonical:
                provenance.append(
                    ProvenanceRecord(mention=first_mention[v],
                                     stage="canonicalize",
                                     before=v, after=canonical)
                )
        clusters.append((canonical, members))
    for raw in unclustered:
        canonical_of[raw] = raw
        clusters.append((raw, [raw]))
    clusters.sort(key=lambda c: c[0])

    distinct = len(raw_counts)
    removed = distinct - len(clusters)
    return DisambiguationReport(
        canonical_of=canonical_of,
        clusters=clusters,
        provenance=provenance,
        removed_count=removed,
        unclustered=unclustered,
    )


def ambiguity_metrics(
    report: DisambiguationReport,
    distinct_raw: int,
    ground_truth: int | None = None,
) -> dict[str, float]:
    """Removal percentage (vs. known ambiguity) and reduction percentage."""
    removed = report.removed_count
    out = {"reduction_pct": removed / distinct_raw if distinct_raw else 0.0}
    if ground_truth is not None:
        ambiguous = distinct_raw - ground_truth
        if ambiguous == 0:
            if removed == 0:
                out["removal_pct"] = 1.0
            else:
                raise DivisionDomain(
                    "no ambiguity to remove but removed_count > 0"
                )
        else:
            out["removal_pct"] = removed / ambiguous
    return out
