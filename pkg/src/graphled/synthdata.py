"""Seeded synthetic corpora for the validation experiments.

Two generators: a supplier-mention corpus replicating the ambiguity
profile of a real OCR extraction (226 mentions, 17 true suppliers,
128 grammatical variants), and an OCR corruption generator tuned to a
target total/partial/inconsistent hit profile.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .ingest import EntityMention
from .inspection import classify_ocr_accuracy

SUPPLIER_KEY = "SUPPLIER"

# 17 well-separated fictional supplier names
SUPPLIER_NAMES = (
    "altamira", "borivex", "cendrak", "dolmite", "enforra", "galvion",
    "hexalloy", "ironclad", "jasperon", "krontek", "lumivar", "madrigal",
    "nortexo", "oakridge", "pelicano", "quorvend", "steelmax",
)

N_MENTIONS = 226
N_VARIANTS = 128


def _drop_char(name: str) -> str:
    mid = len(name) // 2
    return name[:mid] + name[mid + 1:]


def _dup_char(name: str) -> str:
    mid = len(name) // 2
    return name[:mid] + name[mid] + name[mid:]


def _variants(name: str, count: int) -> list[str]:
    """Grammatical variants of one supplier, all clusterable to the base name."""
    forms = [
        f"supplier-{name}",
        f"{name}-supplier",
        f"supplier-{name}.inc",
        f"group-{name}-supplier",
        f"SUPPLIER-{name.upper()}",
        f"{name} ltd",
        f"supplier-{_drop_char(name)}",
        f"{_dup_char(name)}-supplier",
    ]
    return forms[:count]


@dataclass
class SupplierCorpus:
    mentions: list[EntityMention]
    ground_truth: int  # number of true suppliers
    distinct_raw: int
    canonical_names: tuple[str, ...]


def make_supplier_corpus(seed: int = 7) -> SupplierCorpus:
    """226 supplier mentions: 128 distinct raw variants of 17 true suppliers."""
    rng = random.Random(seed)
    per_name = N_VARIANTS // len(SUPPLIER_NAMES)  # 7
    extra = N_VARIANTS - per_name * len(SUPPLIER_NAMES)  # first `extra` names get 8

    variants: list[str] = []
    primary: list[str] = []  # the modal form of each supplier
    for i, name in enumerate(SUPPLIER_NAMES):
        count = per_name + (1 if i < extra else 0)
        forms = _variants(name, count)
        variants.extend(forms)
        primary.append(forms[0])
    assert len(variants) == N_VARIANTS
    assert len(set(variants)) == N_VARIANTS

    # one mention per variant, remaining mentions weighted to the primary forms
    values = list(variants)
    for _ in range(N_MENTIONS - N_VARIANTS):
        values.append(rng.choice(primary))
    rng.shuffle(values)

    mentions = [
        EntityMention(doc_id=f"SUP-{i:04d}", key=SUPPLIER_KEY, raw_value=v)
        for i, v in enumerate(values)
    ]
    return SupplierCorpus(
        mentions=mentions,
        ground_truth=len(SUPPLIER_NAMES),
        distinct_raw=N_VARIANTS,
        canonical_names=SUPPLIER_NAMES,
    )


def supplier_corpus_loader_json(seed: int = 7) -> str:
    """The same corpus in loader-JSON form: one document per mention."""
    corpus = make_supplier_corpus(seed)
    documents = [
        {
            "doc_id": m.doc_id,
            "doc_type": "purchase-order",
            "source_file": f"synthetic/{m.doc_id}.pdf",
            "blocks": [
                {
                    "key": SUPPLIER_KEY,
                    "value": m.raw_value,
                    "box": {"x": 10, "y": 10, "w": 200, "h": 20},
                    "link": True,
                }
            ],
        }
        for m in corpus.mentions
    ]
    return json.dumps(
        {
            "documents": documents,
            "databooks": [
                {
                    "databook_id": "DB-SUPPLIERS",
                    "document_ids": [m.doc_id for m in corpus.mentions],
                    "required_doc_types": ["purchase-order"],
                }
            ],
        }
    )


# ------------------------------------------------------------ OCR corruption

EASY_PROFILE = (85.9, 12.72, 1.58)
DIFFICULT_PROFILE = (25.67, 24.32, 50.01)

_WORDS = (
    "valve", "flange", "bolt", "weld", "pipe", "gasket", "steel", "alloy",
    "batch", "order", "cert", "test", "yield", "grade", "spec", "plate",
)

_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789"


def _truth_value(rng: random.Random) -> str:
    n = rng.randint(2, 4)
    parts = [rng.choice(_WORDS) for _ in range(n)]
    parts.append(str(rng.randint(100, 99999)))
    return " ".join(parts)


def _light_corrupt(rng: random.Random, truth: str) -> str:
    """Substitute a few characters; keep similarity in the partial band."""
    chars = list(truth)
    k = max(1, round(len(chars) * rng.uniform(0.12, 0.28)))
    for pos in rng.sample(range(len(chars)), k):
        chars[pos] = rng.choice(_ALPHABET)
    return "".join(chars)


def _scramble(rng: random.Random) -> str:
    return "".join(rng.choice(_ALPHABET.upper()) for _ in range(rng.randint(6, 18)))


def make_ocr_pairs(profile: tuple[float, float, float], n: int = 5000,
                   seed: int = 11) -> list[tuple[str, str]]:
    """(ocr, truth) pairs whose graded class counts match the profile exactly
    (up to rounding). Each corrupted pair is re-drawn until it grades into
    its intended class, so the output distribution is deterministic.
    """
    rng = random.Random(seed)
    total_pct, partial_pct, _ = profile
    n_total = round(n * total_pct / 100.0)
    n_partial = round(n * partial_pct / 100.0)
    n_bad = n - n_total - n_partial

    pairs: list[tuple[str, str]] = []
    for _ in range(n_total):
        t = _truth_value(rng)
        pairs.append((t, t))
    for _ in range(n_partial):
        t = _truth_value(rng)
        for _ in range(100):
            ocr = _light_corrupt(rng, t)
            if classify_ocr_accuracy(ocr, t).cls == "partial_hit":
                break
        pairs.append((ocr, t))
    for _ in range(n_bad):
        t = _truth_value(rng)
        for _ in range(100):
            ocr = _scramble(rng)
            if classify_ocr_accuracy(ocr, t).cls == "inconsistency":
                break
        pairs.append((ocr, t))
    rng.shuffle(pairs)
    return pairs


def ocr_pairs_json(profile: tuple[float, float, float], n: int = 5000,
                   seed: int = 11) -> str:
    return json.dumps(
        [{"ocr": o, "truth": t} for o, t in make_ocr_pairs(profile, n, seed)]
    )
