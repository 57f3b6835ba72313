"""Parse loader JSON (OCR + form-understanding output) into typed documents.

The loader format is one DocumentSet per file:

    {"documents": [{"doc_id": str, "doc_type": str, "source_file": str,
       "blocks": [{"key": str, "value": str,
                   "box": {"x": int, "y": int, "w": int, "h": int},
                   "link": bool}]}],
     "databooks": [{"databook_id": str, "document_ids": [str],
                    "required_doc_types": [str]}]}

All fields required except "link" (defaults to false). Parsing never
rewrites raw values; cleaning is the disambiguation module's job.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DanglingReferenceError, LoaderSyntaxError, SchemaError

KNOWN_DOC_TYPES = frozenset(
    {"purchase-order", "material-certificate", "test-report", "generic"}
)


@dataclass(frozen=True)
class BoundingBox:
    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise ValueError("bounding box origin must be non-negative")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("bounding box must have positive extent")


@dataclass(frozen=True)
class FieldBlock:
    key: str
    value: str
    box: BoundingBox
    link_hint: bool = False

    def __post_init__(self):
        if not self.key.strip():
            raise ValueError("block key must be non-empty")


@dataclass(frozen=True)
class Document:
    doc_id: str
    doc_type: str
    blocks: tuple[FieldBlock, ...]
    source_file: str


@dataclass(frozen=True)
class Databook:
    databook_id: str
    document_ids: tuple[str, ...]
    required_doc_types: tuple[str, ...]


@dataclass(frozen=True)
class EntityMention:
    doc_id: str
    key: str
    raw_value: str


@dataclass
class DocumentSet:
    documents: list[Document] = field(default_factory=list)
    databooks: list[Databook] = field(default_factory=list)

    def document(self, doc_id: str) -> Document:
        for d in self.documents:
            if d.doc_id == doc_id:
                return d
        raise DanglingReferenceError(doc_id)

    def validate_references(self):
        ids = {d.doc_id for d in self.documents}
        for db in self.databooks:
            for doc_id in db.document_ids:
                if doc_id not in ids:
                    raise DanglingReferenceError(doc_id, db.databook_id)


def _require(obj, key, path, typ=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    val = obj[key]
    if typ is not None and not isinstance(val, typ):
        raise SchemaError(f"{path}.{key}", f"expected {typ.__name__}")
    return val


def _parse_block(raw, path) -> FieldBlock:
    key = _require(raw, "key", path, str)
    if not key.strip():
        raise SchemaError(f"{path}.key", "key is empty")
    value = _require(raw, "value", path, str)
    box_raw = _require(raw, "box", path, dict)
    box_path = f"{path}.box"
    try:
        box = BoundingBox(
            x=_require(box_raw, "x", box_path, int),
            y=_require(box_raw, "y", box_path, int),
            width=_require(box_raw, "w", box_path, int),
            height=_require(box_raw, "h", box_path, int),
        )
    except ValueError as exc:
        raise SchemaError(box_path, str(exc)) from exc
    link = raw.get("link", False)
    if not isinstance(link, bool):
        raise SchemaError(f"{path}.link", "expected bool")
    return FieldBlock(key=key, value=value, box=box, link_hint=link)


def parse_loader_json(data: bytes | str) -> DocumentSet:
    """Parse one loader file into a DocumentSet; order is preserved.

    Unknown doc_type values map to "generic" (noisy upstream classification
    must not abort ingestion).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        root = json.loads(data)
    except json.JSONDecodeError as exc:
        raise LoaderSyntaxError(f"malformed JSON: {exc}") from exc
    if not isinstance(root, dict):
        raise SchemaError("$", "top level must be an object")

    documents = []
    seen_ids = set()
    for i, raw_doc in enumerate(_require(root, "documents", "$", list)):
        path = f"documents[{i}]"
        doc_id = _require(raw_doc, "doc_id", path, str)
        if doc_id in seen_ids:
            raise SchemaError(f"{path}.doc_id", f"duplicate doc_id {doc_id!r}")
        seen_ids.add(doc_id)
        doc_type = _require(raw_doc, "doc_type", path, str)
        if doc_type not in KNOWN_DOC_TYPES:
            doc_type = "generic"
        source_file = _require(raw_doc, "source_file", path, str)
        blocks = tuple(
            _parse_block(b, f"{path}.blocks[{j}]")
            for j, b in enumerate(_require(raw_doc, "blocks", path, list))
        )
        documents.append(
            Document(doc_id=doc_id, doc_type=doc_type, blocks=blocks,
                     source_file=source_file)
        )

    databooks = []
    for i, raw_db in enumerate(_require(root, "databooks", "$", list)):
        path = f"databooks[{i}]"
        databooks.append(
            Databook(
                databook_id=_require(raw_db, "databook_id", path, str),
                document_ids=tuple(_require(raw_db, "document_ids", path, list)),
                required_doc_types=tuple(
                    _require(raw_db, "required_doc_types", path, list)
                ),
            )
        )

    ds = DocumentSet(documents=documents, databooks=databooks)
    ds.validate_references()
    return ds


def serialize_document_set(ds: DocumentSet) -> str:
    """Inverse of parse_loader_json (round-trip stable)."""
    return json.dumps(
        {
            "documents": [
                {
                    "doc_id": d.doc_id,
                    "doc_type": d.doc_type,
                    "source_file": d.source_file,
                    "blocks": [
                        {
                            "key": b.key,
                            "value": b.value,
                            "box": {"x": b.box.x, "y": b.box.y,
                                    "w": b.box.width, "h": b.box.height},
                            "link": b.link_hint,
                        }
                        for b in d.blocks
                    ],
                }
                for d in ds.documents
            ],
            "databooks": [
                {
                    "databook_id": db.databook_id,
                    "document_ids": list(db.document_ids),
                    "required_doc_types": list(db.required_doc_types),
                }
                for db in ds.databooks
            ],
        },
        ensure_ascii=False,
    )


def extract_entities(ds: DocumentSet, topic_keys: set[str] | None = None) -> list[EntityMention]:
    """One mention per block whose key is in the topic-key set.

    Default topic-key set: every key that appears with link_hint=true
    anywhere in the document set.
    """
    if topic_keys is None:
        topic_keys = {
            b.key for d in ds.documents for b in d.blocks if b.link_hint
        }
    return [
        EntityMention(doc_id=d.doc_id, key=b.key, raw_value=b.value)
        for d in ds.documents
        for b in d.blocks
        if b.key in topic_keys
    ]
