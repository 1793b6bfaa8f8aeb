"""Corpus input records and loaders.

Three plain-text inputs feed the ingestion pipeline:

* documents: JSON Lines, one object per line. Required keys ``doc_id``,
  ``kind`` (``publication`` or ``clinical_trial``) and ``title``; optional
  ``authors`` (array of strings), ``date`` (ISO-8601 string), ``body``
  (string) and ``metadata`` (object mapping string keys to arrays of
  strings). Unknown keys are ignored.
* lexicon: headerless TSV with 6 columns: entity_id, entity_type,
  canonical_name, pipe-separated synonyms, summary, source.
* curated relations: headerless TSV with 5 columns: subject_id, object_id,
  predicate, confidence, source.

Loaders are strict: malformed lines, duplicate ids and out-of-enum values
raise :class:`~knowmap.errors.CorpusFormatError` naming the offending line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError

ENTITY_TYPES = frozenset(
    {"disease", "gene", "drug", "protein", "pathway", "variant", "process"}
)
DOCUMENT_KINDS = frozenset({"publication", "clinical_trial"})


@dataclass
class DocumentRecord:
    """One publication or clinical-trial record.

    ``doc_id`` is namespaced (``pmid:33559975``, ``nct:NCT04055376``) and
    unique within a corpus. Trials must carry an ``nct`` metadata entry
    matching the doc_id suffix. The body may be empty; the title may not.
    """

    doc_id: str
    kind: str
    title: str
    authors: list[str] = field(default_factory=list)
    date: str | None = None
    body: str = ""
    metadata: dict[str, list[str]] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.doc_id:
            raise CorpusFormatError("document doc_id must be non-empty")
        if self.kind not in DOCUMENT_KINDS:
            raise CorpusFormatError(
                f"document {self.doc_id!r}: unknown kind {self.kind!r} "
                f"(expected one of {sorted(DOCUMENT_KINDS)})"
            )
        if not self.title:
            raise CorpusFormatError(f"document {self.doc_id!r}: title must be non-empty")
        if self.kind == "clinical_trial":
            nct = self.metadata.get("nct", [])
            suffix = self.doc_id.split(":", 1)[-1]
            if not nct or nct[0] != suffix:
                raise CorpusFormatError(
                    f"document {self.doc_id!r}: clinical trials must carry an 'nct' "
                    f"metadata entry matching the doc_id suffix"
                )


@dataclass
class LexiconEntry:
    """One entity from the structured lexicon.

    The canonical name is always also a synonym, so the synonym list is
    never empty.
    """

    entity_id: str
    entity_type: str
    canonical_name: str
    synonyms: list[str]
    summary: str = ""
    source: str = ""

    def validate(self) -> None:
        if not self.entity_id:
            raise CorpusFormatError("lexicon entity_id must be non-empty")
        if self.entity_type not in ENTITY_TYPES:
            raise CorpusFormatError(
                f"entity {self.entity_id!r}: unknown entity_type {self.entity_type!r} "
                f"(expected one of {sorted(ENTITY_TYPES)})"
            )
        if not self.canonical_name:
            raise CorpusFormatError(f"entity {self.entity_id!r}: canonical_name must be non-empty")
        if self.canonical_name not in self.synonyms:
            raise CorpusFormatError(
                f"entity {self.entity_id!r}: canonical_name must appear among synonyms"
            )
        if not self.synonyms:
            raise CorpusFormatError(f"entity {self.entity_id!r}: synonyms must be non-empty")


@dataclass
class CuratedRelationRecord:
    """One row of a curated relation table from a structured database."""

    subject_id: str
    object_id: str
    predicate: str
    confidence: float
    source: str

    def validate(self) -> None:
        if self.subject_id == self.object_id:
            raise CorpusFormatError(
                f"curated relation: subject and object must differ ({self.subject_id!r})"
            )
        if not 0.0 <= self.confidence <= 1.0:
            raise CorpusFormatError(
                f"curated relation {self.subject_id!r}->{self.object_id!r}: "
                f"confidence {self.confidence} outside [0, 1]"
            )


def load_documents(path: str | Path) -> list[DocumentRecord]:
    """Load a JSON Lines document file, preserving file order."""
    path = Path(path)
    records: list[DocumentRecord] = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path} line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(f"{path} line {lineno}: expected a JSON object")
            try:
                record = _document_from_obj(obj)
                record.validate()
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path} line {lineno}: {exc}") from None
            if record.doc_id in seen:
                raise CorpusFormatError(
                    f"{path} line {lineno}: duplicate doc_id {record.doc_id!r} "
                    f"(first seen on line {seen[record.doc_id]})"
                )
            seen[record.doc_id] = lineno
            records.append(record)
    return records


def _document_from_obj(obj: dict) -> DocumentRecord:
    for key in ("doc_id", "kind", "title"):
        if key not in obj:
            raise CorpusFormatError(f"missing required key {key!r}")
    authors = obj.get("authors", [])
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise CorpusFormatError("'authors' must be an array of strings")
    date = obj.get("date")
    if date is not None and not isinstance(date, str):
        raise CorpusFormatError("'date' must be a string")
    body = obj.get("body", "")
    if not isinstance(body, str):
        raise CorpusFormatError("'body' must be a string")
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise CorpusFormatError("'metadata' must be an object")
    clean_meta: dict[str, list[str]] = {}
    for key, values in metadata.items():
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            raise CorpusFormatError(f"metadata key {key!r} must map to an array of strings")
        clean_meta[str(key)] = list(values)
    return DocumentRecord(
        doc_id=str(obj["doc_id"]),
        kind=str(obj["kind"]),
        title=str(obj["title"]),
        authors=list(authors),
        date=date,
        body=body,
        metadata=clean_meta,
    )


def load_lexicon(path: str | Path) -> list[LexiconEntry]:
    """Load a 6-column TSV lexicon.

    The canonical name is appended to the synonym list when the synonyms
    column omits it.
    """
    path = Path(path)
    entries: list[LexiconEntry] = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            columns = line.split("\t")
            if len(columns) != 6:
                raise CorpusFormatError(
                    f"{path} line {lineno}: expected 6 tab-separated columns, got {len(columns)}"
                )
            entity_id, entity_type, canonical, syn_col, summary, source = (c.strip() for c in columns)
            synonyms = [s.strip() for s in syn_col.split("|") if s.strip()]
            if canonical and canonical not in synonyms:
                synonyms.append(canonical)
            entry = LexiconEntry(
                entity_id=entity_id,
                entity_type=entity_type,
                canonical_name=canonical,
                synonyms=synonyms,
                summary=summary,
                source=source,
            )
            try:
                entry.validate()
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path} line {lineno}: {exc}") from None
            if entity_id in seen:
                raise CorpusFormatError(
                    f"{path} line {lineno}: duplicate entity_id {entity_id!r} "
                    f"(first seen on line {seen[entity_id]})"
                )
            seen[entity_id] = lineno
            entries.append(entry)
    return entries


def load_curated_relations(path: str | Path) -> list[CuratedRelationRecord]:
    """Load a 5-column TSV of curated relations."""
    path = Path(path)
    records: list[CuratedRelationRecord] = []
    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            columns = line.split("\t")
            if len(columns) != 5:
                raise CorpusFormatError(
                    f"{path} line {lineno}: expected 5 tab-separated columns, got {len(columns)}"
                )
            subject_id, object_id, predicate, conf_col, source = (c.strip() for c in columns)
            try:
                confidence = float(conf_col)
            except ValueError:
                raise CorpusFormatError(
                    f"{path} line {lineno}: confidence {conf_col!r} is not a number"
                ) from None
            record = CuratedRelationRecord(subject_id, object_id, predicate, confidence, source)
            try:
                record.validate()
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path} line {lineno}: {exc}") from None
            records.append(record)
    return records
