"""Immutable knowledge-graph store over entity and document nodes.

Nodes are entity ids plus document ids; edges come from mentions
(doc - entity, weight ln(1 + mention count)) and relations
(entity - entity, weight from the relation). The graph is assembled once,
validated, and never mutated, so concurrent readers are safe.

On disk a graph is a directory with ``manifest.json`` plus four JSON Lines
files: ``entities.jsonl``, ``documents.jsonl``, ``mentions.jsonl`` and
``relations.jsonl``, all in canonical sorted order so identical graphs
serialize byte-identically.
"""

from __future__ import annotations

import json
import math
from collections import Counter, deque
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import CuratedRelationRecord, DocumentRecord, LexiconEntry
from .errors import IntegrityError, UnknownIdError, VersionError
from .extract import Mention, Relation

FORMAT_VERSION = 1

_FILES = ("entities.jsonl", "documents.jsonl", "mentions.jsonl", "relations.jsonl")


@dataclass(frozen=True)
class WeightedEdge:
    u: str
    v: str
    weight: float
    origin: str  # "mention" | "relation"


class KnowledgeGraph:
    """Validated, indexed, immutable store. Build via :func:`assemble_graph`."""

    def __init__(self, entities: Sequence[LexiconEntry], documents: Sequence[DocumentRecord],
                 mentions: Sequence[Mention], relations: Sequence[Relation]):
        self.entities: dict[str, LexiconEntry] = {}
        for entry in sorted(entities, key=lambda e: e.entity_id):
            if entry.entity_id in self.entities:
                raise IntegrityError(f"duplicate entity id {entry.entity_id!r}")
            self.entities[entry.entity_id] = entry

        self.documents: dict[str, DocumentRecord] = {}
        for doc in sorted(documents, key=lambda d: d.doc_id):
            if doc.doc_id in self.documents:
                raise IntegrityError(f"duplicate document id {doc.doc_id!r}")
            if doc.doc_id in self.entities:
                raise IntegrityError(f"id {doc.doc_id!r} used for both an entity and a document")
            self.documents[doc.doc_id] = doc

        self.mentions: list[Mention] = sorted(
            mentions, key=lambda m: (m.doc_id, m.sentence_index, m.char_start, m.char_end))
        for mention in self.mentions:
            if mention.entity_id not in self.entities:
                raise IntegrityError(f"mention references unknown entity {mention.entity_id!r}")
            if mention.doc_id not in self.documents:
                raise IntegrityError(f"mention references unknown document {mention.doc_id!r}")

        self.relations: dict[tuple[str, str], Relation] = {}
        for relation in sorted(relations, key=lambda r: (r.subject_id, r.object_id)):
            self._validate_relation(relation)
            key = (relation.subject_id, relation.object_id)
            if key in self.relations:
                raise IntegrityError(f"duplicate relation for pair {key!r}")
            self.relations[key] = relation

        # Secondary indexes over mentions.
        self.entity_docs: dict[str, set[str]] = {eid: set() for eid in self.entities}
        self.doc_entity_counts: dict[str, Counter[str]] = {
            did: Counter() for did in self.documents}
        for mention in self.mentions:
            self.entity_docs[mention.entity_id].add(mention.doc_id)
            self.doc_entity_counts[mention.doc_id][mention.entity_id] += 1

        self.edges: list[WeightedEdge] = self._build_edges()
        self.adjacency: dict[str, list[tuple[str, float]]] = {n: [] for n in self.node_ids()}
        self.degree: dict[str, float] = {n: 0.0 for n in self.node_ids()}
        for edge in self.edges:
            self.adjacency[edge.u].append((edge.v, edge.weight))
            self.adjacency[edge.v].append((edge.u, edge.weight))
            self.degree[edge.u] += edge.weight
            self.degree[edge.v] += edge.weight

    def _validate_relation(self, relation: Relation) -> None:
        if relation.subject_id >= relation.object_id:
            raise IntegrityError(
                f"relation pair not in canonical order: "
                f"({relation.subject_id!r}, {relation.object_id!r})")
        for endpoint in (relation.subject_id, relation.object_id):
            if endpoint not in self.entities:
                raise IntegrityError(f"relation references unknown entity {endpoint!r}")
        if relation.kind not in ("cooccurrence", "curated"):
            raise IntegrityError(f"relation has unknown kind {relation.kind!r}")
        if relation.confidence < 0:
            raise IntegrityError("relation confidence must be >= 0")
        if relation.edge_weight <= 0:
            raise IntegrityError("relation edge_weight must be > 0")
        if (relation.kind == "cooccurrence") != bool(relation.evidence):
            raise IntegrityError(
                "evidence must be non-empty exactly for cooccurrence relations")
        for doc_id, _ in relation.evidence:
            if doc_id not in self.documents:
                raise IntegrityError(f"relation evidence references unknown document {doc_id!r}")

    def _build_edges(self) -> list[WeightedEdge]:
        edges = []
        for doc_id in self.documents:
            for entity_id, count in sorted(self.doc_entity_counts[doc_id].items()):
                u, v = sorted((doc_id, entity_id))
                edges.append(WeightedEdge(u, v, math.log(1 + count), "mention"))
        for (subject_id, object_id), relation in self.relations.items():
            edges.append(WeightedEdge(subject_id, object_id, relation.edge_weight, "relation"))
        edges.sort(key=lambda e: (e.u, e.v, e.origin))
        return edges

    def node_ids(self) -> list[str]:
        return list(self.entities) + list(self.documents)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.entities or node_id in self.documents

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return (self.entities == other.entities
                and self.documents == other.documents
                and self.mentions == other.mentions
                and self.relations == other.relations)


def assemble_graph(entities: Sequence[LexiconEntry], documents: Sequence[DocumentRecord],
                   mentions: Sequence[Mention], relations: Sequence[Relation]) -> KnowledgeGraph:
    """Build and validate a graph; rejects dangling references."""
    return KnowledgeGraph(entities, documents, mentions, relations)


def neighbors(graph: KnowledgeGraph, node_id: str, type_filter: str | None = None,
              max_hops: int = 1) -> set[str]:
    """Entity ids reachable within ``max_hops`` edges of ``node_id``.

    Document nodes are traversed but never returned; the start node is
    excluded.
    """
    if node_id not in graph:
        raise UnknownIdError(f"unknown node id {node_id!r}")
    seen = {node_id}
    frontier = deque([(node_id, 0)])
    result: set[str] = set()
    while frontier:
        node, depth = frontier.popleft()
        if depth == max_hops:
            continue
        for nbr, _ in graph.adjacency[node]:
            if nbr in seen:
                continue
            seen.add(nbr)
            entry = graph.entities.get(nbr)
            if entry is not None and (type_filter is None or entry.entity_type == type_filter):
                result.add(nbr)
            frontier.append((nbr, depth + 1))
    return result


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _relation_to_obj(relation: Relation) -> dict:
    obj = asdict(relation)
    obj["evidence"] = [[doc_id, index] for doc_id, index in relation.evidence]
    return obj


def _relation_from_obj(obj: dict) -> Relation:
    return Relation(
        subject_id=obj["subject_id"],
        object_id=obj["object_id"],
        kind=obj["kind"],
        predicate=obj["predicate"],
        confidence=obj["confidence"],
        edge_weight=obj["edge_weight"],
        evidence=[(doc_id, index) for doc_id, index in obj["evidence"]],
        source=obj["source"],
    )


def save_graph(graph: KnowledgeGraph, directory: str | Path) -> None:
    """Persist a graph as manifest plus four JSON Lines files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    sections: dict[str, list[str]] = {
        "entities.jsonl": [_dumps(asdict(e)) for e in graph.entities.values()],
        "documents.jsonl": [_dumps(asdict(d)) for d in graph.documents.values()],
        "mentions.jsonl": [_dumps(asdict(m)) for m in graph.mentions],
        "relations.jsonl": [_dumps(_relation_to_obj(r)) for r in graph.relations.values()],
    }
    for name, lines in sections.items():
        (directory / name).write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8")
    manifest = {
        "format_version": FORMAT_VERSION,
        "counts": {
            "entities": len(graph.entities),
            "documents": len(graph.documents),
            "mentions": len(graph.mentions),
            "relations": len(graph.relations),
        },
    }
    (directory / "manifest.json").write_text(_dumps(manifest) + "\n", encoding="utf-8")


def _read_jsonl(path: Path) -> list[dict]:
    objs = []
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                objs.append(json.loads(line))
    return objs


def load_graph(directory: str | Path) -> KnowledgeGraph:
    """Load a persisted graph, checking format version and manifest counts."""
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionError(
            f"graph at {directory} uses format version {version}, "
            f"this build reads version {FORMAT_VERSION}")
    raw = {name: _read_jsonl(directory / name) for name in _FILES}
    counts = manifest.get("counts", {})
    for name in _FILES:
        section = name.split(".", 1)[0]
        expected = counts.get(section)
        if expected != len(raw[name]):
            raise IntegrityError(
                f"{directory / name}: manifest promises {expected} records, "
                f"file holds {len(raw[name])}")
    entities = [LexiconEntry(**obj) for obj in raw["entities.jsonl"]]
    documents = [DocumentRecord(**obj) for obj in raw["documents.jsonl"]]
    mentions = [Mention(**obj) for obj in raw["mentions.jsonl"]]
    relations = [_relation_from_obj(obj) for obj in raw["relations.jsonl"]]
    return assemble_graph(entities, documents, mentions, relations)


def merge_curated_relations(cooccurrence: Iterable[Relation],
                            curated: Iterable[CuratedRelationRecord],
                            known_entities: Iterable[str]) -> list[Relation]:
    """Overlay curated relation records on extracted co-occurrence relations.

    Curated records win when both name the same pair: a curated database
    assertion outranks a statistical co-occurrence. Unknown endpoint ids and
    duplicate curated pairs are hard errors.
    """
    known = set(known_entities)
    merged: dict[tuple[str, str], Relation] = {
        (r.subject_id, r.object_id): r for r in cooccurrence}
    seen_curated: set[tuple[str, str]] = set()
    for record in curated:
        for endpoint in (record.subject_id, record.object_id):
            if endpoint not in known:
                raise IntegrityError(
                    f"curated relation references unknown entity {endpoint!r}")
        key = tuple(sorted((record.subject_id, record.object_id)))
        if key in seen_curated:
            raise IntegrityError(f"duplicate curated relation for pair {key!r}")
        seen_curated.add(key)
        merged[key] = Relation(
            subject_id=key[0],
            object_id=key[1],
            kind="curated",
            predicate=record.predicate,
            confidence=record.confidence,
            edge_weight=1.0,
            evidence=[],
            source=record.source,
        )
    return [merged[key] for key in sorted(merged)]
