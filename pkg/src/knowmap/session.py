"""Knowledge-map session state: landmarks, starred documents, staleness,
ranking snapshots, and entity cards ranked in the context of the whole map.

Ranking is recomputed only on an explicit :func:`refresh`; mutations mark
the map dirty until then. A map is dirty exactly when its fingerprint
(landmarks plus stars, in insertion order) differs from the fingerprint
captured by the last snapshot, or when no snapshot exists yet.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field

from .errors import UnknownIdError
from .graph import KnowledgeGraph, neighbors
from .ranking import (RankedItem, RankingConfig, TextIndex, cosine,
                      minmax_normalize, personalized_pagerank, rank_candidates,
                      rank_items, rocchio_centroid)

# Card sections shown for every entity, then per entity type.
DOCUMENT_SECTIONS = (("related publications", "publication"),
                     ("related clinical trials", "clinical_trial"))
TYPE_SECTIONS: dict[str, tuple[tuple[str, tuple[str, ...]], ...]] = {
    "disease": (("associated genes", ("gene",)),
                ("associated drugs", ("drug",))),
    "gene": (("related variants", ("variant",)),
             ("related pathways and processes", ("pathway", "process"))),
}


@dataclass
class RankingSnapshot:
    computed_at: int
    publications: list[RankedItem]
    clinical_trials: list[RankedItem]
    fingerprint: str

    def items_for(self, kind: str) -> list[RankedItem]:
        return self.publications if kind == "publication" else self.clinical_trials


@dataclass
class Card:
    entity_id: str
    canonical_name: str
    entity_type: str
    summary: str
    sections: list[tuple[str, list[RankedItem]]]


@dataclass
class KnowledgeMap:
    map_id: str
    config: RankingConfig = field(default_factory=RankingConfig)
    landmarks: list[str] = field(default_factory=list)
    starred_docs: list[str] = field(default_factory=list)
    snapshot: RankingSnapshot | None = None
    _seq: int = 0

    def fingerprint(self) -> str:
        return json.dumps({"landmarks": self.landmarks, "starred_docs": self.starred_docs},
                          separators=(",", ":"))

    @property
    def dirty(self) -> bool:
        return self.snapshot is None or self.snapshot.fingerprint != self.fingerprint()

    def to_json(self) -> dict:
        return {
            "map_id": self.map_id,
            "landmarks": list(self.landmarks),
            "starred_docs": list(self.starred_docs),
            "config": self.config.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KnowledgeMap":
        config = obj.get("config")
        return cls(
            map_id=obj["map_id"],
            config=RankingConfig.from_json(config) if config else RankingConfig(),
            landmarks=list(obj.get("landmarks", [])),
            starred_docs=list(obj.get("starred_docs", [])),
        )


def create_map(config: RankingConfig | None = None) -> KnowledgeMap:
    """Fresh empty map with a unique id; dirty until the first refresh."""
    return KnowledgeMap(map_id=uuid.uuid4().hex, config=config or RankingConfig())


def add_landmark(kmap: KnowledgeMap, graph: KnowledgeGraph, entity_id: str) -> KnowledgeMap:
    if entity_id not in graph.entities:
        raise UnknownIdError(f"unknown entity id {entity_id!r}")
    if entity_id not in kmap.landmarks:
        kmap.landmarks.append(entity_id)
    return kmap


def remove_landmark(kmap: KnowledgeMap, graph: KnowledgeGraph, entity_id: str) -> KnowledgeMap:
    if entity_id not in graph.entities:
        raise UnknownIdError(f"unknown entity id {entity_id!r}")
    if entity_id in kmap.landmarks:
        kmap.landmarks.remove(entity_id)
    return kmap


def star_document(kmap: KnowledgeMap, graph: KnowledgeGraph, doc_id: str) -> KnowledgeMap:
    if doc_id not in graph.documents:
        raise UnknownIdError(f"unknown document id {doc_id!r}")
    if doc_id not in kmap.starred_docs:
        kmap.starred_docs.append(doc_id)
    return kmap


def unstar_document(kmap: KnowledgeMap, graph: KnowledgeGraph, doc_id: str) -> KnowledgeMap:
    if doc_id not in graph.documents:
        raise UnknownIdError(f"unknown document id {doc_id!r}")
    if doc_id in kmap.starred_docs:
        kmap.starred_docs.remove(doc_id)
    return kmap


def refresh(kmap: KnowledgeMap, graph: KnowledgeGraph, index: TextIndex) -> RankingSnapshot:
    """Recompute the per-kind rankings for the current map and clear dirty."""
    publications = rank_items(graph, index, kmap, "", "publication", kmap.config)
    trials = rank_items(graph, index, kmap, "", "clinical_trial", kmap.config)
    kmap._seq += 1
    snapshot = RankingSnapshot(
        computed_at=kmap._seq,
        publications=publications,
        clinical_trials=trials,
        fingerprint=kmap.fingerprint(),
    )
    kmap.snapshot = snapshot
    return snapshot


def _card_restart_weights(kmap: KnowledgeMap, entity_id: str,
                          entity_mass: float) -> dict[str, float]:
    members = list(dict.fromkeys(kmap.landmarks + kmap.starred_docs))
    if not members:
        return {entity_id: 1.0}
    weights = {entity_id: entity_mass}
    share = (1.0 - entity_mass) / len(members)
    for member in members:
        weights[member] = weights.get(member, 0.0) + share
    return weights


def build_card(kmap: KnowledgeMap, graph: KnowledgeGraph, index: TextIndex,
               entity_id: str) -> Card:
    """Columnar per-entity summary whose sections are ranked in map context.

    One PageRank run anchors the card: restart mass card_entity_mass on the
    card entity, the remainder spread uniformly over map members (all mass
    on the entity for an empty map). Entity sections rank graph-only;
    document sections fuse that proximity with cosine against a centroid of
    the map members plus the card entity. Read-only: the map is unchanged.
    """
    entry = graph.entities.get(entity_id)
    if entry is None:
        raise UnknownIdError(f"unknown entity id {entity_id!r}")
    config = kmap.config

    weights = _card_restart_weights(kmap, entity_id, config.card_entity_mass)
    ppr = personalized_pagerank(graph, weights.keys(), config, restart_weights=weights)

    positives = [index.vectors[i] for i in
                 kmap.starred_docs + kmap.landmarks + [entity_id]]
    centroid = rocchio_centroid({}, positives, config)

    landmark_set = set(kmap.landmarks)
    starred_set = set(kmap.starred_docs)

    sections: list[tuple[str, list[RankedItem]]] = []
    for section_name, doc_kind in DOCUMENT_SECTIONS:
        candidates = sorted(
            doc_id for doc_id in graph.entity_docs[entity_id]
            if graph.documents[doc_id].kind == doc_kind and doc_id not in starred_set)
        prox = minmax_normalize(ppr, candidates)
        text_sims = {c: cosine(centroid, index.vectors.get(c, {})) for c in candidates}
        kinds = {c: doc_kind for c in candidates}
        sections.append((section_name, rank_candidates(
            candidates, text_sims, prox, config.text_weight, config.top_k, kinds)))

    for section_name, entity_types in TYPE_SECTIONS.get(entry.entity_type, ()):
        related: set[str] = set()
        for entity_type in entity_types:
            related |= neighbors(graph, entity_id, entity_type, max_hops=2)
        candidates = sorted(related - landmark_set - {entity_id})
        prox = minmax_normalize(ppr, candidates)
        kinds = {c: "entity" for c in candidates}
        # Entities carry little text, so these sections rank graph-only.
        sections.append((section_name, rank_candidates(
            candidates, {}, prox, 0.0, config.top_k, kinds)))

    return Card(
        entity_id=entity_id,
        canonical_name=entry.canonical_name,
        entity_type=entry.entity_type,
        summary=entry.summary,
        sections=sections,
    )
