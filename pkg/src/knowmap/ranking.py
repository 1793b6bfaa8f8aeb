"""Proximity ranking: language features (TF-IDF cosine against a Rocchio
centroid built from the knowledge map) fused with network features
(personalized PageRank restarted at map members).

score = text_weight * text_sim + (1 - text_weight) * graph_prox
when the map is non-empty; with an empty map the score is the text
similarity alone.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, fields
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .errors import UnknownIdError
from .extract import tokenize
from .graph import KnowledgeGraph

if TYPE_CHECKING:  # pragma: no cover
    from .session import KnowledgeMap

SparseVector = dict[str, float]

RESULT_KINDS = ("publication", "clinical_trial", "entity")


@dataclass
class RankingConfig:
    """Knobs for the ranking pipeline.

    alpha and beta are the Rocchio query-retention and positive-feedback
    weights; text_weight is the fusion weight on the text-similarity term;
    damping, epsilon and max_iter drive the PageRank power iteration;
    card_entity_mass is the restart share given to the card's own entity
    when ranking card sections.
    """

    alpha: float = 1.0
    beta: float = 0.75
    text_weight: float = 0.5
    damping: float = 0.85
    epsilon: float = 1e-9
    max_iter: int = 100
    top_k: int = 20
    card_entity_mass: float = 0.5

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if not 0.0 <= self.text_weight <= 1.0:
            raise ValueError("text_weight must lie in [0, 1]")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iter < 1 or self.top_k < 1:
            raise ValueError("max_iter and top_k must be >= 1")
        if not 0.0 <= self.card_entity_mass <= 1.0:
            raise ValueError("card_entity_mass must lie in [0, 1]")

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "RankingConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown ranking config keys: {sorted(unknown)}")
        return cls(**dict(obj))


@dataclass(frozen=True)
class RankedItem:
    item_id: str
    kind: str  # "publication" | "clinical_trial" | "entity"
    score: float
    text_sim: float
    graph_prox: float
    rank: int


@dataclass
class TextIndex:
    """TF-IDF index over documents (title + body) and entity pseudo-documents
    (canonical name + synonyms + summary). Vectors are L2-normalized; tokens
    are case-folded; there is no stopword removal."""

    vocabulary: dict[str, int]
    idf: dict[str, float]
    vectors: dict[str, SparseVector]

    def vectorize(self, text: str) -> SparseVector:
        counts = Counter(token.text.casefold() for token in tokenize(text))
        vec = {t: c * self.idf[t] for t, c in counts.items() if t in self.idf}
        return l2_normalize(vec)


def l2_normalize(vector: SparseVector) -> SparseVector:
    norm = math.sqrt(sum(w * w for w in vector.values()))
    if norm == 0.0:
        return {}
    return {t: w / norm for t, w in vector.items() if w != 0.0}


def cosine(a: SparseVector, b: SparseVector) -> float:
    # Both inputs are unit (or zero) vectors, so the dot product is the
    # cosine; clamp away float fuzz.
    if len(a) > len(b):
        a, b = b, a
    dot = sum(w * b.get(t, 0.0) for t, w in a.items())
    return min(1.0, max(0.0, dot))


def _item_text(graph: KnowledgeGraph, item_id: str) -> str:
    doc = graph.documents.get(item_id)
    if doc is not None:
        return f"{doc.title} {doc.body}" if doc.body else doc.title
    entry = graph.entities[item_id]
    parts = [entry.canonical_name, *entry.synonyms]
    if entry.summary:
        parts.append(entry.summary)
    return " ".join(parts)


def build_text_index(graph: KnowledgeGraph, config: RankingConfig | None = None) -> TextIndex:
    """Index every document and entity pseudo-document in the graph.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1 where N counts indexed items
    with non-empty text.
    """
    item_tokens: dict[str, list[str]] = {}
    for item_id in graph.node_ids():
        tokens = [t.text.casefold() for t in tokenize(_item_text(graph, item_id))]
        item_tokens[item_id] = tokens

    df: Counter[str] = Counter()
    n_items = 0
    for tokens in item_tokens.values():
        if not tokens:
            continue
        n_items += 1
        df.update(set(tokens))

    vocabulary = {token: i for i, token in enumerate(sorted(df))}
    idf = {token: math.log((1 + n_items) / (1 + df[token])) + 1.0 for token in vocabulary}

    vectors: dict[str, SparseVector] = {}
    for item_id, tokens in item_tokens.items():
        counts = Counter(tokens)
        vectors[item_id] = l2_normalize({t: c * idf[t] for t, c in counts.items()})
    return TextIndex(vocabulary=vocabulary, idf=idf, vectors=vectors)


def rocchio_centroid(q0: SparseVector, positives: Sequence[SparseVector],
                     config: RankingConfig | None = None) -> SparseVector:
    """normalize(alpha * q0 + (beta / |P|) * sum(P)); the zero vector stays
    zero, and with no positives this reduces to normalize(alpha * q0)."""
    config = config or RankingConfig()
    combined: dict[str, float] = {t: config.alpha * w for t, w in q0.items()}
    if positives:
        scale = config.beta / len(positives)
        for positive in positives:
            for t, w in positive.items():
                combined[t] = combined.get(t, 0.0) + scale * w
    return l2_normalize(combined)


def personalized_pagerank(graph: KnowledgeGraph, restart_set: Iterable[str],
                          config: RankingConfig | None = None, *,
                          restart_weights: Mapping[str, float] | None = None
                          ) -> dict[str, float]:
    """Random walk with restart over the symmetrized weighted-edge view.

    Power iteration of r <- (1 - d) * e + d * (P^T r + dangling_mass * e)
    where e is the restart distribution (uniform over restart_set unless
    restart_weights is given), P row-normalizes edge weights, and mass
    sitting on edge-less nodes is redistributed to e. Stops when the L1
    change drops below epsilon or after max_iter sweeps. Scores sum to 1;
    nodes unreachable from the restart set score exactly 0.
    """
    config = config or RankingConfig()
    restart_nodes = list(dict.fromkeys(restart_set))
    if not restart_nodes:
        raise ValueError("restart set must be non-empty")
    for node in restart_nodes:
        if node not in graph:
            raise UnknownIdError(f"restart node {node!r} not in graph")

    if restart_weights is None:
        e = {node: 1.0 / len(restart_nodes) for node in restart_nodes}
    else:
        total = sum(restart_weights.values())
        if total <= 0:
            raise ValueError("restart weights must sum to a positive value")
        e = {node: w / total for node, w in restart_weights.items() if w > 0}
        for node in e:
            if node not in graph:
                raise UnknownIdError(f"restart node {node!r} not in graph")

    adjacency = graph.adjacency
    degree = graph.degree
    d = config.damping

    r = dict(e)
    for _ in range(config.max_iter):
        spread: dict[str, float] = {}
        dangling = 0.0
        for node, mass in r.items():
            if mass == 0.0:
                continue
            deg = degree[node]
            if deg <= 0.0:
                dangling += mass
                continue
            share = mass / deg
            for nbr, weight in adjacency[node]:
                spread[nbr] = spread.get(nbr, 0.0) + share * weight
        nxt = {node: d * mass for node, mass in spread.items()}
        base = (1.0 - d) + d * dangling
        for node, weight in e.items():
            nxt[node] = nxt.get(node, 0.0) + base * weight
        delta = sum(abs(nxt.get(k, 0.0) - r.get(k, 0.0)) for k in set(nxt) | set(r))
        r = nxt
        if delta < config.epsilon:
            break
    return {node: r.get(node, 0.0) for node in graph.node_ids()}


def minmax_normalize(scores: Mapping[str, float], keys: Sequence[str]) -> dict[str, float]:
    """Min-max normalize over ``keys``; an all-equal set normalizes to 0."""
    if not keys:
        return {}
    values = [scores.get(k, 0.0) for k in keys]
    low, high = min(values), max(values)
    if high == low:
        return {k: 0.0 for k in keys}
    span = high - low
    return {k: (scores.get(k, 0.0) - low) / span for k in keys}


def _candidate_ids(graph: KnowledgeGraph, kind_filter: str, excluded: set[str]) -> list[str]:
    if kind_filter == "entity":
        return [eid for eid in graph.entities if eid not in excluded]
    return [did for did, doc in graph.documents.items()
            if doc.kind == kind_filter and did not in excluded]


def _item_kind(graph: KnowledgeGraph, item_id: str) -> str:
    doc = graph.documents.get(item_id)
    return doc.kind if doc is not None else "entity"


def rank_candidates(candidates: Sequence[str], text_sims: Mapping[str, float],
                    graph_prox: Mapping[str, float], text_weight: float,
                    top_k: int, kinds: Mapping[str, str]) -> list[RankedItem]:
    """Fuse, sort (score descending, id ascending) and truncate."""
    scored = []
    for item_id in candidates:
        ts = text_sims.get(item_id, 0.0)
        gp = graph_prox.get(item_id, 0.0)
        score = text_weight * ts + (1.0 - text_weight) * gp
        scored.append((item_id, score, ts, gp))
    scored.sort(key=lambda row: (-row[1], row[0]))
    return [RankedItem(item_id=item_id, kind=kinds[item_id], score=score,
                       text_sim=ts, graph_prox=gp, rank=position)
            for position, (item_id, score, ts, gp) in enumerate(scored[:top_k], start=1)]


def rank_items(graph: KnowledgeGraph, index: TextIndex, map_state: "KnowledgeMap",
               query_text: str, kind_filter: str,
               config: RankingConfig | None = None) -> list[RankedItem]:
    """Rank items of one kind by proximity to the knowledge map plus query.

    Items already in the map are excluded. With a non-empty map the graph
    term is the map-restarted PageRank min-max normalized over the
    candidates; with an empty map the score is text similarity alone, and
    an empty map plus empty query degenerates to an id-ordered listing.
    """
    config = config or RankingConfig()
    if kind_filter not in RESULT_KINDS:
        raise ValueError(f"kind_filter must be one of {RESULT_KINDS}")
    landmarks = list(map_state.landmarks)
    starred = list(map_state.starred_docs)
    for entity_id in landmarks:
        if entity_id not in graph.entities:
            raise UnknownIdError(f"landmark {entity_id!r} not in graph")
    for doc_id in starred:
        if doc_id not in graph.documents:
            raise UnknownIdError(f"starred document {doc_id!r} not in graph")

    members = set(landmarks) | set(starred)
    candidates = _candidate_ids(graph, kind_filter, members)
    kinds = {c: _item_kind(graph, c) for c in candidates}

    q0 = index.vectorize(query_text) if query_text else {}
    positives = [index.vectors[i] for i in starred + landmarks]
    centroid = rocchio_centroid(q0, positives, config)
    text_sims = {c: cosine(centroid, index.vectors.get(c, {})) for c in candidates}

    if members:
        ppr = personalized_pagerank(graph, landmarks + starred, config)
        prox = minmax_normalize(ppr, candidates)
        text_weight = config.text_weight
    else:
        prox = {c: 0.0 for c in candidates}
        text_weight = 1.0
    return rank_candidates(candidates, text_sims, prox, text_weight, config.top_k, kinds)
