"""Independent brute-force implementations used as test oracles.

Everything here is deliberately naive and written against the stated rules
only: no code is shared with the package internals being checked. Dense
linear algebra uses numpy; text handling assumes ASCII fixtures.
"""

from __future__ import annotations

import math
import re
from collections import Counter

import numpy as np

_TOKEN_RE = re.compile(r"[0-9A-Za-z'\-]+")


def oracle_tokens(text):
    """(token, start, end) triples: maximal runs of alnum/apostrophe/hyphen."""
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def oracle_split_sentences(body):
    """Sentence substrings of a body, by scanning for terminator + space +
    uppercase-or-digit; whitespace-trimmed, empties dropped."""
    pieces = []
    current = []
    i = 0
    while i < len(body):
        ch = body[i]
        current.append(ch)
        if ch in ".!?":
            m = re.match(r"\s+[A-Z0-9]", body[i + 1:])
            if m:
                ws = len(m.group(0)) - 1
                pieces.append("".join(current))
                current = []
                i += 1 + ws
                continue
        i += 1
    if current:
        pieces.append("".join(current))
    return [p.strip() for p in pieces if p.strip()]


def oracle_doc_sentences(doc):
    """Sentence texts of a document: title first, then body sentences."""
    return [doc.title.strip()] + oracle_split_sentences(doc.body)


def _norm(tokens, fold):
    joined = " ".join(t.replace("-", "") for t in tokens)
    return joined.casefold() if fold else joined


def oracle_find_mentions(doc, lexicon):
    """Leftmost-longest mention scan trying every synonym at every position.

    Returns (entity_id, sentence_index, surface) triples.
    """
    synonym_rows = []
    for entry in lexicon:
        for synonym in entry.synonyms:
            syn_tokens = [t for t, _, _ in oracle_tokens(synonym)]
            if syn_tokens:
                synonym_rows.append((entry.entity_id, synonym, syn_tokens))

    found = []
    for sentence_index, text in enumerate(oracle_doc_sentences(doc)):
        tokens = oracle_tokens(text)
        i = 0
        while i < len(tokens):
            best = None  # (width, entity_id)
            for entity_id, synonym, syn_tokens in synonym_rows:
                width = len(syn_tokens)
                if i + width > len(tokens):
                    continue
                window = [t for t, _, _ in tokens[i:i + width]]
                fold = len(synonym) >= 4
                if _norm(window, fold) != _norm(syn_tokens, fold):
                    continue
                if best is None or width > best[0] or (width == best[0] and entity_id < best[1]):
                    best = (width, entity_id)
            if best is None:
                i += 1
                continue
            width, entity_id = best
            surface = text[tokens[i][1]:tokens[i + width - 1][2]]
            found.append((entity_id, sentence_index, surface))
            i += width
    return found


def oracle_pmi_relations(documents, lexicon):
    """All co-occurrence relations, O(pairs x sentences): returns
    {(a, b): (confidence, edge_weight, evidence)}."""
    sentence_entities = {}
    for doc in documents:
        mentions = oracle_find_mentions(doc, lexicon)
        for entity_id, sentence_index, _ in mentions:
            sentence_entities.setdefault((doc.doc_id, sentence_index), set()).add(entity_id)
    total = sum(len(oracle_doc_sentences(doc)) for doc in documents)

    entity_ids = sorted(e.entity_id for e in lexicon)
    out = {}
    for ai, a in enumerate(entity_ids):
        for b in entity_ids[ai + 1:]:
            sents_a = {s for s, ents in sentence_entities.items() if a in ents}
            sents_b = {s for s, ents in sentence_entities.items() if b in ents}
            joint = sents_a & sents_b
            if not joint:
                continue
            confidence = max(0.0, math.log(len(joint) * total / (len(sents_a) * len(sents_b))))
            out[(a, b)] = (confidence, math.log(1 + len(joint)), sorted(joint))
    return out


def dense_ppr(node_ids, weighted_edges, restart, damping=0.85, tol=1e-12,
              max_iter=1_000_000, restart_weights=None):
    """Dense power-iteration PageRank with restart, run to tight tolerance."""
    index = {node: i for i, node in enumerate(node_ids)}
    n = len(node_ids)
    W = np.zeros((n, n))
    for u, v, w in weighted_edges:
        W[index[u], index[v]] += w
        W[index[v], index[u]] += w
    e = np.zeros(n)
    if restart_weights:
        for node, w in restart_weights.items():
            e[index[node]] = w
        e /= e.sum()
    else:
        for node in restart:
            e[index[node]] = 1.0 / len(restart)
    deg = W.sum(axis=1)
    P = np.zeros((n, n))
    nz = deg > 0
    P[nz] = W[nz] / deg[nz, None]
    r = e.copy()
    for _ in range(max_iter):
        dangling = r[~nz].sum()
        nxt = (1 - damping) * e + damping * (P.T @ r + dangling * e)
        done = np.abs(nxt - r).sum() < tol
        r = nxt
        if done:
            break
    return {node: float(r[index[node]]) for node in node_ids}


def oracle_reachable(node_ids, weighted_edges, sources):
    """Nodes connected to any source in the undirected edge view."""
    adj = {node: set() for node in node_ids}
    for u, v, _ in weighted_edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = set(sources)
    stack = list(sources)
    while stack:
        node = stack.pop()
        for nbr in adj[node]:
            if nbr not in seen:
                seen.add(nbr)
                stack.append(nbr)
    return seen


def oracle_tfidf_vectors(texts):
    """{item: unit tf-idf vector} with idf = ln((1+N)/(1+df)) + 1 over
    case-folded tokens; items with no tokens get empty vectors."""
    token_lists = {item: [t.casefold() for t, _, _ in oracle_tokens(text)]
                   for item, text in texts.items()}
    nonempty = [item for item, tokens in token_lists.items() if tokens]
    n = len(nonempty)
    df = Counter()
    for item in nonempty:
        df.update(set(token_lists[item]))
    idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
    vectors = {}
    for item, tokens in token_lists.items():
        counts = Counter(tokens)
        vec = {t: c * idf[t] for t, c in counts.items()}
        norm = math.sqrt(sum(w * w for w in vec.values()))
        vectors[item] = {t: w / norm for t, w in vec.items()} if norm else {}
    return vectors, idf


def oracle_cosine(a, b):
    return sum(w * b.get(t, 0.0) for t, w in a.items())


def oracle_graph_edges(graph):
    """Recount weighted edges from the graph's raw tables (not its edge view):
    ln(1 + per-doc mention count) for doc-entity pairs plus relation weights."""
    counts = Counter()
    for mention in graph.mentions:
        counts[(mention.doc_id, mention.entity_id)] += 1
    edges = [(doc_id, entity_id, math.log(1 + c))
             for (doc_id, entity_id), c in counts.items()]
    edges += [(rel.subject_id, rel.object_id, rel.edge_weight)
              for rel in graph.relations.values()]
    return edges


def oracle_item_texts(graph):
    texts = {}
    for doc_id, doc in graph.documents.items():
        texts[doc_id] = f"{doc.title} {doc.body}" if doc.body else doc.title
    for entity_id, entry in graph.entities.items():
        parts = [entry.canonical_name, *entry.synonyms]
        if entry.summary:
            parts.append(entry.summary)
        texts[entity_id] = " ".join(parts)
    return texts


def oracle_rank(graph, landmarks, starred, query, kind, *, text_weight=0.5,
                alpha=1.0, beta=0.75, damping=0.85, top_k=20):
    """Full naive re-scoring: tf-idf + Rocchio centroid + dense PageRank +
    min-max + fusion, sorted by (-score, id). Returns (id, score) pairs."""
    texts = oracle_item_texts(graph)
    vectors, idf = oracle_tfidf_vectors(texts)

    q_counts = Counter(t.casefold() for t, _, _ in oracle_tokens(query))
    q_vec = {t: c * idf[t] for t, c in q_counts.items() if t in idf}
    q_norm = math.sqrt(sum(w * w for w in q_vec.values()))
    q_vec = {t: w / q_norm for t, w in q_vec.items()} if q_norm else {}

    combined = {t: alpha * w for t, w in q_vec.items()}
    positives = [vectors[i] for i in list(starred) + list(landmarks)]
    if positives:
        scale = beta / len(positives)
        for p in positives:
            for t, w in p.items():
                combined[t] = combined.get(t, 0.0) + scale * w
    norm = math.sqrt(sum(w * w for w in combined.values()))
    centroid = {t: w / norm for t, w in combined.items()} if norm else {}

    members = set(landmarks) | set(starred)
    if kind == "entity":
        candidates = [e for e in graph.entities if e not in members]
    else:
        candidates = [d for d, doc in graph.documents.items()
                      if doc.kind == kind and d not in members]

    text_sims = {c: oracle_cosine(centroid, vectors[c]) for c in candidates}
    if members:
        ppr = dense_ppr(graph.node_ids(), oracle_graph_edges(graph),
                        list(landmarks) + list(starred), damping=damping)
        vals = [ppr[c] for c in candidates]
        low, high = min(vals), max(vals)
        prox = ({c: 0.0 for c in candidates} if high == low
                else {c: (ppr[c] - low) / (high - low) for c in candidates})
        scored = [(c, text_weight * text_sims[c] + (1 - text_weight) * prox[c])
                  for c in candidates]
    else:
        scored = [(c, text_sims[c]) for c in candidates]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:top_k]


def oracle_precision_recall(ranked_ids, relevant, k, starred_relevant=0):
    """precision@k and recall@k with already-starred relevant items counted
    as recalled."""
    hits = sum(1 for item in ranked_ids[:k] if item in relevant)
    return hits / k, (starred_relevant + hits) / len(relevant)
