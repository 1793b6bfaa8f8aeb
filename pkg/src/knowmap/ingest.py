"""Ingestion pipeline: load documents and structured tables, run mention
and relation extraction, assemble the graph, persist it."""

from __future__ import annotations

from pathlib import Path

from .corpus import (CuratedRelationRecord, DocumentRecord, LexiconEntry,
                     load_curated_relations, load_documents, load_lexicon)
from .extract import (SynonymMatcher, document_sentences,
                      extract_cooccurrence_relations, find_mentions)
from .graph import KnowledgeGraph, assemble_graph, merge_curated_relations, save_graph


def build_graph(documents: list[DocumentRecord], lexicon: list[LexiconEntry],
                curated: list[CuratedRelationRecord] | None = None) -> KnowledgeGraph:
    """Run extraction over an in-memory corpus and assemble the graph.

    Deterministic for fixed inputs: per-document extraction order follows
    the document list, and corpus-level aggregation sorts canonically.
    """
    matcher = SynonymMatcher(lexicon)
    mentions = []
    sentence_count = 0
    for doc in documents:
        sentence_count += len(document_sentences(doc))
        mentions.extend(find_mentions(doc, matcher))
    relations = extract_cooccurrence_relations(mentions, sentence_count)
    relations = merge_curated_relations(
        relations, curated or [], (entry.entity_id for entry in lexicon))
    return assemble_graph(lexicon, documents, mentions, relations)


def ingest_corpus(docs_path: str | Path, lexicon_path: str | Path,
                  relations_path: str | Path | None = None,
                  out_dir: str | Path = "graph") -> KnowledgeGraph:
    """Load a corpus from disk, build the graph, and persist it to out_dir."""
    documents = load_documents(docs_path)
    lexicon = load_lexicon(lexicon_path)
    curated = load_curated_relations(relations_path) if relations_path else []
    graph = build_graph(documents, lexicon, curated)
    save_graph(graph, out_dir)
    return graph
