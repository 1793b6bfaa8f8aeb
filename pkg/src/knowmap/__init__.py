"""knowmap: interactive knowledge mapping over a biomedical knowledge graph.

Build a graph from documents and structured tables, then iteratively rank
publications, trials and entities by conceptual proximity to a growing
knowledge map of landmark entities and starred documents.
"""

from .corpus import (CuratedRelationRecord, DocumentRecord, LexiconEntry,
                     load_curated_relations, load_documents, load_lexicon)
from .errors import (CorpusFormatError, IntegrityError, KnowmapError,
                     UnknownIdError, VersionError)
from .extract import (Mention, Relation, Sentence, extract_cooccurrence_relations,
                      find_mentions, split_sentences, tokenize)
from .graph import (KnowledgeGraph, WeightedEdge, assemble_graph, load_graph,
                    neighbors, save_graph)
from .ingest import build_graph, ingest_corpus
from .ranking import (RankedItem, RankingConfig, TextIndex, build_text_index,
                      personalized_pagerank, rank_items, rocchio_centroid)
from .session import (Card, KnowledgeMap, RankingSnapshot, add_landmark,
                      build_card, create_map, refresh, remove_landmark,
                      star_document, unstar_document)
from .simulate import (MetricsRow, MetricsTable, SyntheticCorpusSpec,
                       generate_corpus, run_simulations, simulate_session)

__version__ = "0.1.0"
