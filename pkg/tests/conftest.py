import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures" / "usecase"

sys.path.insert(0, str(TESTS_DIR))

from knowmap.corpus import load_curated_relations, load_documents, load_lexicon
from knowmap.ingest import build_graph
from knowmap.ranking import build_text_index


@pytest.fixture(scope="session")
def usecase_inputs():
    return {
        "docs": FIXTURES / "documents.jsonl",
        "lexicon": FIXTURES / "lexicon.tsv",
        "relations": FIXTURES / "relations.tsv",
    }


@pytest.fixture(scope="session")
def usecase_corpus(usecase_inputs):
    documents = load_documents(usecase_inputs["docs"])
    lexicon = load_lexicon(usecase_inputs["lexicon"])
    curated = load_curated_relations(usecase_inputs["relations"])
    return documents, lexicon, curated


@pytest.fixture(scope="session")
def usecase_graph(usecase_corpus):
    documents, lexicon, curated = usecase_corpus
    return build_graph(documents, lexicon, curated)


@pytest.fixture(scope="session")
def usecase_index(usecase_graph):
    return build_text_index(usecase_graph)
