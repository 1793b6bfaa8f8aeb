import pytest

from knowmap.corpus import (load_curated_relations, load_documents, load_lexicon)
from knowmap.errors import CorpusFormatError


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadDocuments:
    def test_file_order_and_fields(self, usecase_inputs):
        docs = load_documents(usecase_inputs["docs"])
        assert docs[0].doc_id == "pmid:33559975"
        assert docs[0].kind == "publication"
        assert docs[0].title.startswith("COVID-19 and dementia")
        assert docs[0].authors == ["QuanQiu Wang", "Pamela B Davis", "Mark E Gurney"]
        assert len(docs) == 31

    def test_empty_file(self, tmp_path):
        assert load_documents(write(tmp_path, "d.jsonl", "")) == []

    def test_duplicate_doc_id_names_line(self, tmp_path):
        path = write(tmp_path, "d.jsonl", "\n".join([
            '{"doc_id": "pmid:1", "kind": "publication", "title": "A"}',
            '{"doc_id": "pmid:1", "kind": "publication", "title": "B"}',
        ]))
        with pytest.raises(CorpusFormatError, match=r"line 2.*pmid:1"):
            load_documents(path)

    def test_malformed_line_names_line(self, tmp_path):
        path = write(tmp_path, "d.jsonl", "\n".join([
            '{"doc_id": "pmid:1", "kind": "publication", "title": "A"}',
            "{not json",
        ]))
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_documents(path)

    def test_unknown_fields_ignored(self, tmp_path):
        path = write(tmp_path, "d.jsonl",
                     '{"doc_id": "pmid:1", "kind": "publication", "title": "A", "planet": 9}\n')
        [doc] = load_documents(path)
        assert doc.doc_id == "pmid:1"

    def test_missing_title_rejected(self, tmp_path):
        path = write(tmp_path, "d.jsonl", '{"doc_id": "pmid:1", "kind": "publication"}\n')
        with pytest.raises(CorpusFormatError, match="title"):
            load_documents(path)

    def test_empty_title_rejected(self, tmp_path):
        path = write(tmp_path, "d.jsonl",
                     '{"doc_id": "pmid:1", "kind": "publication", "title": ""}\n')
        with pytest.raises(CorpusFormatError, match="title"):
            load_documents(path)

    def test_trial_requires_matching_nct(self, tmp_path):
        path = write(tmp_path, "d.jsonl",
                     '{"doc_id": "nct:NCT1", "kind": "clinical_trial", "title": "T"}\n')
        with pytest.raises(CorpusFormatError, match="nct"):
            load_documents(path)
        ok = write(tmp_path, "ok.jsonl",
                   '{"doc_id": "nct:NCT1", "kind": "clinical_trial", "title": "T", '
                   '"metadata": {"nct": ["NCT1"]}}\n')
        [doc] = load_documents(ok)
        assert doc.metadata["nct"] == ["NCT1"]

    def test_unknown_kind_rejected(self, tmp_path):
        path = write(tmp_path, "d.jsonl", '{"doc_id": "p:1", "kind": "patent", "title": "T"}\n')
        with pytest.raises(CorpusFormatError, match="kind"):
            load_documents(path)


class TestLoadLexicon:
    def test_synonyms_include_canonical(self, tmp_path):
        path = write(tmp_path, "lex.tsv",
                     "gene:il6\tgene\tIL-6\tIL6|interleukin-6\tcytokine\tfixture\n")
        [entry] = load_lexicon(path)
        assert set(entry.synonyms) == {"IL-6", "IL6", "interleukin-6"}

    def test_canonical_appended_when_missing(self, tmp_path):
        path = write(tmp_path, "lex.tsv", "gene:x\tgene\tXY-1\tother name\t\tsrc\n")
        [entry] = load_lexicon(path)
        assert entry.synonyms == ["other name", "XY-1"]

    def test_unknown_entity_type(self, tmp_path):
        path = write(tmp_path, "lex.tsv", "p:x\tplanet\tX\tX\t\tsrc\n")
        with pytest.raises(CorpusFormatError, match="planet"):
            load_lexicon(path)

    def test_duplicate_entity_id(self, tmp_path):
        path = write(tmp_path, "lex.tsv",
                     "gene:x\tgene\tX\tX\t\tsrc\ngene:x\tgene\tY\tY\t\tsrc\n")
        with pytest.raises(CorpusFormatError, match=r"line 2.*gene:x"):
            load_lexicon(path)

    def test_malformed_row(self, tmp_path):
        path = write(tmp_path, "lex.tsv", "gene:x\tgene\tX\n")
        with pytest.raises(CorpusFormatError, match="6"):
            load_lexicon(path)


class TestLoadCuratedRelations:
    def test_loads_fixture(self, usecase_inputs):
        records = load_curated_relations(usecase_inputs["relations"])
        assert len(records) == 5
        assert records[0].subject_id == "gene:crp"
        assert records[0].confidence == 0.9

    def test_self_relation_rejected(self, tmp_path):
        path = write(tmp_path, "rel.tsv", "gene:x\tgene:x\trel\t0.5\tsrc\n")
        with pytest.raises(CorpusFormatError, match="differ"):
            load_curated_relations(path)

    def test_confidence_range(self, tmp_path):
        path = write(tmp_path, "rel.tsv", "gene:x\tgene:y\trel\t1.5\tsrc\n")
        with pytest.raises(CorpusFormatError, match="confidence"):
            load_curated_relations(path)

    def test_non_numeric_confidence(self, tmp_path):
        path = write(tmp_path, "rel.tsv", "gene:x\tgene:y\trel\thigh\tsrc\n")
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_curated_relations(path)
