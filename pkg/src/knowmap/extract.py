"""Text extraction: sentence splitting, tokenization, dictionary-based
mention finding, and sentence-level co-occurrence relations scored with
pointwise mutual information.

All operations are pure and deterministic. The document title is treated
as sentence index 0; body sentences follow from index 1. Character spans
for sentence 0 index into the title string, all other spans index into the
body.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .corpus import DocumentRecord, LexiconEntry

_TERMINATORS = ".!?"

# Synonyms shorter than this many characters match case-sensitively, which
# keeps short acronyms like CRP from firing on ordinary words.
CASE_SENSITIVE_BELOW = 4

COOCCURRENCE_PREDICATE = "cooccurs_with"
COOCCURRENCE_SOURCE = "cooccurrence"


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Mention:
    """A lexicon entity matched in a document, with exact provenance."""

    entity_id: str
    doc_id: str
    sentence_index: int
    char_start: int
    char_end: int
    surface: str


@dataclass
class Relation:
    """An undirected edge between two entities, in canonical order
    (subject_id < object_id).

    Co-occurrence relations carry positive PMI as confidence, ln(1 + joint
    sentence count) as edge weight, and one (doc_id, sentence_index) pair
    per co-occurring sentence as evidence. Curated relations carry the
    source confidence and empty evidence.
    """

    subject_id: str
    object_id: str
    kind: str  # "cooccurrence" | "curated"
    predicate: str
    confidence: float
    edge_weight: float
    evidence: list[tuple[str, int]]
    source: str


def _is_token_char(ch: str) -> bool:
    # Tokens are maximal runs of letters, digits, apostrophes and hyphens,
    # so gene symbols like IL-6 survive as single tokens.
    return ch.isalnum() or ch == "'" or ch == "-"


def tokenize(text: str) -> list[Token]:
    """Split text into tokens with character spans."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        if _is_token_char(text[i]):
            j = i + 1
            while j < n and _is_token_char(text[j]):
                j += 1
            tokens.append(Token(text[i:j], i, j))
            i = j
        else:
            i += 1
    return tokens


def split_sentences(body: str, doc_id: str = "") -> list[Sentence]:
    """Split at '.', '!' or '?' followed by whitespace and then an uppercase
    letter or digit. Trailing text forms a final sentence; spans are trimmed
    of surrounding whitespace."""
    spans: list[tuple[int, int]] = []
    start = 0
    i, n = 0, len(body)
    while i < n:
        if body[i] in _TERMINATORS:
            j = i + 1
            while j < n and body[j].isspace():
                j += 1
            if j > i + 1 and j < n and (body[j].isupper() or body[j].isdigit()):
                spans.append((start, i + 1))
                start = j
                i = j
                continue
        i += 1
    if start < n:
        spans.append((start, n))

    sentences: list[Sentence] = []
    for s, e in spans:
        while s < e and body[s].isspace():
            s += 1
        while e > s and body[e - 1].isspace():
            e -= 1
        if s < e:
            sentences.append(Sentence(doc_id, len(sentences), s, e))
    return sentences


def document_sentences(doc: DocumentRecord) -> list[Sentence]:
    """All sentences of a document: the title as sentence 0, then body
    sentences from index 1."""
    title = doc.title
    ts, te = 0, len(title)
    while ts < te and title[ts].isspace():
        ts += 1
    while te > ts and title[te - 1].isspace():
        te -= 1
    sentences = [Sentence(doc.doc_id, 0, ts, te)]
    for sent in split_sentences(doc.body, doc.doc_id):
        sentences.append(Sentence(doc.doc_id, sent.index + 1, sent.char_start, sent.char_end))
    return sentences


def sentence_text(doc: DocumentRecord, sentence: Sentence) -> str:
    source = doc.title if sentence.index == 0 else doc.body
    return source[sentence.char_start:sentence.char_end]


def _phrase_key(token_texts: Iterable[str]) -> str:
    # Hyphens are dropped from every token before comparison, so "IL-6"
    # and "IL6" normalize identically.
    return " ".join(t.replace("-", "") for t in token_texts)


class SynonymMatcher:
    """Dictionary matcher over normalized token sequences.

    Synonyms of at least CASE_SENSITIVE_BELOW characters are matched
    case-insensitively; shorter ones must match exactly. When several
    entities share a normalized synonym the lexicographically smallest
    entity id wins, which keeps matching deterministic.
    """

    def __init__(self, lexicon: Sequence[LexiconEntry]):
        self._folded: dict[str, str] = {}
        self._exact: dict[str, str] = {}
        self.max_tokens = 1
        for entry in lexicon:
            for synonym in entry.synonyms:
                token_texts = [t.text for t in tokenize(synonym)]
                key = _phrase_key(token_texts)
                if not key.strip():
                    continue
                if len(synonym) >= CASE_SENSITIVE_BELOW:
                    table, k = self._folded, key.casefold()
                else:
                    table, k = self._exact, key
                if k not in table or entry.entity_id < table[k]:
                    table[k] = entry.entity_id
                self.max_tokens = max(self.max_tokens, len(token_texts))

    def _lookup(self, key: str) -> str | None:
        exact = self._exact.get(key)
        folded = self._folded.get(key.casefold())
        if exact is not None and folded is not None:
            return min(exact, folded)
        return exact if exact is not None else folded

    def find_in_text(self, text: str, doc_id: str, sentence_index: int,
                     offset: int = 0) -> list[Mention]:
        """Leftmost-longest non-overlapping matching over token sequences."""
        tokens = tokenize(text)
        mentions: list[Mention] = []
        i = 0
        while i < len(tokens):
            found: tuple[int, str] | None = None
            for width in range(min(self.max_tokens, len(tokens) - i), 0, -1):
                window = tokens[i:i + width]
                entity_id = self._lookup(_phrase_key(t.text for t in window))
                if entity_id is not None:
                    found = (width, entity_id)
                    break
            if found is None:
                i += 1
                continue
            width, entity_id = found
            first, last = tokens[i], tokens[i + width - 1]
            mentions.append(Mention(
                entity_id=entity_id,
                doc_id=doc_id,
                sentence_index=sentence_index,
                char_start=offset + first.start,
                char_end=offset + last.end,
                surface=text[first.start:last.end],
            ))
            i += width
        return mentions


def find_mentions(doc: DocumentRecord,
                  lexicon: Sequence[LexiconEntry] | SynonymMatcher) -> list[Mention]:
    """Find all lexicon mentions in a document, title included."""
    matcher = lexicon if isinstance(lexicon, SynonymMatcher) else SynonymMatcher(lexicon)
    mentions: list[Mention] = []
    for sentence in document_sentences(doc):
        source = doc.title if sentence.index == 0 else doc.body
        text = source[sentence.char_start:sentence.char_end]
        mentions.extend(matcher.find_in_text(
            text, doc.doc_id, sentence.index, offset=sentence.char_start))
    return mentions


def extract_cooccurrence_relations(all_mentions: Iterable[Mention],
                                   sentence_count: int) -> list[Relation]:
    """Build one relation per unordered entity pair that shares a sentence.

    confidence = max(0, ln(c(a,b) * D / (c(a) * c(b)))) where c(x) counts
    sentences containing x and D is the corpus sentence count;
    edge_weight = ln(1 + c(a,b)). A relation is emitted even when the PMI
    clamps to zero.
    """
    sentence_entities: dict[tuple[str, int], set[str]] = defaultdict(set)
    for mention in all_mentions:
        sentence_entities[(mention.doc_id, mention.sentence_index)].add(mention.entity_id)

    entity_sentences: dict[str, set[tuple[str, int]]] = defaultdict(set)
    pair_sentences: dict[tuple[str, str], set[tuple[str, int]]] = defaultdict(set)
    for sentence, entities in sentence_entities.items():
        for entity_id in entities:
            entity_sentences[entity_id].add(sentence)
        for a, b in combinations(sorted(entities), 2):
            pair_sentences[(a, b)].add(sentence)

    relations: list[Relation] = []
    for (a, b) in sorted(pair_sentences):
        joint = len(pair_sentences[(a, b)])
        ca = len(entity_sentences[a])
        cb = len(entity_sentences[b])
        confidence = max(0.0, math.log(joint * sentence_count / (ca * cb)))
        relations.append(Relation(
            subject_id=a,
            object_id=b,
            kind="cooccurrence",
            predicate=COOCCURRENCE_PREDICATE,
            confidence=confidence,
            edge_weight=math.log(1 + joint),
            evidence=sorted(pair_sentences[(a, b)]),
            source=COOCCURRENCE_SOURCE,
        ))
    return relations
