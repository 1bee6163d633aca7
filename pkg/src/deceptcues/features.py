"""The fifteen linguistic cue values computed per review."""

from __future__ import annotations

import csv
import io
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus, Label, atomic_write_text
from .lingpipe import AnalyzedDoc, Lexicons, Tag, analyze

log = logging.getLogger(__name__)

FEATURE_NAMES = (
    "n_words",
    "n_verbs",
    "n_adjectives",
    "n_modal_verbs",
    "n_passive_voice",
    "n_clauses",
    "n_typos",
    "avg_sentence_length",
    "avg_word_length",
    "avg_np_length",
    "pausality",
    "emotiveness",
    "lexical_diversity",
    "content_diversity",
    "redundancy",
)

# Features that are zero for most reviews.
SPARSE_FEATURES = ("n_typos", "n_passive_voice", "n_modal_verbs")

CONTENT_TAGS = frozenset({Tag.NOUN, Tag.VERB, Tag.ADJ, Tag.ADV})
VERB_TAGS = frozenset({Tag.VERB, Tag.AUX})


def _ratio(num: float, den: float, what: str) -> float:
    if den == 0:
        log.warning("%s: zero denominator, using 0", what)
        return 0.0
    return num / den


def emotiveness(doc: AnalyzedDoc) -> float:
    """(adjectives + adverbs) / (nouns + verbs); 0 when there are no nouns or verbs.

    Auxiliaries count as verbs.
    """
    tags = [t.pos for t in doc.tokens]
    modifiers = sum(t in (Tag.ADJ, Tag.ADV) for t in tags)
    heads = sum(t is Tag.NOUN or t in VERB_TAGS for t in tags)
    return modifiers / heads if heads else 0.0


def diversity_measures(doc: AnalyzedDoc) -> tuple[float, float, float]:
    """Return (lexical diversity, content-word diversity, redundancy)."""
    words = doc.words
    if not words:
        raise ValueError("empty document")
    lexical = len({w.lower for w in words}) / len(words)
    content = [w.lower for w in words if w.pos in CONTENT_TAGS and not w.is_function_word]
    content_div = len(set(content)) / len(content) if content else 0.0
    redundancy = sum(w.is_function_word for w in words) / len(words)
    return lexical, content_div, redundancy


def pausality(doc: AnalyzedDoc) -> float:
    """Punctuation marks per sentence."""
    if not doc.sentences:
        raise ValueError("document has no sentences")
    return doc.punctuation_count / len(doc.sentences)


def extract(doc: AnalyzedDoc, typo_ratio: bool = False) -> np.ndarray:
    """Compute the cue vector of ``doc`` in :data:`FEATURE_NAMES` order.

    With ``typo_ratio`` the ``n_typos`` slot holds typos per word instead of
    the raw count. Documents without words get zeros for all word-based cues.
    """
    words = doc.words
    n_words = len(words)
    n_sent = len(doc.sentences)
    tags = [w.pos for w in words]
    chunks = [(s, e) for sent in doc.sentences for s, e in sent.np_chunks]
    if n_words:
        lexical, content_div, redundancy = diversity_measures(doc)
    else:
        log.warning("document without words; diversity measures set to 0")
        lexical = content_div = redundancy = 0.0
    typos = float(doc.typo_count)
    if typo_ratio:
        typos = _ratio(typos, n_words, "typo ratio")
    values = [
        n_words,
        sum(t in VERB_TAGS for t in tags),
        sum(t is Tag.ADJ for t in tags),
        sum(t is Tag.MODAL for t in tags),
        sum(s.passive_count for s in doc.sentences),
        sum(s.clause_count for s in doc.sentences),
        typos,
        _ratio(n_words, n_sent, "avg_sentence_length"),
        _ratio(sum(w.char_len for w in words), n_words, "avg_word_length"),
        _ratio(sum(e - s for s, e in chunks), len(chunks), "avg_np_length"),
        _ratio(doc.punctuation_count, n_sent, "pausality"),
        emotiveness(doc),
        lexical,
        content_div,
        redundancy,
    ]
    return np.asarray(values, dtype=float)


@dataclass
class FeatureMatrix:
    ids: list[str]
    X: np.ndarray
    labels: list[Label]
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float).reshape(len(self.ids), len(self.feature_names))
        if len(self.labels) != len(self.ids):
            raise ValueError("ids and labels differ in length")

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def y(self) -> np.ndarray:
        """Binary targets, 1 = fake (the positive class)."""
        return np.array([lab is Label.FAKE for lab in self.labels], dtype=np.int64)

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.feature_names.index(name)]

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        idx = [self.feature_names.index(n) for n in names]
        return FeatureMatrix(list(self.ids), self.X[:, idx], list(self.labels), tuple(names))


def extract_corpus(corpus: Corpus, lexicons: Lexicons | None = None, typo_ratio: bool = False) -> FeatureMatrix:
    rows = [extract(analyze(r.text, lexicons), typo_ratio=typo_ratio) for r in corpus]
    X = np.vstack(rows) if rows else np.empty((0, len(FEATURE_NAMES)))
    return FeatureMatrix([r.id for r in corpus], X, [r.label for r in corpus])


def dumps_features(m: FeatureMatrix) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("id", "label") + tuple(m.feature_names))
    for rid, lab, row in zip(m.ids, m.labels, m.X):
        w.writerow([rid, lab.value] + [f"{v:.6f}" for v in row])
    return buf.getvalue()


def save_features(m: FeatureMatrix, path: str | os.PathLike) -> None:
    atomic_write_text(path, dumps_features(m))


def load_features(path: str | os.PathLike) -> FeatureMatrix:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty features file") from None
        if header[:2] != ["id", "label"] or len(header) < 3:
            raise ValueError(f"{path}: line 1: expected header starting with id,label")
        names = tuple(header[2:])
        ids, labels, rows = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}")
            ids.append(row[0])
            labels.append(Label.parse(row[1]))
            try:
                rows.append([float(v) for v in row[2:]])
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    X = np.asarray(rows, dtype=float) if rows else np.empty((0, len(names)))
    return FeatureMatrix(ids, X, labels, names)
