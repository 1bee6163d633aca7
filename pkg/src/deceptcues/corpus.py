"""Review corpora and the canonical CSV format.

Canonical CSV: UTF-8, RFC-4180 quoting, header ``id,text,label,sentiment,source``.
``label`` is ``fake`` or ``real``; ``sentiment`` is ``positive``, ``negative`` or blank.
Texts are stored verbatim; no cleaning happens here.
"""

from __future__ import annotations

import csv
import enum
import io
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

HEADER = ("id", "text", "label", "sentiment", "source")


class CorpusError(ValueError):
    """Raised for malformed corpus files or inconsistent corpus contents."""


class Label(str, enum.Enum):
    FAKE = "fake"
    REAL = "real"

    @classmethod
    def parse(cls, token: str) -> "Label":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise CorpusError(f"unknown label token {token!r}") from None


class Sentiment(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, token: str) -> "Sentiment | None":
        token = token.strip().lower()
        if not token:
            return None
        try:
            return cls(token)
        except ValueError:
            raise CorpusError(f"unknown sentiment token {token!r}") from None


@dataclass(frozen=True)
class Review:
    id: str
    text: str
    label: Label
    sentiment: Sentiment | None = None
    source: str | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise CorpusError(f"review {self.id!r} has empty text")
        if not isinstance(self.label, Label):
            raise CorpusError(f"review {self.id!r}: label must be a Label, got {self.label!r}")


@dataclass
class Corpus:
    reviews: list[Review] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for r in self.reviews:
            if r.id in seen:
                raise CorpusError(f"duplicate review id {r.id!r}")
            seen.add(r.id)

    def __len__(self) -> int:
        return len(self.reviews)

    def __iter__(self) -> Iterator[Review]:
        return iter(self.reviews)

    def __getitem__(self, i):
        return self.reviews[i]

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.reviews]


def class_balance(corpus: Corpus) -> dict[Label, int]:
    counts = {Label.FAKE: 0, Label.REAL: 0}
    for r in corpus:
        counts[r.label] += 1
    return counts


def _parse_rows(reader: Iterable[list[str]], origin: str) -> Corpus:
    rows = iter(reader)
    try:
        header = next(rows)
    except StopIteration:
        raise CorpusError(f"{origin}: missing header") from None
    header = [h.strip().lstrip("﻿") for h in header]
    if tuple(header) != HEADER:
        raise CorpusError(f"{origin}: line 1: expected header {','.join(HEADER)}, got {','.join(header)}")
    reviews = []
    seen = set()
    for lineno, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != len(HEADER):
            raise CorpusError(f"{origin}: line {lineno}: expected {len(HEADER)} fields, got {len(row)}")
        rid, text, label, sentiment, source = row
        if rid in seen:
            raise CorpusError(f"{origin}: line {lineno}: duplicate review id {rid!r}")
        seen.add(rid)
        try:
            reviews.append(
                Review(
                    id=rid,
                    text=text,
                    label=Label.parse(label),
                    sentiment=Sentiment.parse(sentiment),
                    source=source or None,
                )
            )
        except CorpusError as exc:
            raise CorpusError(f"{origin}: line {lineno}: {exc}") from None
    return Corpus(reviews)


def load_corpus(path: str | os.PathLike, format: str = "canonical-csv") -> Corpus:
    """Load a corpus file, preserving row order.

    Line numbers in error messages are physical CSV record numbers (header = 1);
    quoted multi-line texts count as one record.
    """
    if format != "canonical-csv":
        raise CorpusError(f"unsupported corpus format {format!r}")
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        try:
            return _parse_rows(csv.reader(fh, strict=True), str(path))
        except csv.Error as exc:
            raise CorpusError(f"{path}: malformed CSV: {exc}") from None


def loads_corpus(text: str) -> Corpus:
    try:
        return _parse_rows(csv.reader(io.StringIO(text, newline=""), strict=True), "<string>")
    except csv.Error as exc:
        raise CorpusError(f"<string>: malformed CSV: {exc}") from None


def dumps_corpus(corpus: Corpus) -> str:
    buf = io.StringIO(newline="")
    # CRLF records (RFC 4180); this also makes the writer quote bare CRs in texts
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(HEADER)
    for r in corpus:
        writer.writerow(
            [r.id, r.text, r.label.value, r.sentiment.value if r.sentiment else "", r.source or ""]
        )
    return buf.getvalue()


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_corpus(corpus: Corpus, path: str | os.PathLike) -> None:
    atomic_write_text(path, dumps_corpus(corpus))


# -- upstream conversion ------------------------------------------------------

_TEXT_COLUMNS = ("text", "review", "review_text", "reviews", "content", "body", "comment")
_LABEL_COLUMNS = ("label", "class", "type", "fake", "deceptive", "real/fake", "fake/real", "truthfulness")
_SENTIMENT_COLUMNS = ("sentiment", "polarity", "positive/negative")
_SOURCE_COLUMNS = ("source", "restaurant", "restaurant_name", "business", "hotel", "place")

FAKE_TOKENS = ("fake", "deceptive", "f", "spam", "false", "fraud")
REAL_TOKENS = ("real", "truthful", "genuine", "t", "r", "true", "legit", "legitimate", "trustworthy")
_POS_TOKENS = ("positive", "pos", "p", "+")
_NEG_TOKENS = ("negative", "neg", "n", "-")


def _pick_column(header: Sequence[str], explicit: str | None, candidates: Sequence[str], what: str,
                 required: bool) -> int | None:
    norm = [h.strip().lower() for h in header]
    if explicit is not None:
        if explicit.strip().lower() not in norm:
            raise CorpusError(f"{what} column {explicit!r} not found in header {list(header)}")
        return norm.index(explicit.strip().lower())
    for cand in candidates:
        if cand in norm:
            return norm.index(cand)
    if required:
        raise CorpusError(f"cannot identify the {what} column in header {list(header)}; pass it explicitly")
    return None


def _map_token(value: str, fake: Sequence[str], real: Sequence[str]) -> Label:
    v = value.strip().lower()
    if v in fake:
        return Label.FAKE
    if v in real:
        return Label.REAL
    raise CorpusError(f"unknown label token {value!r}")


def _map_sentiment(value: str) -> Sentiment | None:
    v = value.strip().lower()
    if not v:
        return None
    if v in _POS_TOKENS:
        return Sentiment.POSITIVE
    if v in _NEG_TOKENS:
        return Sentiment.NEGATIVE
    raise CorpusError(f"unknown sentiment token {value!r}")


def _read_table(path: Path) -> list[list[str]]:
    suffix = path.suffix.lower()
    if suffix in (".xlsx", ".xls"):
        try:
            import pandas as pd
        except ImportError:  # pragma: no cover - optional path
            raise CorpusError("reading spreadsheets needs pandas (and openpyxl)") from None
        frame = pd.read_excel(path, dtype=str).fillna("")
        return [list(frame.columns)] + frame.values.tolist()
    raw = path.read_text(encoding="utf-8-sig")
    dialect = csv.excel_tab if suffix == ".tsv" else csv.excel
    return [row for row in csv.reader(io.StringIO(raw, newline=""), dialect) if row]


def convert_table(
    path: str | os.PathLike,
    *,
    text_column: str | None = None,
    label_column: str | None = None,
    sentiment_column: str | None = None,
    source_column: str | None = None,
    fake_values: Sequence[str] = FAKE_TOKENS,
    real_values: Sequence[str] = REAL_TOKENS,
    id_prefix: str = "r",
) -> Corpus:
    """Convert a tabular upstream export (CSV/TSV/XLSX) into a Corpus.

    Columns are located by name; unknown layouts need explicit column names.
    Rows with blank text are skipped. Ids are assigned sequentially.
    """
    path = Path(path)
    rows = _read_table(path)
    if not rows:
        return Corpus([])
    header, body = rows[0], rows[1:]
    ti = _pick_column(header, text_column, _TEXT_COLUMNS, "text", True)
    li = _pick_column(header, label_column, _LABEL_COLUMNS, "label", True)
    si = _pick_column(header, sentiment_column, _SENTIMENT_COLUMNS, "sentiment", False)
    oi = _pick_column(header, source_column, _SOURCE_COLUMNS, "source", False)
    fake = tuple(v.lower() for v in fake_values)
    real = tuple(v.lower() for v in real_values)
    reviews = []
    for lineno, row in enumerate(body, start=2):
        row = list(row) + [""] * (len(header) - len(row))
        text = str(row[ti])
        if not text.strip():
            continue
        try:
            label = _map_token(str(row[li]), fake, real)
            sentiment = _map_sentiment(str(row[si])) if si is not None else None
        except CorpusError as exc:
            raise CorpusError(f"{path}: line {lineno}: {exc}") from None
        source = str(row[oi]).strip() or None if oi is not None else None
        reviews.append(Review(f"{id_prefix}{len(reviews) + 1:04d}", text.strip(), label, sentiment, source))
    return Corpus(reviews)


def convert_text_tree(root: str | os.PathLike, *, fake_values: Sequence[str] = FAKE_TOKENS,
                      real_values: Sequence[str] = REAL_TOKENS, id_prefix: str = "r") -> Corpus:
    """Convert a directory of one-review-per-file ``.txt`` documents.

    The label comes from the first path component (relative to ``root``) that
    names a class; sentiment likewise from a ``positive``/``negative`` component.
    Files are visited in sorted path order.
    """
    root = Path(root)
    fake = {v.lower() for v in fake_values if len(v) > 1}
    real = {v.lower() for v in real_values if len(v) > 1}
    reviews = []
    for f in sorted(root.rglob("*.txt")):
        parts = [p.lower() for p in f.relative_to(root).parts[:-1]]
        label = next((Label.FAKE if p in fake else Label.REAL for p in parts if p in fake or p in real), None)
        if label is None:
            continue
        sentiment = next(
            (Sentiment.POSITIVE if p in _POS_TOKENS else Sentiment.NEGATIVE
             for p in parts if p in ("positive", "negative")),
            None,
        )
        text = f.read_text(encoding="utf-8", errors="replace").strip()
        if text:
            reviews.append(Review(f"{id_prefix}{len(reviews) + 1:04d}", text, label, sentiment, None))
    return Corpus(reviews)


def convert_upstream(path: str | os.PathLike, **kwargs) -> Corpus:
    """Convert an upstream dataset checkout (file or directory) into a Corpus.

    A directory is searched for a single data table (csv/tsv/xlsx); if there
    is none, it is treated as a tree of per-review text files.
    """
    path = Path(path)
    if path.is_file():
        return convert_table(path, **kwargs)
    if not path.is_dir():
        raise CorpusError(f"{path}: no such file or directory")
    tables = sorted(
        p for p in path.rglob("*")
        if p.suffix.lower() in (".csv", ".tsv", ".xlsx", ".xls") and ".git" not in p.parts
    )
    if len(tables) == 1:
        return convert_table(tables[0], **kwargs)
    if len(tables) > 1:
        names = ", ".join(str(t.relative_to(path)) for t in tables)
        raise CorpusError(f"{path}: several data tables found ({names}); pass one file explicitly")
    tree_kwargs = {k: v for k, v in kwargs.items() if k in ("fake_values", "real_values", "id_prefix")}
    corpus = convert_text_tree(path, **tree_kwargs)
    if not len(corpus):
        raise CorpusError(f"{path}: found neither a data table nor labelled .txt files")
    return corpus
