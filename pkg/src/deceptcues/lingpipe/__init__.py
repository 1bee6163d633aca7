"""Rule- and lexicon-based linguistic analysis of review texts."""

from .analyzer import (
    AnalyzedDoc,
    Sentence,
    Token,
    analyze,
    chunk_noun_phrases,
    chunk_tags,
    count_clauses,
    count_typos,
    detect_passive,
    is_typo,
)
from .lexicon import (
    LexiconError,
    Lexicons,
    default_lexicons,
    load_allowlist,
    load_dictionary,
    load_lexicons,
    read_wordlist,
)
from .tagger import Tag, tag_pos
from .tokenize import split_sentences, tokenize

__all__ = [
    "AnalyzedDoc",
    "LexiconError",
    "Lexicons",
    "Sentence",
    "Tag",
    "Token",
    "analyze",
    "chunk_noun_phrases",
    "chunk_tags",
    "count_clauses",
    "count_typos",
    "default_lexicons",
    "detect_passive",
    "is_typo",
    "load_allowlist",
    "load_dictionary",
    "load_lexicons",
    "read_wordlist",
    "split_sentences",
    "tag_pos",
    "tokenize",
]
