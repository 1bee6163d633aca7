"""Tokenization and sentence segmentation.

Tokens are words (letters with internal hyphens/apostrophes), numbers
(digits, optionally followed by letters as in ``2nd`` or ``5pm``), or runs of
punctuation. English clitics are split off in Penn Treebank style:
``don't`` -> ``do n't``, ``can't`` -> ``ca n't``, ``it's`` -> ``it 's``.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple

APOSTROPHES = "'’"
TERMINATORS = frozenset(".!?")
_CLITICS = ("n't", "'s", "'m", "'re", "'ve", "'ll", "'d")

_WORD = r"[^\W\d_]+(?:[-'’][^\W\d_]+)*"
_NUMBER = r"\d+(?:[.,:/]\d+)*[^\W\d_]*"
_INITIALISM = r"(?:[^\W\d_]\.){2,}"
_PUNCT = r"[^\w\s]+"


class RawToken(NamedTuple):
    surface: str
    start: int
    end: int


def is_punct(surface: str) -> bool:
    return not any(ch.isalnum() for ch in surface)


def _build_pattern(abbreviations: Iterable[str]) -> re.Pattern:
    abbr = "|".join(sorted((re.escape(a) for a in abbreviations), key=len, reverse=True))
    parts = [_INITIALISM]
    if abbr:
        parts.append(rf"(?i:(?:{abbr})\.)(?!\.)")
    parts += [_WORD, _NUMBER, _PUNCT, r"\S"]
    return re.compile("|".join(f"(?:{p})" for p in parts))


_PATTERNS: dict[frozenset, re.Pattern] = {}


def _pattern(abbreviations: frozenset[str]) -> re.Pattern:
    pat = _PATTERNS.get(abbreviations)
    if pat is None:
        pat = _PATTERNS[abbreviations] = _build_pattern(abbreviations)
    return pat


def _split_clitic(surface: str, start: int) -> list[RawToken]:
    norm = surface.lower().replace("’", "'")
    if norm == "cannot":
        return [RawToken(surface[:3], start, start + 3), RawToken(surface[3:], start + 3, start + 6)]
    for clitic in _CLITICS:
        if norm.endswith(clitic) and len(norm) > len(clitic):
            cut = len(surface) - len(clitic)
            return [RawToken(surface[:cut], start, start + cut),
                    RawToken(surface[cut:], start + cut, start + len(surface))]
    return [RawToken(surface, start, start + len(surface))]


def tokenize(text: str, abbreviations: frozenset[str] = frozenset()) -> list[RawToken]:
    tokens: list[RawToken] = []
    for m in _pattern(abbreviations).finditer(text):
        surface = m.group()
        if (any(a in surface for a in APOSTROPHES) and not is_punct(surface)) or surface.lower() == "cannot":
            tokens.extend(_split_clitic(surface, m.start()))
        else:
            tokens.append(RawToken(surface, m.start(), m.end()))
    return tokens


def split_sentences(text: str, tokens: list[RawToken]) -> list[list[RawToken]]:
    """Group tokens into sentences.

    A punctuation token containing ``.``, ``!`` or ``?`` closes a sentence when
    it is the last token, or when whitespace and then a capitalised token
    follow it. Abbreviation periods are absorbed into word tokens by
    :func:`tokenize` and therefore never close a sentence.
    """
    sentences: list[list[RawToken]] = []
    current: list[RawToken] = []
    for i, tok in enumerate(tokens):
        current.append(tok)
        if not (is_punct(tok.surface) and TERMINATORS.intersection(tok.surface)):
            continue
        if i + 1 == len(tokens):
            break
        nxt = tokens[i + 1]
        gap = text[tok.end:nxt.start]
        if gap and gap.isspace() and nxt.surface[0].isupper():
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences
