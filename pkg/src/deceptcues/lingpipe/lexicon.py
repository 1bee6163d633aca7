"""Loading of the committed word lists used by the analyzer."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path


class LexiconError(OSError):
    """A lexicon, dictionary or allowlist file is missing or unreadable."""


def _data_path(name: str) -> Path:
    return Path(str(resources.files("deceptcues") / "data" / name))


def read_wordlist(path: str | os.PathLike) -> list[str]:
    """One token per line; blank lines and ``#`` comment lines are ignored."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot read word list {path}: {exc.strerror or exc}") from None
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return words


def read_tag_lexicon(path: str | os.PathLike) -> dict[str, str]:
    """``word<TAB>tag`` lines; the first entry for a word wins."""
    table: dict[str, str] = {}
    for line in read_wordlist(path):
        word, _, tag = line.partition("\t")
        if tag:
            table.setdefault(word, tag.strip())
    return table


def load_dictionary(path: str | os.PathLike | None = None) -> frozenset[str]:
    if path is None:
        return _default_dictionary()
    return frozenset(w.lower() for w in read_wordlist(path))


def load_allowlist(path: str | os.PathLike | None = None) -> frozenset[str]:
    if path is None:
        return _default_allowlist()
    return frozenset(w.lower() for w in read_wordlist(path))


@lru_cache(maxsize=None)
def _default_dictionary() -> frozenset[str]:
    return frozenset(w.lower() for w in read_wordlist(_data_path("dictionary.txt")))


@lru_cache(maxsize=None)
def _default_allowlist() -> frozenset[str]:
    return frozenset(w.lower() for w in read_wordlist(_data_path("allowlist.txt")))


@dataclass(frozen=True)
class Lexicons:
    pos: dict[str, str]
    function_words: frozenset[str]
    abbreviations: frozenset[str]
    participles: frozenset[str]
    dictionary: frozenset[str] = field(default_factory=frozenset)
    allowlist: frozenset[str] = field(default_factory=frozenset)

    def with_spelling(self, dictionary=None, allowlist=None) -> "Lexicons":
        return Lexicons(
            self.pos,
            self.function_words,
            self.abbreviations,
            self.participles,
            self.dictionary if dictionary is None else frozenset(dictionary),
            self.allowlist if allowlist is None else frozenset(allowlist),
        )


@lru_cache(maxsize=None)
def default_lexicons() -> Lexicons:
    return Lexicons(
        pos=read_tag_lexicon(_data_path("pos_lexicon.tsv")),
        function_words=frozenset(read_wordlist(_data_path("function_words.txt"))),
        abbreviations=frozenset(read_wordlist(_data_path("abbreviations.txt"))),
        participles=frozenset(read_wordlist(_data_path("irregular_participles.txt"))),
        dictionary=_default_dictionary(),
        allowlist=_default_allowlist(),
    )


def load_lexicons(dictionary: str | os.PathLike | None = None,
                  allowlist: str | os.PathLike | None = None) -> Lexicons:
    """Default lexicons with optionally replaced spelling resources."""
    return default_lexicons().with_spelling(load_dictionary(dictionary), load_allowlist(allowlist))
