"""Lexicon-first part-of-speech tagger over a coarse tag set.

Tagging runs in two passes. The lexical pass assigns each token a tag from
closed-class overrides, the Penn-tagged lexicon (mapped to coarse tags) or
suffix rules, falling back to OTHER. The contextual pass then resolves
auxiliaries, the ``'s`` clitic, and nouns sitting in a verb slot.
"""

from __future__ import annotations

import enum
import re
from typing import Sequence

from .lexicon import Lexicons, default_lexicons
from .tokenize import is_punct


class Tag(str, enum.Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    AUX = "AUX"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    DET = "DET"
    ADP = "ADP"
    CONJ = "CONJ"
    NUM = "NUM"
    PART = "PART"
    PUNCT = "PUNCT"
    MODAL = "MODAL"
    OTHER = "OTHER"


PENN_TO_COARSE = {
    "NN": Tag.NOUN, "NNS": Tag.NOUN, "NNP": Tag.NOUN, "NNPS": Tag.NOUN, "NP": Tag.NOUN,
    "VB": Tag.VERB, "VBD": Tag.VERB, "VBG": Tag.VERB, "VBN": Tag.VERB, "VBP": Tag.VERB, "VBZ": Tag.VERB,
    "MD": Tag.MODAL,
    "JJ": Tag.ADJ, "JJR": Tag.ADJ, "JJS": Tag.ADJ,
    "RB": Tag.ADV, "RBR": Tag.ADV, "RBS": Tag.ADV, "WRB": Tag.ADV,
    "PRP": Tag.PRON, "PRP$": Tag.PRON, "PP": Tag.PRON, "WP": Tag.PRON, "WP$": Tag.PRON, "EX": Tag.PRON,
    "DT": Tag.DET, "PDT": Tag.DET, "WDT": Tag.DET,
    "IN": Tag.ADP,
    "CC": Tag.CONJ,
    "CD": Tag.NUM,
    "RP": Tag.PART, "TO": Tag.PART, "POS": Tag.PART,
}

MODALS = frozenset({"can", "could", "may", "might", "must", "shall", "should", "will", "would"})
# clitic and PTB-split forms of the modals
MODAL_FORMS = MODALS | {"ca", "wo", "sha", "'ll", "'d"}
BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been", "being", "'m", "'re"})
HAVE_FORMS = frozenset({"have", "has", "had", "having", "'ve"})
DO_FORMS = frozenset({"do", "does", "did"})
NEGATIONS = frozenset({"not", "n't", "never"})
SUBJECT_PRONOUNS = frozenset({"i", "we", "you", "they", "he", "she"})
S_CLITIC_HOSTS = frozenset({"it", "he", "she", "that", "there", "here", "what", "who", "where", "this", "everything"})

_NUMBER_RE = re.compile(r"^\d")

# (suffix, tag) checked in order for words missing from the lexicon
SUFFIX_RULES: tuple[tuple[str, Tag], ...] = (
    ("ly", Tag.ADV),
    ("ing", Tag.VERB),
    ("ed", Tag.VERB),
    ("ous", Tag.ADJ),
    ("ful", Tag.ADJ),
    ("able", Tag.ADJ),
    ("ible", Tag.ADJ),
    ("ive", Tag.ADJ),
    ("less", Tag.ADJ),
    ("ical", Tag.ADJ),
    ("ic", Tag.ADJ),
    ("ish", Tag.ADJ),
    ("est", Tag.ADJ),
    ("tion", Tag.NOUN),
    ("sion", Tag.NOUN),
    ("ment", Tag.NOUN),
    ("ness", Tag.NOUN),
    ("ity", Tag.NOUN),
    ("ism", Tag.NOUN),
    ("ist", Tag.NOUN),
    ("ance", Tag.NOUN),
    ("ence", Tag.NOUN),
    ("ship", Tag.NOUN),
    ("hood", Tag.NOUN),
    ("er", Tag.NOUN),
    ("or", Tag.NOUN),
)


def normalize(surface: str) -> str:
    return surface.lower().replace("’", "'")


def lookup_penn(surface: str, lex: Lexicons, sentence_initial: bool = False) -> str | None:
    lower = normalize(surface)
    keys = (lower, surface) if sentence_initial else (surface, lower)
    for key in keys:
        tag = lex.pos.get(key)
        if tag is not None:
            return tag
    return None


def suffix_tag(lower: str) -> Tag | None:
    for suffix, tag in SUFFIX_RULES:
        if lower.endswith(suffix) and len(lower) > len(suffix) + 1:
            return tag
    return None


def lexical_tag(surface: str, lex: Lexicons, sentence_initial: bool = False) -> Tag:
    if is_punct(surface):
        return Tag.PUNCT
    lower = normalize(surface)
    if lower in MODAL_FORMS:
        return Tag.MODAL
    if lower in NEGATIONS - {"never"}:
        return Tag.PART
    if lower in BE_FORMS:
        return Tag.AUX
    if _NUMBER_RE.match(surface):
        return Tag.NUM
    penn = lookup_penn(surface, lex, sentence_initial)
    if penn is not None:
        return PENN_TO_COARSE.get(penn, Tag.OTHER)
    if "-" in lower:
        head = lower.rsplit("-", 1)[1]
        penn = lex.pos.get(head)
        tag = PENN_TO_COARSE.get(penn) if penn else suffix_tag(head)
        if tag is Tag.VERB:
            return Tag.ADJ
        if tag is not None:
            return tag
    if surface[:1].isupper() and not sentence_initial:
        return Tag.NOUN
    tag = suffix_tag(lower)
    return tag if tag is not None else Tag.OTHER


def _verbable(lower: str, lex: Lexicons) -> bool:
    """True when some inflection of ``lower`` is listed as a verb."""
    if lower == "like":
        return True
    for form in (lower + "ed", lower + "d", lower + "s", lower + "es"):
        penn = lex.pos.get(form)
        if penn is not None and penn.startswith("VB"):
            return True
    return False


def _next_content(tags: list[Tag], i: int, skip: frozenset, limit: int = 3) -> int | None:
    for j in range(i + 1, min(len(tags), i + 1 + limit)):
        if tags[j] not in skip:
            return j
    return None


def _prev_content(tags: list[Tag], i: int) -> int | None:
    for j in range(i - 1, -1, -1):
        if tags[j] is not Tag.ADV:
            return j
    return None


def contextual_pass(lowers: Sequence[str], tags: list[Tag], lex: Lexicons) -> list[Tag]:
    tags = list(tags)
    verbal_hosts = MODAL_FORMS | BE_FORMS | HAVE_FORMS | DO_FORMS
    for i, lower in enumerate(lowers):
        if tags[i] not in (Tag.NOUN, Tag.ADP, Tag.ADJ) or not _verbable(lower, lex):
            continue
        p = _prev_content(tags, i)
        if p is None:
            continue
        prev = lowers[p]
        if (prev in SUBJECT_PRONOUNS or tags[p] is Tag.MODAL or prev == "to"
                or (prev in NEGATIONS and p > 0 and lowers[p - 1] in verbal_hosts)):
            tags[i] = Tag.VERB
    for i, lower in enumerate(lowers):
        if lower == "'s":
            prev = lowers[i - 1] if i else ""
            tags[i] = Tag.AUX if prev in S_CLITIC_HOSTS else Tag.PART
        elif lower in HAVE_FORMS or lower in DO_FORMS:
            j = _next_content(tags, i, frozenset({Tag.ADV, Tag.PART, Tag.PRON}))
            tags[i] = Tag.AUX if j is not None and tags[j] in (Tag.VERB, Tag.AUX) else Tag.VERB
    return tags


def tag_pos(tokens: Sequence[str], lexicons: Lexicons | None = None) -> list[Tag]:
    """Tag one sentence worth of token surfaces; the first token is sentence-initial."""
    lex = lexicons or default_lexicons()
    tags = [lexical_tag(t, lex, sentence_initial=(i == 0)) for i, t in enumerate(tokens)]
    return contextual_pass([normalize(t) for t in tokens], tags, lex)
