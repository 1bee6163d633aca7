"""Document analysis: tagged sentences with chunk, clause, passive and typo counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lexicon import Lexicons, default_lexicons
from .tagger import BE_FORMS, Tag, lookup_penn, normalize, tag_pos
from .tokenize import split_sentences, tokenize

VERBAL = frozenset({Tag.VERB, Tag.AUX, Tag.MODAL})
# tokens allowed inside a verb group without starting a new one
GROUP_GLUE = frozenset({Tag.ADV, Tag.PART})


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    pos: Tag
    is_function_word: bool
    char_len: int
    is_participle: bool = False


@dataclass
class Sentence:
    tokens: list[Token]
    np_chunks: list[tuple[int, int]] = field(default_factory=list)
    clause_count: int = 0
    passive_count: int = 0

    @property
    def tags(self) -> list[Tag]:
        return [t.pos for t in self.tokens]


@dataclass
class AnalyzedDoc:
    sentences: list[Sentence]
    typo_count: int = 0

    @property
    def tokens(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens]

    @property
    def words(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens if t.pos is not Tag.PUNCT]

    @property
    def word_count(self) -> int:
        return sum(1 for s in self.sentences for t in s.tokens if t.pos is not Tag.PUNCT)

    @property
    def punctuation_count(self) -> int:
        return sum(1 for s in self.sentences for t in s.tokens if t.pos is Tag.PUNCT)


def chunk_tags(tags: Sequence[Tag]) -> list[tuple[int, int]]:
    """Half-open spans matching ``DET? ADJ* NOUN+``, greedy, left to right."""
    spans = []
    i, n = 0, len(tags)
    while i < n:
        j = i
        if tags[j] is Tag.DET:
            j += 1
        while j < n and tags[j] is Tag.ADJ:
            j += 1
        k = j
        while k < n and tags[k] is Tag.NOUN:
            k += 1
        if k > j:
            spans.append((i, k))
            i = k
        else:
            i += 1
    return spans


def chunk_noun_phrases(sentence: Sentence) -> list[tuple[int, int]]:
    return chunk_tags(sentence.tags)


def detect_passive(sentence: Sentence) -> int:
    """Count forms of *be* followed within two tokens by a past participle.

    Only adverbs or particles may sit between the auxiliary and the
    participle ("was not cooked", "was really cooked").
    """
    toks = sentence.tokens
    count = 0
    for i, tok in enumerate(toks):
        if tok.pos is not Tag.AUX or tok.lower not in BE_FORMS:
            continue
        for j in (i + 1, i + 2):
            if j >= len(toks):
                break
            if toks[j].pos is Tag.VERB and toks[j].is_participle:
                count += 1
                break
            if toks[j].pos not in GROUP_GLUE:
                break
    return count


def count_clauses(sentence: Sentence) -> int:
    """Number of verb groups; a group is a run of verbal tokens, possibly
    interrupted by adverbs and particles ("do n't really like")."""
    count = 0
    in_group = False
    for tok in sentence.tokens:
        if tok.pos in VERBAL:
            if not in_group:
                count += 1
            in_group = True
        elif tok.pos not in GROUP_GLUE:
            in_group = False
    return count


def typo_candidate(token: Token) -> bool:
    """Alphabetic word tokens (internal hyphens/apostrophes allowed), excluding clitics."""
    if token.pos is Tag.PUNCT or token.lower.startswith("'") or token.lower == "n't":
        return False
    stripped = token.lower.replace("-", "").replace("'", "")
    return bool(stripped) and stripped.isalpha()


def is_typo(token: Token, dictionary: frozenset[str], allowlist: Iterable[str] = frozenset()) -> bool:
    if not typo_candidate(token):
        return False
    lower = token.lower
    if lower in dictionary or lower in allowlist:
        return False
    parts = [p for p in lower.replace("'", "-").split("-") if p]
    return not all(p in dictionary or p in allowlist for p in parts)


def count_typos(doc: AnalyzedDoc, dictionary: frozenset[str],
                allowlist: Iterable[str] = frozenset()) -> int:
    allow = frozenset(a.lower() for a in allowlist)
    return sum(1 for t in doc.tokens if is_typo(t, dictionary, allow))


def _is_participle(surface: str, lower: str, tag: Tag, lex: Lexicons, initial: bool) -> bool:
    if tag is not Tag.VERB:
        return False
    if lower in lex.participles or lookup_penn(surface, lex, initial) == "VBN":
        return True
    return lower.endswith("ed") or lower.endswith("en")


def build_sentence(surfaces: Sequence[str], lex: Lexicons) -> Sentence:
    tags = tag_pos(surfaces, lex)
    tokens = []
    for i, (surface, tag) in enumerate(zip(surfaces, tags)):
        lower = normalize(surface)
        tokens.append(
            Token(
                surface=surface,
                lower=lower,
                pos=tag,
                is_function_word=lower in lex.function_words,
                char_len=sum(ch.isalpha() for ch in surface),
                is_participle=_is_participle(surface, lower, tag, lex, i == 0),
            )
        )
    sent = Sentence(tokens)
    sent.np_chunks = chunk_noun_phrases(sent)
    sent.clause_count = count_clauses(sent)
    sent.passive_count = detect_passive(sent)
    return sent


def analyze(text: str, lexicons: Lexicons | None = None) -> AnalyzedDoc:
    """Tokenize, segment, tag and annotate ``text``.

    Typos are counted against ``lexicons.dictionary`` and ``lexicons.allowlist``.
    """
    if not text or not text.strip():
        raise ValueError("cannot analyze empty text")
    lex = lexicons or default_lexicons()
    raw = tokenize(text, lex.abbreviations)
    sentences = [build_sentence([t.surface for t in group], lex) for group in split_sentences(text, raw)]
    doc = AnalyzedDoc(sentences)
    doc.typo_count = count_typos(doc, lex.dictionary, lex.allowlist)
    return doc
