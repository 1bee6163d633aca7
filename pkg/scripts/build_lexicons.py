"""Regenerate the committed tagger lexicon and typo dictionary.

Sources are two MIT-licensed PyPI distributions:

* ``textblob`` ships Brill's tagger lexicon (Brown + Penn Treebank,
  most-frequent Penn tag per word) as ``textblob/en/en-lexicon.txt``.
* ``pyspellchecker`` ships an English word-frequency table as
  ``spellchecker/resources/en.json.gz``.

Usage::

    pip download --no-deps textblob pyspellchecker -d /tmp/wheels
    python scripts/build_lexicons.py /tmp/wheels/textblob-*.whl /tmp/wheels/pyspellchecker-*.whl
"""

import argparse
import gzip
import io
import json
import zipfile
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "deceptcues" / "data"


def build_pos_lexicon(wheel: Path, out: Path) -> int:
    with zipfile.ZipFile(wheel) as zf:
        raw = zf.read("textblob/en/en-lexicon.txt").decode("utf-8")
    rows = {}
    for line in raw.splitlines():
        if not line.strip() or line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        rows.setdefault(word, tag.split("|")[0])
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# word<TAB>most frequent Penn Treebank tag\n")
        fh.write("# Source: Brill tagger lexicon v1.14 (Brown corpus + Penn Treebank),\n")
        fh.write("# as redistributed in textblob/en/en-lexicon.txt. MIT license.\n")
        for word in sorted(rows):
            fh.write(f"{word}\t{rows[word]}\n")
    return len(rows)


def build_dictionary(wheel: Path, out: Path) -> int:
    with zipfile.ZipFile(wheel) as zf:
        blob = zf.read("spellchecker/resources/en.json.gz")
    freq = json.load(io.TextIOWrapper(gzip.GzipFile(fileobj=io.BytesIO(blob)), encoding="utf-8"))
    words = sorted(w for w in freq if w.isalpha())
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# English wordlist for typo detection, one lower-case word per line.\n")
        fh.write("# Source: pyspellchecker resources/en.json.gz (alphabetic entries). MIT license.\n")
        fh.write("\n".join(words))
        fh.write("\n")
    return len(words)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("textblob_wheel", type=Path)
    ap.add_argument("pyspellchecker_wheel", type=Path)
    args = ap.parse_args()
    n_lex = build_pos_lexicon(args.textblob_wheel, DATA / "pos_lexicon.tsv")
    n_dict = build_dictionary(args.pyspellchecker_wheel, DATA / "dictionary.txt")
    print(f"pos_lexicon.tsv: {n_lex} entries; dictionary.txt: {n_dict} words")


if __name__ == "__main__":
    main()
