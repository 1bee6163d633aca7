import csv

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deceptcues.corpus import (
    Corpus,
    CorpusError,
    Label,
    Review,
    Sentiment,
    class_balance,
    convert_table,
    convert_text_tree,
    convert_upstream,
    dumps_corpus,
    load_corpus,
    loads_corpus,
    save_corpus,
)

HEADER = "id,text,label,sentiment,source\n"


class TestLoad:
    def test_header_only_gives_empty_corpus(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text(HEADER, encoding="utf-8")
        assert len(load_corpus(p)) == 0

    def test_label_is_case_insensitive(self):
        c = loads_corpus(HEADER + "a,Nice food,FAKE,,\nb,Bad,Real,negative,r1\n")
        assert c[0].label is Label.FAKE
        assert c[1].label is Label.REAL
        assert c[1].sentiment is Sentiment.NEGATIVE
        assert c[1].source == "r1"
        assert c[0].sentiment is None and c[0].source is None

    def test_unknown_label_names_token(self):
        with pytest.raises(CorpusError, match="maybe"):
            loads_corpus(HEADER + "a,text,maybe,,\n")

    def test_malformed_row_names_line(self):
        with pytest.raises(CorpusError, match="line 3"):
            loads_corpus(HEADER + "a,text,fake,,\nb,text\n")

    def test_duplicate_id(self):
        with pytest.raises(CorpusError, match="duplicate"):
            loads_corpus(HEADER + "a,one,fake,,\na,two,real,,\n")

    def test_blank_text_rejected(self):
        with pytest.raises(CorpusError):
            loads_corpus(HEADER + "a,   ,fake,,\n")

    def test_order_preserved(self):
        body = "".join(f"r{i},text {i},{'fake' if i % 2 else 'real'},,\n" for i in range(20))
        c = loads_corpus(HEADER + body)
        assert [r.id for r in c] == [f"r{i}" for i in range(20)]

    def test_bundled_sample_corpus_balanced(self):
        from deceptcues.cli import SAMPLE_DATASET, data_file

        c = load_corpus(data_file(SAMPLE_DATASET))
        assert class_balance(c) == {Label.FAKE: 20, Label.REAL: 20}


class TestBalance:
    def test_empty(self):
        assert class_balance(Corpus([])) == {Label.FAKE: 0, Label.REAL: 0}

    def test_three_fake(self):
        c = Corpus([Review(f"f{i}", "x", Label.FAKE) for i in range(3)])
        assert class_balance(c) == {Label.FAKE: 3, Label.REAL: 0}


texts = st.text(min_size=1, max_size=60).filter(lambda s: s.strip() and "\x00" not in s)


class TestRoundTrip:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(texts, st.sampled_from(list(Label)),
                              st.sampled_from([None, *Sentiment]),
                              st.sampled_from([None, "r1", "a,b"])), max_size=8))
    def test_save_load_identical(self, rows):
        corpus = Corpus([Review(f"id{i}", t.strip(), lab, sen, src) for i, (t, lab, sen, src) in enumerate(rows)])
        back = loads_corpus(dumps_corpus(corpus))
        assert list(back) == list(corpus)

    def test_file_round_trip(self, tmp_path):
        corpus = Corpus([Review("a", 'He said "great", twice.\nNew line', Label.FAKE, Sentiment.POSITIVE, "x")])
        p = tmp_path / "sub" / "c.csv"
        p.parent.mkdir()
        save_corpus(corpus, p)
        assert list(load_corpus(p)) == list(corpus)


class TestConverters:
    def test_table_autodetects_columns(self, tmp_path):
        p = tmp_path / "upstream.csv"
        with p.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["Review", "Real/Fake", "Polarity", "Restaurant"])
            w.writerow(["Tasty tacos", "Fake", "Positive", "A"])
            w.writerow(["", "Real", "", ""])
            w.writerow(["Slow service", "Real", "Negative", "B"])
        c = convert_table(p)
        assert [r.label for r in c] == [Label.FAKE, Label.REAL]
        assert [r.source for r in c] == ["A", "B"]
        assert c[1].sentiment is Sentiment.NEGATIVE

    def test_text_tree(self, tmp_path):
        for label, sent, name, text in [("fake", "positive", "1.txt", "Great!"), ("real", "negative", "2.txt", "Meh.")]:
            d = tmp_path / label / sent
            d.mkdir(parents=True)
            (d / name).write_text(text, encoding="utf-8")
        c = convert_upstream(tmp_path)
        assert class_balance(c) == {Label.FAKE: 1, Label.REAL: 1}
        assert convert_text_tree(tmp_path)[0].sentiment is Sentiment.POSITIVE

    def test_missing_path(self, tmp_path):
        with pytest.raises(CorpusError):
            convert_upstream(tmp_path / "nope")
