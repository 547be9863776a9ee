from __future__ import annotations

import random

import pytest

from sentimatch import (
    Corpus,
    Dictionary,
    Document,
    EmptyCorpusError,
    EmoticonLexicon,
    TokenizerConfig,
    corpus_statistics,
    doc_counts,
    tokenize,
)
from sentimatch.textstats import bundled_dictionary, bundled_lexicon


def one_doc_corpus(text: str) -> Corpus:
    return Corpus(documents=(Document(id="0", text=text),))


def test_tokenize_hello_world():
    assert tokenize("Hello world!") == ["Hello", "world"]


def test_tokenize_skips_emoticons():
    assert tokenize("fix this BUG :)") == ["fix", "this", "BUG"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_internal_apostrophe_and_hyphen():
    assert tokenize("don't half-baked 'quoted' -dash-") == [
        "don't",
        "half-baked",
        "quoted",
        "dash",
    ]


def test_tokenize_digits_break_words():
    assert tokenize("py3k x2 3rd") == ["py", "k", "x", "rd"]


def test_tokenize_strips_urls_and_code_spans_by_default():
    text = "see https://example.com/a?b=1 and `inline code()` ok"
    assert tokenize(text) == ["see", "and", "ok"]
    keep = TokenizerConfig(strip_urls=False, strip_code_spans=False)
    assert "example" in tokenize(text, keep)
    assert "inline" in tokenize(text, keep)


def test_tokens_are_substrings_of_input():
    rng = random.Random(3)
    alphabet = "ab cD'-:)!?3é \n\t@#"
    for _ in range(200):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        for token in tokenize(text):
            assert token in text
            assert token  # non-empty


def test_tokenize_is_deterministic():
    text = "Some MIXED text :) with https://u.rl and don't"
    assert tokenize(text) == tokenize(text)


def test_doc_counts_hello_world():
    counts = doc_counts("Hello world!")
    assert counts.chars == 12
    assert counts.words == 2
    assert counts.exclamation_marks == 1
    assert counts.question_marks == 0
    assert counts.alpha_chars == 10
    assert counts.spelling_mistakes == 0


def test_doc_counts_emoticons_not_words():
    counts = doc_counts(":) :(")
    assert counts.emoticons == 2
    assert counts.words == 0


def test_doc_counts_empty():
    counts = doc_counts("")
    assert counts == type(counts)(0, 0, 0, 0, 0, 0, 0, 0)


def test_capitalized_words_rule():
    counts = doc_counts("I fixed the BUG in IO but Bug IT'S")
    # BUG and IO count; "I" (length 1), "Bug" (mixed) and "IT'S" (apostrophe) do not
    assert counts.capitalized_words == 2


def test_spelling_mistakes_counted_case_insensitively():
    counts = doc_counts("helo wrld")
    assert counts.spelling_mistakes == 2
    assert doc_counts("Hello WORLD").spelling_mistakes == 0


def test_spelling_skips_handles_and_hyphenated_tokens():
    counts = doc_counts("@someuserx and #hashtagx are fine")
    assert counts.spelling_mistakes == 0
    # hyphenated/apostrophe tokens are not spell candidates
    assert doc_counts("qqq-zzz aren't").spelling_mistakes == 0
    assert doc_counts("qqqzzz").spelling_mistakes == 1


def test_spelling_skips_urls_under_default_config():
    assert doc_counts("docs at https://exampleqq.orgzz/pathzz").spelling_mistakes == 0


def test_custom_dictionary_and_lexicon(tmp_path):
    dict_path = tmp_path / "words.txt"
    dict_path.write_text("alpha\nbeta\n")
    lex_path = tmp_path / "emo.txt"
    lex_path.write_text(":}\n")
    dictionary = Dictionary.from_file(dict_path)
    lexicon = EmoticonLexicon.from_file(lex_path)
    counts = doc_counts("alpha BETA gamma :}", dictionary, lexicon)
    assert counts.spelling_mistakes == 1  # gamma
    assert counts.emoticons == 1


def test_dictionary_rejects_empty(tmp_path):
    empty = tmp_path / "w.txt"
    empty.write_text("\n\n")
    with pytest.raises(ValueError):
        Dictionary.from_file(empty)


def test_bundled_data_loads():
    assert len(bundled_dictionary()) > 1000
    assert len(bundled_lexicon()) > 30
    assert "the" in bundled_dictionary()
    assert ":)" in bundled_lexicon()


def test_emoji_counted_by_code_point():
    counts = doc_counts("I love it \U0001f600\U0001f680 ❤")
    assert counts.emoticons == 3


def test_question_and_exclamation_counted_over_raw_text():
    # raw text includes the URL's "?", even though the URL yields no tokens
    counts = doc_counts("what?! really?? https://x.y/?q=1")
    assert counts.question_marks == 4
    assert counts.exclamation_marks == 1


def test_corpus_statistics_mean_word_counts():
    corpus = Corpus(
        documents=(
            Document(id="a", text="hello world"),
            Document(id="b", text="one two three four"),
        )
    )
    stats = corpus_statistics(corpus)
    assert stats.avg_words_per_doc == 3.0


def test_corpus_statistics_single_doc_exclamation():
    stats = corpus_statistics(one_doc_corpus("Hi!"))
    assert stats.avg_exclamation_marks == 1.0
    assert stats.avg_chars_per_doc == 3.0


def test_corpus_statistics_repeated_doc_invariant():
    text = "Fix the BUG now! :) helo https://x.y don't"
    single = corpus_statistics(one_doc_corpus(text))
    for n in (2, 5, 17):
        repeated = Corpus(
            documents=tuple(Document(id=str(i), text=text) for i in range(n))
        )
        assert corpus_statistics(repeated) == single


def test_corpus_statistics_duplicating_corpus_is_invariant():
    rng = random.Random(9)
    texts = [
        "Great work, thanks!",
        "this crashes :( see `trace()` for details",
        "WHY does it fail??",
        "plain",
    ]
    documents = tuple(Document(id=str(i), text=rng.choice(texts)) for i in range(20))
    corpus = Corpus(documents=documents)
    doubled = Corpus(
        documents=documents
        + tuple(Document(id=f"dup{i}", text=doc.text) for i, doc in enumerate(documents))
    )
    assert corpus_statistics(doubled) == corpus_statistics(corpus)


def test_appending_exclamation_moves_only_two_fields():
    base = Corpus(
        documents=(
            Document(id="a", text="hello world"),
            Document(id="b", text="nice work"),
        )
    )
    bumped = Corpus(
        documents=(
            Document(id="a", text="hello world!"),
            Document(id="b", text="nice work"),
        )
    )
    before = corpus_statistics(base)
    after = corpus_statistics(bumped)
    assert after.avg_exclamation_marks > before.avg_exclamation_marks
    assert after.avg_chars_per_doc > before.avg_chars_per_doc
    for field in (
        "avg_chars_per_word",
        "avg_words_per_doc",
        "avg_capitalized_words",
        "avg_spelling_mistakes",
        "avg_emoticons",
        "avg_question_marks",
    ):
        assert getattr(after, field) == getattr(before, field)


def test_chars_per_word_is_mean_of_per_doc_ratios():
    corpus = Corpus(
        documents=(
            Document(id="a", text="ab cd"),      # 4 alpha / 2 words = 2.0
            Document(id="b", text="abcdef"),     # 6 / 1 = 6.0
            Document(id="c", text="?!"),         # no words contributes 0
        )
    )
    stats = corpus_statistics(corpus)
    assert stats.avg_chars_per_word == pytest.approx((2.0 + 6.0 + 0.0) / 3)


def test_all_dictionary_words_mean_zero_mistakes():
    corpus = one_doc_corpus("the quick code review works well")
    assert corpus_statistics(corpus).avg_spelling_mistakes == 0.0


def test_empty_corpus_rejected():
    with pytest.raises(EmptyCorpusError):
        corpus_statistics(Corpus(documents=()))


def test_doc_counts_is_pure():
    text = "Mixed BAG :) don't crash https://x.y ok? ok!"
    runs = {doc_counts(text) for _ in range(5)}
    assert len(runs) == 1
