"""Per-corpus statistical features: eight averages over raw text.

For every document we count characters, word tokens, alphabetic characters,
all-caps words, spelling mistakes (dictionary membership test), emoticons,
question marks and exclamation marks; the corpus statistics are the arithmetic
means of those counts. Conventions the source data does not pin down are fixed
here and documented:

* ``chars`` counts every Unicode scalar of the raw text, whitespace included.
* ``chars per word`` is alphabetic characters inside word tokens divided by the
  word count, averaged per document (0 for wordless documents).
* a "capitalized word" is an all-uppercase token of length >= 2 ("BUG", not "I"
  and not sentence case).
* spelling-mistake candidates are purely alphabetic tokens not prefixed by
  ``@``/``#``; with the default tokenizer flags, URLs and backtick code spans
  never produce tokens at all.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .corpus import Corpus
from .errors import EmptyCorpusError

#: Canonical field order shared with platform profiles and questionnaire statistics.
STAT_FIELDS: tuple[str, ...] = (
    "avg_chars_per_doc",
    "avg_chars_per_word",
    "avg_words_per_doc",
    "avg_capitalized_words",
    "avg_spelling_mistakes",
    "avg_emoticons",
    "avg_question_marks",
    "avg_exclamation_marks",
)

_WORD_RE = re.compile(r"[^\W\d_]+(?:['’-][^\W\d_]+)*")
_URL_RE = re.compile(r"(?:https?|ftp)://\S+|\bwww\.\S+", re.IGNORECASE)
_CODE_SPAN_RE = re.compile(r"`+[^`]+`+")

# Unicode blocks treated as emoji; each code point occurrence counts once.
_EMOJI_RANGES: tuple[tuple[int, int], ...] = (
    (0x1F300, 0x1F5FF),  # symbols & pictographs
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport & map
    (0x1F900, 0x1F9FF),  # supplemental symbols
    (0x1FA70, 0x1FAFF),  # extended-A
    (0x2600, 0x26FF),    # miscellaneous symbols
    (0x2700, 0x27BF),    # dingbats
    (0x1F1E6, 0x1F1FF),  # regional indicators
    (0x2B50, 0x2B50),
    (0x2B55, 0x2B55),
)


@dataclass(frozen=True)
class TokenizerConfig:
    """Word-extraction flags.

    Words are maximal runs of alphabetic characters, allowing internal
    apostrophes and hyphens. With ``strip_urls``/``strip_code_spans`` enabled
    (the default), URLs and backtick-delimited code spans are blanked before
    word extraction so they contribute no tokens.
    """

    strip_urls: bool = True
    strip_code_spans: bool = True


DEFAULT_TOKENIZER = TokenizerConfig()


def _mask(text: str, config: TokenizerConfig) -> str:
    def blank(match: re.Match) -> str:
        return " " * (match.end() - match.start())

    if config.strip_code_spans:
        text = _CODE_SPAN_RE.sub(blank, text)
    if config.strip_urls:
        text = _URL_RE.sub(blank, text)
    return text


def _word_spans(text: str, config: TokenizerConfig) -> list[tuple[int, str]]:
    masked = _mask(text, config)
    return [(m.start(), m.group()) for m in _WORD_RE.finditer(masked)]


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """Extract word tokens in order; every token is a substring of the input."""
    return [token for _, token in _word_spans(text, config)]


class Dictionary:
    """Case-insensitive membership test against a known-word list."""

    def __init__(self, words: set[str] | frozenset[str]):
        normalized = frozenset(w.strip().lower() for w in words if w.strip())
        if not normalized:
            raise ValueError("dictionary must contain at least one word")
        self.words = normalized

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_file(cls, path: str | Path) -> "Dictionary":
        """Load a plain-text word list, one entry per line, UTF-8."""
        text = Path(path).read_text(encoding="utf-8")
        return cls(set(text.split()))

    @classmethod
    def bundled(cls) -> "Dictionary":
        return cls(set(_data_text("english_words.txt").split()))


class EmoticonLexicon:
    """ASCII emoticon matching plus Unicode emoji detection.

    Lexicon entries match whitespace-delimited chunks of the text exactly;
    emoji are detected per code point via a fixed range table. Each occurrence
    counts once.
    """

    def __init__(self, emoticons: set[str] | frozenset[str]):
        entries = frozenset(e.strip() for e in emoticons if e.strip())
        if not entries:
            raise ValueError("emoticon lexicon must contain at least one entry")
        self.emoticons = entries

    def __contains__(self, chunk: str) -> bool:
        return chunk in self.emoticons

    def __len__(self) -> int:
        return len(self.emoticons)

    def count(self, text: str) -> int:
        hits = sum(1 for chunk in text.split() if chunk in self.emoticons)
        hits += sum(1 for ch in text if _is_emoji(ch))
        return hits

    @classmethod
    def from_file(cls, path: str | Path) -> "EmoticonLexicon":
        """Load a plain-text lexicon, one emoticon per line, UTF-8."""
        text = Path(path).read_text(encoding="utf-8")
        return cls(set(line.strip() for line in text.splitlines()))

    @classmethod
    def bundled(cls) -> "EmoticonLexicon":
        return cls(set(_data_text("emoticons.txt").splitlines()))


def _is_emoji(ch: str) -> bool:
    point = ord(ch)
    return any(lo <= point <= hi for lo, hi in _EMOJI_RANGES)


def _data_text(name: str) -> str:
    return (resources.files("sentimatch") / "data" / name).read_text(encoding="utf-8")


_BUNDLED_DICTIONARY: Dictionary | None = None
_BUNDLED_LEXICON: EmoticonLexicon | None = None


def bundled_dictionary() -> Dictionary:
    global _BUNDLED_DICTIONARY
    if _BUNDLED_DICTIONARY is None:
        _BUNDLED_DICTIONARY = Dictionary.bundled()
    return _BUNDLED_DICTIONARY


def bundled_lexicon() -> EmoticonLexicon:
    global _BUNDLED_LEXICON
    if _BUNDLED_LEXICON is None:
        _BUNDLED_LEXICON = EmoticonLexicon.bundled()
    return _BUNDLED_LEXICON


@dataclass(frozen=True)
class DocCounts:
    """Raw per-document counts feeding the corpus averages."""

    chars: int
    words: int
    alpha_chars: int
    capitalized_words: int
    spelling_mistakes: int
    emoticons: int
    question_marks: int
    exclamation_marks: int


def doc_counts(
    text: str,
    dictionary: Dictionary | None = None,
    lexicon: EmoticonLexicon | None = None,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> DocCounts:
    """Count one document. Pure function of its inputs.

    ``dictionary``/``lexicon`` default to the bundled data files.
    """
    dictionary = dictionary or bundled_dictionary()
    lexicon = lexicon or bundled_lexicon()
    spans = _word_spans(text, config)

    alpha_chars = 0
    capitalized = 0
    mistakes = 0
    for start, token in spans:
        alpha_chars += sum(1 for ch in token if ch.isalpha())
        if len(token) >= 2 and token.isalpha() and token.isupper():
            capitalized += 1
        # spell candidacy: purely alphabetic and not an @handle/#tag
        if token.isalpha() and (start == 0 or text[start - 1] not in "@#"):
            if token not in dictionary:
                mistakes += 1

    return DocCounts(
        chars=len(text),
        words=len(spans),
        alpha_chars=alpha_chars,
        capitalized_words=capitalized,
        spelling_mistakes=mistakes,
        emoticons=lexicon.count(text),
        question_marks=text.count("?"),
        exclamation_marks=text.count("!"),
    )


@dataclass(frozen=True)
class TextStatistics:
    """The eight per-corpus averages (per document)."""

    avg_chars_per_doc: float
    avg_chars_per_word: float
    avg_words_per_doc: float
    avg_capitalized_words: float
    avg_spelling_mistakes: float
    avg_emoticons: float
    avg_question_marks: float
    avg_exclamation_marks: float

    def to_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in STAT_FIELDS}


def corpus_statistics(
    corpus: Corpus,
    dictionary: Dictionary | None = None,
    lexicon: EmoticonLexicon | None = None,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> TextStatistics:
    """Average the per-document counts over the corpus.

    Totals accumulate exactly (integers, and a rational for the per-document
    chars-per-word ratio) and are divided once, so results are independent of
    evaluation order and duplicating every document changes nothing. Raises
    EmptyCorpusError for an empty corpus rather than emitting NaN.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot compute statistics of an empty corpus")
    dictionary = dictionary or bundled_dictionary()
    lexicon = lexicon or bundled_lexicon()

    n = len(corpus)
    totals = dict.fromkeys(
        ("chars", "words", "capitalized", "mistakes", "emoticons", "questions", "exclamations"), 0
    )
    ratio_total = Fraction(0)
    for doc in corpus:
        counts = doc_counts(doc.text, dictionary, lexicon, config)
        totals["chars"] += counts.chars
        totals["words"] += counts.words
        totals["capitalized"] += counts.capitalized_words
        totals["mistakes"] += counts.spelling_mistakes
        totals["emoticons"] += counts.emoticons
        totals["questions"] += counts.question_marks
        totals["exclamations"] += counts.exclamation_marks
        if counts.words:
            ratio_total += Fraction(counts.alpha_chars, counts.words)
    return TextStatistics(
        avg_chars_per_doc=totals["chars"] / n,
        avg_chars_per_word=float(ratio_total / n),
        avg_words_per_doc=totals["words"] / n,
        avg_capitalized_words=totals["capitalized"] / n,
        avg_spelling_mistakes=totals["mistakes"] / n,
        avg_emoticons=totals["emoticons"] / n,
        avg_question_marks=totals["questions"] / n,
        avg_exclamation_marks=totals["exclamations"] / n,
    )
