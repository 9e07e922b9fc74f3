import unicodedata

import pytest
from hypothesis import given, strategies as st

from docpipe import textprep
from docpipe.languages import ScriptClass, get_language
from docpipe.textprep import (
    PreprocessConfig,
    Token,
    detect_script,
    normalize,
    preprocess,
    remove_stopwords,
    segment_sentences,
    stem,
    tokenize,
)


class TestNormalize:
    def test_newline_unification(self):
        assert normalize("a\r\nb") == "a\nb"
        assert normalize("a\rb") == "a\nb"

    def test_whitespace_collapse(self):
        assert normalize("  hello   world  ") == "hello world"
        assert normalize("a\t\tb") == "a b"

    def test_canonical_composition(self):
        decomposed = unicodedata.normalize("NFD", "क़")
        assert normalize(decomposed) == unicodedata.normalize("NFC", "क़")

    def test_empty(self):
        assert normalize("") == ""

    @given(st.text(max_size=200))
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(once) == once


class TestDetectScript:
    @pytest.mark.parametrize("text,expected", [
        ("नमस्ते", ScriptClass.DEVANAGARI),
        ("hello", ScriptClass.LATIN),
        ("வணக்கம்", ScriptClass.TAMIL),
        ("নমস্কার", ScriptClass.BENGALI),
        ("నమస్కారం", ScriptClass.TELUGU),
        ("سلام", ScriptClass.PERSO_ARABIC),
        ("", ScriptClass.OTHER),
        ("12345 .,!?", ScriptClass.OTHER),
    ])
    def test_single_script(self, text, expected):
        assert detect_script(text) == expected

    def test_mixed_plurality_by_character_count(self):
        # 5 Latin letters vs 8 Devanagari code points
        assert detect_script("hello नमस्ते जी") == ScriptClass.DEVANAGARI

    def test_tie_breaks_by_enum_order(self):
        # 2 Latin letters vs 2 Devanagari letters: Latin comes first
        assert detect_script("ab नम") == ScriptClass.LATIN

    def test_digits_and_ascii_punct_do_not_count(self):
        assert detect_script("123 !!! नम") == ScriptClass.DEVANAGARI


class TestSegmentSentences:
    def test_danda(self):
        got = segment_sentences("राम घर गया। वह सो गया।", ScriptClass.DEVANAGARI)
        assert [s.text for s in got] == ["राम घर गया।", "वह सो गया।"]

    def test_trailing_unterminated(self):
        got = segment_sentences("Hello. World", ScriptClass.LATIN)
        assert [s.text for s in got] == ["Hello.", "World"]

    def test_abbreviation_guard(self):
        got = segment_sentences("e.g. apples are red. Done.", ScriptClass.LATIN)
        assert [s.text for s in got] == ["e.g. apples are red.", "Done."]

    def test_terminator_runs_stay_together(self):
        got = segment_sentences("What?! Really...", ScriptClass.LATIN)
        assert [s.text for s in got] == ["What?!", "Really..."]

    def test_double_danda(self):
        got = segment_sentences("धर्मो रक्षति रक्षितः॥ सत्यम् एव जयते।",
                                ScriptClass.DEVANAGARI)
        assert len(got) == 2

    def test_offsets_point_into_text(self):
        text = normalize("One. Two? Three")
        for sentence in segment_sentences(text, ScriptClass.LATIN):
            assert text[sentence.start_offset:sentence.end_offset] == sentence.text

    def test_offsets_tile_non_whitespace(self):
        text = normalize("A b. C d! E?")
        spans = [(s.start_offset, s.end_offset)
                 for s in segment_sentences(text, ScriptClass.LATIN)]
        for i, ch in enumerate(text):
            covering = [lo <= i < hi for lo, hi in spans]
            if not ch.isspace():
                assert sum(covering) == 1
        # spans are ordered and non-overlapping
        for (a_lo, a_hi), (b_lo, b_hi) in zip(spans, spans[1:]):
            assert a_hi <= b_lo

    def test_whitespace_only_dropped(self):
        assert segment_sentences("   ", ScriptClass.LATIN) == []


class TestTokenize:
    def test_punctuation_strip_and_lowercase(self):
        tokens = tokenize("The cat, sat.", ScriptClass.LATIN)
        assert [t.surface for t in tokens] == ["The", "cat", "sat"]
        assert [t.normalized for t in tokens] == ["the", "cat", "sat"]

    def test_danda_stripped(self):
        tokens = tokenize("राम घर गया।", ScriptClass.DEVANAGARI)
        assert [t.surface for t in tokens] == ["राम", "घर", "गया"]

    def test_empty(self):
        assert tokenize("", ScriptClass.LATIN) == []

    def test_no_lowercase_for_non_latin_script_arg(self):
        tokens = tokenize("Mixed case", ScriptClass.DEVANAGARI)
        assert [t.normalized for t in tokens] == ["Mixed", "case"]

    @given(st.text(alphabet=st.characters(max_codepoint=0x10FF), max_size=80))
    def test_never_emits_empty_or_punctuation_only_tokens(self, text):
        for token in tokenize(text, detect_script(text)):
            assert token.surface
            assert token.normalized
            assert any(not unicodedata.category(c).startswith("P")
                       for c in token.surface)


class TestStopwords:
    def test_english(self):
        tokens = [Token("the", "the"), Token("cat", "cat"), Token("sat", "sat")]
        got = remove_stopwords(tokens, get_language("eng"))
        assert [t.normalized for t in got] == ["cat", "sat"]

    def test_hindi(self):
        tokens = [Token("और", "और"), Token("राम", "राम"), Token("गया", "गया")]
        got = remove_stopwords(tokens, get_language("hin"))
        # "और" is in the shipped list; "गया" also is (common auxiliary)
        assert [t.normalized for t in got] == ["राम"]

    def test_language_without_list_is_identity(self):
        tokens = [Token("foo", "foo")]
        assert remove_stopwords(tokens, get_language("sat")) == tokens

    @given(st.lists(st.sampled_from("the cat sat on a mat dog".split()), max_size=12))
    def test_output_is_subsequence(self, words):
        tokens = [Token(w, w) for w in words]
        kept = remove_stopwords(tokens, get_language("eng"))
        it = iter(tokens)
        assert all(token in it for token in kept)


class TestStem:
    @pytest.mark.parametrize("word,expected", [
        ("running", "runn"),     # single "ing" strip
        ("is", "is"),            # stem would drop below 3 chars
        ("boxes", "box"),        # "es" wins over "s"
        ("supposedly", "suppos"),  # "edly" matches before "ly"
        ("cats", "cat"),
        ("fly", "fly"),          # "ly" would leave 1 char
    ])
    def test_latin_suffixes(self, word, expected):
        token = Token(word, word)
        assert stem(token, get_language("eng")).normalized == expected

    def test_non_latin_identity(self):
        token = Token("गया", "गया")
        assert stem(token, get_language("hin")) is token

    def test_surface_unchanged(self):
        token = Token("Running", "running")
        assert stem(token, get_language("eng")).surface == "Running"

    @given(st.text(alphabet="abcdefgilnsy", min_size=1, max_size=12))
    def test_never_lengthens_never_below_three(self, word):
        stemmed = stem(Token(word, word), get_language("eng")).normalized
        assert len(stemmed) <= len(word)
        if stemmed != word:
            assert len(stemmed) >= 3


class TestPreprocess:
    def test_composition_english(self):
        config = PreprocessConfig(language=get_language("eng"))
        got = preprocess("The cats ran. Dogs ran.", config)
        assert len(got.sentences) == 2
        assert [t.normalized for t in got.tokens_per_sentence[0]] == ["cat", "ran"]
        assert [t.normalized for t in got.tokens_per_sentence[1]] == ["dog", "ran"]

    def test_empty_input(self):
        config = PreprocessConfig(language=get_language("eng"))
        got = preprocess("", config)
        assert got.sentences == ()
        assert got.tokens_per_sentence == ()

    def test_hindi_sentence(self):
        config = PreprocessConfig(language=get_language("hin"))
        got = preprocess("राम घर सोया।", config)
        assert len(got.sentences) == 1
        assert [t.surface for t in got.tokens_per_sentence[0]] == ["राम", "घर", "सोया"]

    def test_lengths_match(self):
        config = PreprocessConfig(language=get_language("eng"))
        got = preprocess("One two. Three. Four five six!", config)
        assert len(got.sentences) == len(got.tokens_per_sentence)

    def test_all_flags_off_preserves_surfaces(self):
        config = PreprocessConfig(language=get_language("eng"), lowercase=False,
                                  remove_stopwords=False, stem=False,
                                  strip_punctuation=False)
        text = "The Cats ran. Dogs RAN."
        got = preprocess(text, config)
        surfaces = [t.surface for sent in got.tokens_per_sentence for t in sent]
        assert surfaces == ["The", "Cats", "ran.", "Dogs", "RAN."]

    def test_stopword_flag_marks_without_removal(self):
        config = PreprocessConfig(language=get_language("eng"),
                                  remove_stopwords=False, stem=False)
        got = preprocess("The cat", config)
        flags = [(t.surface, t.is_stopword) for t in got.tokens_per_sentence[0]]
        assert flags == [("The", True), ("cat", False)]
