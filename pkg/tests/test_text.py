from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from tribsum.text import (
    default_abbreviations,
    default_stopwords,
    lcs_length,
    lcs_ratio,
    normalize,
    normalize_with_map,
    strip_brackets,
    tokenize,
)


class TestTokenize:
    def test_apostrophe_splits(self):
        assert tokenize("L'imposta di registro") == ["l", "imposta", "di", "registro"]

    def test_empty(self):
        assert tokenize("") == []

    def test_digits_and_slash(self):
        assert tokenize("Cass. 20981/2021") == ["cass", "20981", "2021"]

    def test_accents_preserved(self):
        assert tokenize("è già così") == ["è", "già", "così"]

    def test_underscore_is_separator(self):
        assert tokenize("respondent_1") == ["respondent", "1"]

    def test_stopword_removal(self):
        tokens = tokenize("the tax relief", default_stopwords())
        assert tokens == ["tax", "relief"]


class TestWordlists:
    def test_stopwords_cover_both_languages(self):
        stopwords = default_stopwords()
        assert {"il", "della", "the", "of"} <= stopwords

    def test_abbreviations_have_trailing_dot(self):
        abbreviations = default_abbreviations()
        assert "art." in abbreviations
        assert all(a.endswith(".") for a in abbreviations)


class TestNormalize:
    def test_glyphs_and_whitespace(self):
        assert normalize("Testo  “citato” –\tqui") == 'testo "citato" - qui'

    def test_map_points_back_to_original(self):
        original = "A  “b”  c"
        normalized, index_map = normalize_with_map(original)
        assert len(normalized) == len(index_map)
        for i, ch in enumerate(normalized):
            if ch not in ' "':
                assert original[index_map[i]].lower() == ch

    def test_strip_brackets(self):
        assert strip_brackets("[testo]") == "testo"
        assert strip_brackets('"[testo]"') == "testo"
        assert strip_brackets("plain") == "plain"


class TestLcs:
    def test_known_value(self):
        assert lcs_length(list("abcd"), list("axc")) == 2

    def test_empty(self):
        assert lcs_length([], list("ab")) == 0
        assert lcs_ratio([], []) == 0.0

    @given(
        st.lists(st.sampled_from("abcde"), max_size=12),
        st.lists(st.sampled_from("abcde"), max_size=12),
    )
    def test_matches_full_table_oracle(self, a, b):
        # independent full-table dynamic program
        table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
        for i in range(1, len(a) + 1):
            for j in range(1, len(b) + 1):
                if a[i - 1] == b[j - 1]:
                    table[i][j] = table[i - 1][j - 1] + 1
                else:
                    table[i][j] = max(table[i - 1][j], table[i][j - 1])
        assert lcs_length(a, b) == table[-1][-1]

    @given(st.lists(st.sampled_from("abc"), min_size=1, max_size=10))
    def test_self_similarity(self, tokens):
        assert lcs_ratio(tokens, tokens) == 1.0
