import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicplural.padic import padic_distance
from padicplural.wordcode import (
    EncodedWord,
    EqualWords,
    InvalidCodePoint,
    NulCharacter,
    decode,
    encode,
    suffix_agreement,
)

# Unicode scalar values other than U+0000.
chars = st.characters(min_codepoint=1, blacklist_categories=("Cs",))
words = st.text(alphabet=chars, max_size=12)


def test_encode_examples():
    assert encode("") == 0
    assert encode("t") == 116
    assert encode("cat") == 99 * 2**64 + 97 * 2**32 + 116


def test_decode_examples():
    assert decode(0) == ""
    assert decode(99 * 2**64 + 97 * 2**32 + 116) == "cat"
    assert decode(116) == "t"


@pytest.mark.parametrize("n", [0xD800, 0xDFFF, 0x110000, 1 << 32, -1, (0x61 << 32) | 0xDC00])
def test_decode_rejects_invalid_chunks(n):
    with pytest.raises(InvalidCodePoint):
        decode(n)


def test_nul_rejected():
    with pytest.raises(NulCharacter):
        encode("a\x00b")


def test_multilingual_roundtrip():
    for w in ["книга", "πόλη", "ব্যক্তি", "日本語", "𐌰𐌹𐍅𐍃", "ñandú"]:
        assert decode(encode(w)) == w


@given(words)
def test_roundtrip(w):
    assert decode(encode(w)) == w


@given(words, words)
def test_injective(a, b):
    if a != b:
        assert encode(a) != encode(b)


def test_suffix_agreement_examples():
    assert suffix_agreement("sky", "fry") == 1
    assert suffix_agreement("cats", "dogs") == 1
    assert suffix_agreement("cat", "dot") == 1
    assert suffix_agreement(EncodedWord.of("walking"), EncodedWord.of("talking")) == 6
    with pytest.raises(EqualWords):
        suffix_agreement("cat", "cat")


@given(words, words, st.text(alphabet=chars, min_size=1, max_size=5))
def test_shared_suffix_bound(a, b, suffix):
    if a == b:
        return
    k = len(suffix)
    assert padic_distance(encode(a + suffix), encode(b + suffix), 2) <= 2 ** (-32 * k)
    assert suffix_agreement(a + suffix, b + suffix) >= k


def test_butterfly_is_2adically_near_but_euclidean_far():
    bf = encode("butterfly")
    for other in ("sky", "fry"):
        assert padic_distance(bf, encode(other), 2) <= 2**-32
        assert abs(bf - encode(other)) >= 2**192


@given(words, st.text(alphabet=chars, max_size=5))
def test_appending_suffix_is_linear(w, t):
    assert encode(w + "s") == 2**32 * encode(w) + 115
    assert encode(w + t) == 2 ** (32 * len(t)) * encode(w) + encode(t)
