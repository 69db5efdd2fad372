from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpm.words import (
    LongWord,
    all_words,
    concat,
    decode3,
    drop,
    encode3,
    hash_affix,
    hash_strip,
    head,
    is_prefix_code,
    leading_zeros,
    length,
    minimal_prefix_code,
    pair,
    render,
    shortest_prefix_in,
    split_header,
    startswith,
    to_str,
    zeros,
)

binary = st.text(alphabet="01", max_size=12)
tri = st.text(alphabet="01#", max_size=10)


@pytest.mark.parametrize("w,out", [("01#", "000111"), ("", ""), ("#", "11")])
def test_encode3_examples(w, out):
    assert encode3(w) == out


@pytest.mark.parametrize("u,out", [("000111", "01#"), ("10", None), ("", ""), ("0", None), ("0110", None)])
def test_decode3_examples(u, out):
    assert decode3(u) == out


def test_hash_affix_strip():
    assert hash_affix("01") == "01#"
    assert hash_strip("01#") == "01"
    assert hash_strip("0#1") is None
    assert hash_strip("01") is None


def test_minimal_prefix_code_examples():
    assert minimal_prefix_code(lambda x: x.startswith("0"), 3) == {"0"}
    assert minimal_prefix_code(lambda x: len(x) >= 2, 3) == {"00", "01", "10", "11"}
    assert minimal_prefix_code(lambda x: True, 3) == {""}


def test_shortest_prefix_in_examples():
    assert shortest_prefix_in("0110", lambda p: p.startswith("01")) == "01"
    assert shortest_prefix_in("111", lambda p: p == "0") is None
    images = {"0" + x for x in all_words(1)}
    assert shortest_prefix_in("00", images.__contains__) == "0"


@given(tri)
def test_decode_encode_roundtrip(w):
    assert decode3(encode3(w)) == w


@given(binary)
def test_hash_roundtrip(x):
    assert hash_strip(hash_affix(x)) == x


def test_header_self_delimiting():
    words = list(all_words(6))
    for w in words:
        for w2 in words:
            if w != w2:
                assert not (encode3(w2) + "11" + "0101").startswith(encode3(w) + "11")


@given(binary, binary)
def test_split_header_inverts_pair(a, b):
    assert split_header(pair(a, b)) == (a, b)


def test_split_header_rejects():
    assert split_header("0001") is None
    assert split_header("10") is None


@given(st.integers(min_value=0, max_value=6), st.sampled_from(["00", "01", "1", "101"]))
def test_minimal_prefix_code_is_code_and_generates(max_len, gen):
    member = lambda x: x.startswith(gen) or x.startswith("11")
    code = minimal_prefix_code(member, max_len)
    assert is_prefix_code(code)
    for x in all_words(max_len):
        if member(x):
            assert any(x.startswith(p) for p in code)


def test_all_words_order():
    assert list(all_words(2)) == ["", "0", "1", "00", "01", "10", "11"]
    assert list(all_words(2, 2)) == ["00", "01", "10", "11"]
    assert len(list(all_words(10))) == 2 ** 11 - 1


def test_is_prefix_code():
    assert is_prefix_code(["0", "10", "11"])
    assert not is_prefix_code(["0", "01"])
    assert is_prefix_code([])


def test_render():
    assert render("") == "ε"
    assert render("01") == "01"


def test_long_word_matches_materialized():
    for a, n, b in product(["", "1", "011"], [0, 1, 300], ["", "11", "10"]):
        lw = concat(a, zeros(n), b)
        s = a + "0" * n + b
        assert length(lw) == len(s)
        assert to_str(lw) == s
        assert leading_zeros(lw) == len(s) - len(s.lstrip("0"))
        assert head(lw, 5) == s[:5]
        for k in (0, 1, 3, len(s)):
            assert to_str(drop(lw, k)) == s[k:]
        assert startswith(lw, s[:4])


def test_long_word_huge_run_stays_symbolic():
    lw = concat("11", zeros(10 ** 9), "11", "01")
    assert isinstance(lw, LongWord)
    assert length(lw) == 10 ** 9 + 6
    rest = drop(lw, 2)
    assert leading_zeros(rest) == 10 ** 9
    assert to_str(drop(rest, 10 ** 9)) == "1101"
