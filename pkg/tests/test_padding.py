from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpm.bounds import PolyBound, all_bounds, leq_bound, padding_rounds
from fpm.machine import MalformedProgram, PolyProgram, program_header, run_counted
from fpm.padding import (
    PaddedWord,
    affix,
    co_program,
    contr1,
    contr1_inverse,
    drop_prefix,
    ex_program,
    expand1,
    expand1_inverse,
    expand_pad,
    iterate,
    parse_padded,
    pi0,
    pi1,
    pi1_prime,
    pi1_prime_inverse,
    pi_inverse,
    recontr1,
    recontr1_inverse,
    recontr_pad,
    reexpand1,
    reexpand1_inverse,
    reexpand_pad,
)
from fpm.words import all_words, to_str

binary = st.text(alphabet="01", max_size=10)


def test_affix_examples():
    assert affix("10")("0") == "100"
    assert drop_prefix(2)("100") == "0"
    assert drop_prefix(2)("1") is None


@given(st.text(alphabet="01", max_size=6), binary)
def test_affix_drop_cancel_and_decompose(v, x):
    assert drop_prefix(len(v))(affix(v)(x)) == x
    y = x
    for b in reversed(v):
        y = (pi0 if b == "0" else pi1)(y)
    assert y == affix(v)(x)


def test_pad_formulas():
    assert expand_pad(1) == 13
    assert expand_pad(0) == 2
    assert expand_pad(1) + 2 + 1 == (2 * 2) ** 2
    assert reexpand_pad(13) == 782
    assert reexpand_pad(0) == 2
    assert reexpand_pad(1) == 14
    assert recontr_pad(14) == 1
    assert recontr_pad(782) == 13
    assert recontr_pad(0) == 1


@given(st.integers(0, 10_000))
def test_recontr_inverts_reexpand(h):
    assert recontr_pad(reexpand_pad(h)) == max(1, h)
    if h >= 1:
        assert recontr_pad(reexpand_pad(h)) == h


@given(st.integers(0, 200))
def test_expand_length_is_square(n):
    assert expand_pad(n) + 2 + n == (2 * (n + 1)) ** 2


def _padded(w, h, y):
    return PaddedWord(w, h, y).word()


def test_contr_guard(corpus):
    w = ex_program(corpus["identity"])
    co = program_header(co_program(w))
    assert contr1(_padded(w, 13, "1")) == co + "1"
    assert contr1(_padded(w, 14, "1")) is None
    assert contr1(_padded(w, 2, "")) == co
    assert contr1(_padded(corpus["identity"], 2, "")) is None


def test_combinators_reject_nonparsing():
    for t in ("", "1", "0101", "11"):
        assert expand1(t) is None
        assert reexpand1(t) is None
        assert contr1(t) is None
        assert recontr1(t) is None


def test_padded_render(corpus):
    p = PaddedWord(ex_program(corpus["identity"]), 3, "01")
    assert p.render().endswith("|11|0^3|11|01")
    assert parse_padded(p.word()) == p


def test_expand_then_contr_recovers_payload(corpus):
    for w in corpus.values():
        for x in all_words(5):
            t = program_header(w) + x
            u = contr1(expand1(t))
            assert u == program_header(co_program(ex_program(w))) + x


def test_reexpand_recontr_roundtrip(corpus):
    w = ex_program(corpus["negate"])
    for h in range(101):
        t = _padded(w, h, "10")
        back = recontr1(reexpand1(t))
        assert parse_padded(back).pad == max(1, h)
        assert parse_padded(back).payload == "10"


@pytest.mark.parametrize("k,a,out", [((2, 12), None, (1, 12)), ((1, 100), None, (1, 51)), ((1, 12), None, (1, 12))])
def test_ex_bound_examples(corpus, k, a, out):
    w = PolyProgram(corpus["identity"].v, PolyBound(*k))
    assert ex_program(w).bound == PolyBound(*out)
    assert ex_program(w).pad_depth == 1


def test_co_examples(corpus):
    v = corpus["identity"].v
    assert co_program(PolyProgram(v, PolyBound(1, 12), 1)).bound == PolyBound(2, 44)
    assert co_program(PolyProgram(v, PolyBound(2, 13), 1)).bound == PolyBound(4, 192)
    w = PolyProgram(v, PolyBound(2, 12))
    assert co_program(ex_program(w)).bound == PolyBound(2, 44)
    with pytest.raises(MalformedProgram):
        co_program(w)


def test_co_ex_semantics(corpus):
    for w in corpus.values():
        w2 = co_program(ex_program(w))
        for x in all_words(8):
            assert run_counted(w2, x).result == run_counted(w, x).result


def test_bound_growth(corpus):
    v = corpus["identity"].v
    for p in all_bounds(6, 64, 12):
        w = PolyProgram(v, p)
        assert leq_bound(p, co_program(ex_program(w)).bound)


def test_ex_iteration_converges(corpus):
    v = corpus["identity"].v
    for p in all_bounds(6, 64, 12):
        w = iterate(ex_program, PolyProgram(v, p), 2 * padding_rounds(p) + 1)
        assert w.bound == PolyBound(1, 12)


# ---------------------------------------------------------------------------
# regularity: every map ships with an inverse, f f' f = f on samples

def _sample_words(corpus):
    out = []
    progs = [corpus["identity"], corpus["doubling"]]
    progs += [ex_program(w) for w in progs] + [iterate(ex_program, progs[0], 2)]
    for w, x in product(progs, ["", "0", "11", "010"]):
        out.append(program_header(w) + x)
        for h in (0, 2, 5, 13):
            out.append(_padded(w, h, x))
    return out + ["", "1", "0110"]


REGULAR = [
    ("expand", expand1, expand1_inverse),
    ("reexpand", reexpand1, reexpand1_inverse),
    ("contr", contr1, contr1_inverse),
    ("recontr", recontr1, recontr1_inverse),
    ("pi0", pi0, pi_inverse("0")),
    ("pi1", pi1, pi_inverse("1")),
    ("pi1'", pi1_prime, pi1_prime_inverse),
]


@pytest.mark.parametrize("name,f,f_inv", REGULAR, ids=[r[0] for r in REGULAR])
def test_generators_regular(corpus, name, f, f_inv):
    checked = 0
    for t in _sample_words(corpus):
        y = f(t)
        if y is None:
            continue
        x2 = f_inv(y)
        assert x2 is not None and to_str(f(x2)) == to_str(y), (name, t)
        checked += 1
    assert checked > 0
