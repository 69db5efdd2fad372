from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpm.bounds import (
    PolyBound,
    all_bounds,
    co_bound,
    compose_bounds,
    counter_budget,
    eval_bound,
    ex_bound,
    exec_budget,
    leq_bound,
    padding_rounds,
)

bounds = st.builds(PolyBound, st.integers(1, 6), st.integers(12, 80))


@pytest.mark.parametrize("k,a,n,out", [(2, 12, 3, 120), (1, 12, 0, 12), (3, 13, 2, 117)])
def test_eval_bound(k, a, n, out):
    assert eval_bound(PolyBound(k, a), n) == out
    assert PolyBound(k, a)(n) == out


def test_leq_bound_examples():
    assert leq_bound(PolyBound(2, 13), PolyBound(3, 14))
    assert not leq_bound(PolyBound(2, 15), PolyBound(3, 14))
    assert leq_bound(PolyBound(1, 12), PolyBound(1, 12))


def test_compose_bounds_examples():
    assert compose_bounds(PolyBound(1, 12), PolyBound(1, 12)) == PolyBound(1, 312)
    assert compose_bounds(PolyBound(2, 12), PolyBound(1, 12)) == PolyBound(2, 312)
    assert 72 + eval_bound(PolyBound(1, 12), 72) == 948 <= eval_bound(PolyBound(1, 312), 5) == 1872


def test_counter_budget_examples():
    b = counter_budget(PolyBound(1, 12), 4)
    assert (b.p_prime, b.exec) == (60, 5)
    assert counter_budget(PolyBound(2, 13), 2).p_prime == 60
    assert counter_budget(PolyBound(1, 12), 0, c=4).cp_upper == 256
    with pytest.raises(ValueError):
        counter_budget(PolyBound(1, 11), 3)


def test_render():
    assert str(PolyBound(2, 12)) == "12*n^2+12"


def test_invalid_bound():
    with pytest.raises(ValueError):
        PolyBound(0, 12)
    with pytest.raises(ValueError):
        PolyBound(1, 0)


def test_leq_is_partial_order():
    bs = list(all_bounds(8, 64))
    small = bs[::37]
    for p in bs[::11]:
        assert leq_bound(p, p)
    for p, q in product(small, small):
        if leq_bound(p, q) and leq_bound(q, p):
            assert p == q
        for r in small[::5]:
            if leq_bound(p, q) and leq_bound(q, r):
                assert leq_bound(p, r)


@given(bounds, bounds, st.integers(0, 64))
def test_leq_monotone(p, q, n):
    if leq_bound(p, q):
        assert eval_bound(p, n) <= eval_bound(q, n)


@given(bounds, bounds, bounds, st.integers(0, 20))
def test_compose_associativity_dominance(p1, p2, p3, n):
    three = eval_bound(p3, eval_bound(p2, eval_bound(p1, n)))
    left = compose_bounds(compose_bounds(p1, p2), p3)
    right = compose_bounds(p1, compose_bounds(p2, p3))
    assert eval_bound(left, n) >= three
    assert eval_bound(right, n) >= three


@given(bounds, st.integers(0, 64))
def test_budget_splits_exact(p, n):
    b = counter_budget(p, n)
    assert b.prep + b.exec + b.balance_check == b.p_prime
    assert b.exec == exec_budget(p, n)


def test_ex_co_formulas():
    assert ex_bound(PolyBound(2, 12)) == PolyBound(1, 12)
    assert ex_bound(PolyBound(1, 100)) == PolyBound(1, 51)
    assert ex_bound(PolyBound(1, 12)) == PolyBound(1, 12)
    assert co_bound(PolyBound(1, 12)) == PolyBound(2, 44)
    assert co_bound(PolyBound(2, 13)) == PolyBound(4, 192)
    assert padding_rounds(PolyBound(1, 12)) == 4


@given(bounds)
def test_co_ex_grows(p):
    assert leq_bound(p, co_bound(ex_bound(p)))
