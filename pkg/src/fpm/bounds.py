"""Bounding polynomials ``p(n) = a*n^k + a`` and the counter cost model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

DEFAULT_COST_CONSTANT = 4


@dataclass(frozen=True, order=False)
class PolyBound:
    k: int
    a: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.a < 1:
            raise ValueError(f"bound needs k >= 1 and a >= 1, got k={self.k}, a={self.a}")

    def __call__(self, n: int) -> int:
        return eval_bound(self, n)

    def __str__(self) -> str:
        return f"{self.a}*n^{self.k}+{self.a}"


def eval_bound(p: PolyBound, n: int) -> int:
    return p.a * n ** p.k + p.a


def leq_bound(p1: PolyBound, p2: PolyBound) -> bool:
    """Pointwise order; for this family it reduces to comparing k and a."""
    return p1.k <= p2.k and p1.a <= p2.a


def compose_bounds(inner: PolyBound, outer: PolyBound) -> PolyBound:
    """Bound for running ``inner`` and then ``outer`` on its output.

    Dominates ``inner(n) + outer(inner(n))`` using
    ``(n + 1)^j <= 2^(j-1) (n^j + 1)``.
    """
    k1, a1, k2, a2 = inner.k, inner.a, outer.k, outer.a
    return PolyBound(k1 * k2, a1 + a2 + a2 * a1 ** k2 * 2 ** k2)


@dataclass(frozen=True)
class BudgetReport:
    p_prime: int
    prep: int
    exec: int
    balance_check: int
    cp_upper: int


def _ceil_log2(a: int) -> int:
    return (a - 1).bit_length()


def _ceil_root(a: int, k: int) -> int:
    """Smallest r with r**k >= a."""
    lo, hi = 1, 1
    while hi ** k < a:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k >= a:
            hi = mid
        else:
            lo = mid + 1
    return lo


def counter_budget(p: PolyBound, n: int, c: int = DEFAULT_COST_CONSTANT) -> BudgetReport:
    """Time split of the counted machine on inputs of length ``n``.

    With ``p' = (a - a%12)(n^k + 1)``: counter preparation gets 7/12 of ``p'``,
    the program itself 1/12, the balance check 4/12.
    """
    if p.a < 12:
        raise ValueError(f"counted machines need a >= 12, got {p.a}")
    p_prime = (p.a - p.a % 12) * (n ** p.k + 1)
    twelfth = p_prime // 12
    cp = max(256, c * c * p.k ** 4 * _ceil_log2(p.a) ** 2, _ceil_root(p.a, p.k))
    return BudgetReport(p_prime, 7 * twelfth, twelfth, 4 * twelfth, cp)


def exec_budget(p: PolyBound, n: int) -> int:
    return (p.a - p.a % 12) * (n ** p.k + 1) // 12


def ex_bound(p: PolyBound) -> PolyBound:
    """Bound after one padding step: degree halves, coefficient shrinks."""
    a = max(12, -(-p.a // 2 ** p.k) + 1)
    return PolyBound(-(-p.k // 2), a)


def co_bound(p: PolyBound) -> PolyBound:
    """Bound after one unpadding step: ``(b - 1) 2^(2h)`` at degree ``2h``."""
    return PolyBound(2 * p.k, (p.a - 1) * 2 ** (2 * p.k))


def padding_rounds(p: PolyBound) -> int:
    """Integer upper bound ``m`` on ``log2(a + k)``."""
    return (p.a + p.k).bit_length()


def all_bounds(max_k: int, max_a: int, min_a: int = 1) -> Iterator[PolyBound]:
    for k in range(1, max_k + 1):
        for a in range(min_a, max_a + 1):
            yield PolyBound(k, a)
