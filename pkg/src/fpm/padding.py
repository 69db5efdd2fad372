"""Affix maps and the padding combinators used to shrink program bounds.

All four combinators act on words ``encode3(serialize(w)) 11 ...``: ``expand``
and ``reexpand`` grow a zero pad and push the header program through
:func:`ex_program`; ``contr`` and ``recontr`` shrink the pad and push it
through :func:`co_program`.  Each combinator also has an explicit inverse on
its image, so all of them are regular.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Optional

from .bounds import PolyBound, co_bound, ex_bound
from .machine import MalformedProgram, PolyProgram, WordFunction, program_header, split_program
from .words import WordLike, concat, drop, leading_zeros, length, startswith, zeros


def affix(v: str) -> WordFunction:
    """``pi_v``: prepend ``v``."""
    return WordFunction(lambda x: concat(v, x), None, "combinator", f"pi_{v or 'ε'}")


def drop_prefix(k: int) -> WordFunction:
    """``pi'_k``: remove the first ``k`` symbols."""
    return WordFunction(lambda t: drop(t, k) if length(t) >= k else None, None, "combinator", f"pi'_{k}")


def pi0(t: WordLike) -> WordLike:
    return concat("0", t)


def pi1(t: WordLike) -> WordLike:
    return concat("1", t)


def pi1_prime(t: WordLike) -> Optional[WordLike]:
    return drop(t, 1) if length(t) else None


# ---------------------------------------------------------------------------
# program transforms

def ex_program(w: PolyProgram) -> PolyProgram:
    return PolyProgram(w.v, ex_bound(w.bound), w.pad_depth + 1)


def co_program(w: PolyProgram) -> PolyProgram:
    if w.pad_depth < 1:
        raise MalformedProgram("co needs a padded program")
    return PolyProgram(w.v, co_bound(w.bound), w.pad_depth - 1)


def ex_preimage(u: PolyProgram) -> Optional[PolyProgram]:
    """Some ``w`` with ``ex_program(w) == u``, or ``None``."""
    if u.pad_depth < 1:
        return None
    k = 2 * u.bound.k
    a = 12 if u.bound.a == 12 else (u.bound.a - 1) * 2 ** k
    return PolyProgram(u.v, PolyBound(k, a), u.pad_depth - 1)


def co_preimage(u: PolyProgram) -> Optional[PolyProgram]:
    """The unique ``w`` with ``co_program(w) == u``, or ``None``."""
    k, a = u.bound.k, u.bound.a
    if k % 2:
        return None
    q, r = divmod(a, 4 ** (k // 2))
    if r or q + 1 < 12:
        return None
    return PolyProgram(u.v, PolyBound(k // 2, q + 1), u.pad_depth + 1)


def iterate(transform, w: PolyProgram, times: int) -> PolyProgram:
    for _ in range(times):
        w = transform(w)
    return w


# ---------------------------------------------------------------------------
# pad sizes

def expand_pad(n: int) -> int:
    """Pad for a payload of length ``n``; ``|0^N 11 x| = (2(n+1))^2``."""
    return 4 * n * n + 7 * n + 2


def reexpand_pad(h: int) -> int:
    return 4 * h * h + 8 * h + 2


def recontr_pad(h: int) -> int:
    return max(1, isqrt(h + 2) // 2 - 1)


@dataclass(frozen=True)
class PaddedWord:
    """``header 11 0^pad 11 payload`` with ``header`` the encoded program."""

    program: PolyProgram
    pad: int
    payload: WordLike

    def word(self) -> WordLike:
        return concat(program_header(self.program), zeros(self.pad), "11", self.payload)

    def render(self) -> str:
        hdr = program_header(self.program)[:-2]
        shown = hdr if len(hdr) <= 24 else f"{hdr[:10]}…({len(hdr)})"
        payload = self.payload if isinstance(self.payload, str) else repr(self.payload)
        return f"[{shown}]|11|0^{self.pad}|11|{payload}"


def parse_padded(t: WordLike) -> Optional[PaddedWord]:
    parts = split_program(t)
    if parts is None:
        return None
    w, rest = parts
    h = leading_zeros(rest)
    after = drop(rest, h)
    if not startswith(after, "11"):
        return None
    return PaddedWord(w, h, drop(after, 2))


# ---------------------------------------------------------------------------
# combinators

def expand1(t: WordLike) -> Optional[WordLike]:
    parts = split_program(t)
    if parts is None:
        return None
    w, x = parts
    return PaddedWord(ex_program(w), expand_pad(length(x)), x).word()


def reexpand1(t: WordLike) -> Optional[WordLike]:
    p = parse_padded(t)
    if p is None:
        return None
    return PaddedWord(ex_program(p.program), reexpand_pad(p.pad), p.payload).word()


def contr1(t: WordLike) -> Optional[WordLike]:
    p = parse_padded(t)
    if p is None or p.program.pad_depth < 1 or p.pad > expand_pad(length(p.payload)):
        return None
    return concat(program_header(co_program(p.program)), p.payload)


def recontr1(t: WordLike) -> Optional[WordLike]:
    p = parse_padded(t)
    if p is None or p.program.pad_depth < 1:
        return None
    return PaddedWord(co_program(p.program), recontr_pad(p.pad), p.payload).word()


# explicit inverses on the images

def expand1_inverse(t: WordLike) -> Optional[WordLike]:
    p = parse_padded(t)
    if p is None or p.pad != expand_pad(length(p.payload)):
        return None
    w = ex_preimage(p.program)
    return None if w is None else concat(program_header(w), p.payload)


def reexpand1_inverse(t: WordLike) -> Optional[WordLike]:
    p = parse_padded(t)
    if p is None:
        return None
    r = isqrt(p.pad + 2)
    if r * r != p.pad + 2 or r % 2:
        return None
    w = ex_preimage(p.program)
    return None if w is None else PaddedWord(w, r // 2 - 1, p.payload).word()


def contr1_inverse(t: WordLike) -> Optional[WordLike]:
    parts = split_program(t)
    if parts is None:
        return None
    w = co_preimage(parts[0])
    return None if w is None else PaddedWord(w, 0, parts[1]).word()


def recontr1_inverse(t: WordLike) -> Optional[WordLike]:
    p = parse_padded(t)
    if p is None:
        return None
    w = co_preimage(p.program)
    return None if w is None else PaddedWord(w, reexpand_pad(p.pad), p.payload).word()


def pi_inverse(bit: str):
    def inv(t: WordLike) -> Optional[WordLike]:
        return drop(t, 1) if startswith(t, bit) else None

    return inv


def pi1_prime_inverse(t: WordLike) -> WordLike:
    return concat("0", t)
