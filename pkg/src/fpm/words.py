"""Binary and three-letter words, the letter encodings, and prefix codes.

Plain words are Python ``str`` over ``"01"`` (or ``"01#"`` for three-letter
words).  Words produced by the padding maps can be far too long to hold in
memory, so those are represented by :class:`LongWord`, a rope of literal
segments and symbolic zero runs.  Every helper that accepts a word accepts
either form ("word-like"); results come back as ``str`` whenever they are
short enough to materialize.
"""

from __future__ import annotations

import itertools
import re
from typing import Callable, Iterable, Iterator, Optional, Union

BINARY = "01"
TRI = "01#"

_CODE = {"0": "00", "1": "01", "#": "11"}
_DECODE = {"00": "0", "01": "1", "11": "#"}
_ENC_TABLE = str.maketrans(_CODE)

# Longest word kept as a plain string; anything longer becomes a LongWord.
MATERIALIZE_MAX = 1 << 16
# Zero runs at least this long stay symbolic inside a LongWord.
RUN_MIN = 256
# Cap on the length of a code header scanned out of a word.
HEADER_CAP = 1 << 24


class UndefinedWord(ValueError):
    """Raised by the strict decoders when the input is outside their domain."""


class ResourceLimit(RuntimeError):
    """A desk-scale cap was hit; the result would otherwise be wrong."""


def is_binary(w: str) -> bool:
    return all(c in BINARY for c in w)


def is_tri(w: str) -> bool:
    return all(c in TRI for c in w)


def render(w: "WordLike") -> str:
    """Human-readable rendering; the empty word prints as ε."""
    if isinstance(w, LongWord):
        return repr(w)
    return w if w else "ε"


# ---------------------------------------------------------------------------
# letter encodings

def encode3(w: str) -> str:
    """Encode a word over {0,1,#} as 00/01/11 blocks."""
    if not is_tri(w):
        raise ValueError(f"not a word over {{0,1,#}}: {w!r}")
    return w.translate(_ENC_TABLE)


def decode3(u: str) -> Optional[str]:
    """Inverse of :func:`encode3`; ``None`` outside {00,01,11}*."""
    if len(u) % 2:
        return None
    out = []
    for i in range(0, len(u), 2):
        c = _DECODE.get(u[i:i + 2])
        if c is None:
            return None
        out.append(c)
    return "".join(out)


def hash_affix(x: str) -> str:
    return x + "#"


def hash_strip(t: str) -> Optional[str]:
    if t.endswith("#") and is_binary(t[:-1]):
        return t[:-1]
    return None


def pair(first: str, second: "WordLike") -> "WordLike":
    """Self-delimiting pair encoding ``encode3(first) 11 second``."""
    return concat(encode3(first), "11", second)


_HEADER_RE = re.compile(r"(?:0[01])*")


def split_header(t: "WordLike") -> Optional[tuple[str, "WordLike"]]:
    """Split ``encode3(h) 11 rest`` into ``(h, rest)``; ``None`` if ``t`` has no such form.

    ``h`` is binary: the header may only contain 00/01 blocks.
    """
    head = t if isinstance(t, str) else t.literal_head()
    end = _HEADER_RE.match(head).end()
    if end + 2 <= len(head):
        if head[end:end + 2] != "11":
            return None
    elif isinstance(t, LongWord) and length(t) > len(head):
        # the next block reaches into a symbolic zero run
        if end < len(head) and head[end] == "1":
            return None
        raise ResourceLimit("code header longer than the scan cap")
    else:
        return None
    if end // 2 > HEADER_CAP:
        raise ResourceLimit("code header longer than the scan cap")
    return head[1:end:2], drop(t, end + 2)


def unpair(t: "WordLike") -> Optional[tuple[str, "WordLike"]]:
    return split_header(t)


# ---------------------------------------------------------------------------
# prefix codes and right ideals

def is_prefix_code(words: Iterable[str]) -> bool:
    ws = sorted(set(words))
    # in sorted order a prefix sits directly before some extension of it
    return all(not b.startswith(a) for a, b in zip(ws, ws[1:]))


def all_words(max_len: int, min_len: int = 0) -> Iterator[str]:
    """Binary words in length-lexicographic order."""
    for n in range(min_len, max_len + 1):
        for bits in itertools.product(BINARY, repeat=n):
            yield "".join(bits)


def words_of_length(n: int) -> Iterator[str]:
    return all_words(n, n)


def minimal_prefix_code(member: Callable[[str], bool], max_len: int) -> frozenset[str]:
    """Generators of a right ideal: members none of whose strict prefixes are members."""
    code = set()
    for x in all_words(max_len):
        if member(x) and not any(member(x[:i]) for i in range(len(x))):
            code.add(x)
    return frozenset(code)


def shortest_prefix_in(y: str, member: Callable[[str], bool]) -> Optional[str]:
    for i in range(len(y) + 1):
        if member(y[:i]):
            return y[:i]
    return None


# ---------------------------------------------------------------------------
# long words

Segment = Union[str, int]


class LongWord:
    """A binary word stored as literal segments and symbolic zero runs.

    An ``int`` segment ``n`` stands for ``0^n``.  Instances are only created
    for words longer than ``MATERIALIZE_MAX``; shorter results are plain
    strings, so equal words of either form never need cross-type comparison.
    """

    __slots__ = ("segments", "length")

    def __init__(self, segments: tuple[Segment, ...], total: int):
        self.segments = segments
        self.length = total

    def literal_head(self) -> str:
        first = self.segments[0]
        return first if isinstance(first, str) else ""

    def runs(self) -> Iterator[tuple[str, int]]:
        """Maximal runs ``(bit, count)`` of the word."""
        cur, n = None, 0
        for seg in self.segments:
            if isinstance(seg, int):
                parts: Iterable[tuple[str, int]] = (("0", seg),)
            else:
                parts = ((m.group()[0], len(m.group())) for m in _RUN_RE.finditer(seg))
            for b, k in parts:
                if b == cur:
                    n += k
                else:
                    if cur is not None:
                        yield cur, n
                    cur, n = b, k
        if cur is not None:
            yield cur, n

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LongWord):
            return self.length == other.length and list(self.runs()) == list(other.runs())
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = []
        for seg in self.segments:
            if isinstance(seg, int):
                parts.append(f"0^{seg}")
            elif len(seg) > 24:
                parts.append(f"{seg[:10]}…({len(seg)})…{seg[-10:]}")
            else:
                parts.append(seg)
        return "LongWord[" + " ".join(parts) + "]"


_RUN_RE = re.compile(r"0+|1+")

WordLike = Union[str, LongWord]


def length(w: WordLike) -> int:
    return w.length if isinstance(w, LongWord) else len(w)


def _segments(w: WordLike) -> tuple[Segment, ...]:
    if isinstance(w, LongWord):
        return w.segments
    return (w,) if w else ()


def zeros(n: int) -> WordLike:
    if n < 0:
        raise ValueError("negative run length")
    if n <= MATERIALIZE_MAX:
        return "0" * n
    return LongWord((n,), n)


def concat(*parts: WordLike) -> WordLike:
    segs: list[Segment] = []
    total = 0
    for p in parts:
        for s in _segments(p):
            if isinstance(s, int) and s < RUN_MIN:
                s = "0" * s
            total += s if isinstance(s, int) else len(s)
            if segs and isinstance(s, str) and isinstance(segs[-1], str):
                segs[-1] += s
            elif segs and isinstance(s, int) and isinstance(segs[-1], int):
                segs[-1] += s
            else:
                segs.append(s)
    if total <= MATERIALIZE_MAX:
        return "".join(s if isinstance(s, str) else "0" * s for s in segs)
    return LongWord(tuple(segs), total)


def drop(w: WordLike, k: int) -> WordLike:
    """Remove the first ``k`` symbols (caller checks ``k <= length(w)``)."""
    if isinstance(w, str):
        return w[k:]
    out: list[Segment] = []
    for seg in w.segments:
        n = seg if isinstance(seg, int) else len(seg)
        if k >= n:
            k -= n
            continue
        if k:
            seg = seg - k if isinstance(seg, int) else seg[k:]
            k = 0
        out.append(seg)
    return concat(*(s if isinstance(s, str) else LongWord((s,), s) for s in out))


def leading_zeros(w: WordLike) -> int:
    n = 0
    for seg in _segments(w):
        if isinstance(seg, int):
            n += seg
            continue
        stripped = seg.lstrip("0")
        n += len(seg) - len(stripped)
        if stripped:
            break
    return n


def startswith(w: WordLike, prefix: str) -> bool:
    if isinstance(w, str):
        return w.startswith(prefix)
    if length(w) < len(prefix):
        return False
    return head(w, len(prefix)) == prefix


def head(w: WordLike, n: int) -> str:
    """The first ``n`` symbols as a plain string."""
    if isinstance(w, str):
        return w[:n]
    out = []
    for seg in w.segments:
        if n <= 0:
            break
        piece = "0" * min(seg, n) if isinstance(seg, int) else seg[:n]
        out.append(piece)
        n -= len(piece)
    return "".join(out)


def to_str(w: WordLike) -> str:
    if isinstance(w, str):
        return w
    raise ResourceLimit(f"word of length {w.length} is too long to materialize")
