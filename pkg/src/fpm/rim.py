"""Right-ideal morphisms given by finite tables, and Green-relation checks.

A table ``{p: v}`` over a prefix code maps ``p z`` to ``v z``.  Composition,
inversion through shortest image prefixes, and the bounded Green-relation
tests all work directly on tables; the checks also accept any callable
partial function on words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from .machine import WordFunction
from .words import all_words, is_binary, is_prefix_code, shortest_prefix_in

PartialMap = Callable[[str], Optional[str]]

DEFAULT_GREEN_LEN = 6


@dataclass(frozen=True)
class RimTable:
    entries: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries))
        object.__setattr__(self, "entries", entries)
        words = [p for p, _ in entries]
        if len(set(words)) != len(words) or not is_prefix_code(words):
            raise ValueError(f"domain words do not form a prefix code: {words}")
        if not all(is_binary(p) and is_binary(v) for p, v in entries):
            raise ValueError("table words must be binary")

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "RimTable":
        return cls(tuple(mapping.items()))

    def __call__(self, x: str) -> Optional[str]:
        return apply_rim(self, x)

    @property
    def domc(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.entries)

    def images(self) -> list[str]:
        return [v for _, v in self.entries]

    def image_contains(self, y: str) -> bool:
        return any(y.startswith(v) for v in self.images())

    def imc(self) -> frozenset[str]:
        """Generators of the image ideal: images with no other image as a proper prefix."""
        vs = set(self.images())
        return frozenset(v for v in vs if not any(u != v and v.startswith(u) for u in vs))

    def function(self, name: str = "") -> WordFunction:
        return WordFunction(self, None, "table", name or format_table(self, inline=True))

    def __str__(self) -> str:
        return format_table(self, inline=True)


ZERO = RimTable(())


def apply_rim(h: RimTable, x: str) -> Optional[str]:
    for p, v in h.entries:
        if x.startswith(p):
            return v + x[len(p):]
    return None


def arrow(v: str, u: str) -> RimTable:
    """``(v <- u)``: ``u x -> v x``."""
    return RimTable(((u, v),))


IDENTITY = arrow("", "")


def compose_rim(g: RimTable, h: RimTable) -> RimTable:
    """Table of ``g`` after ``h``."""
    out: dict[str, str] = {}
    for p, v in h.entries:
        for q, w in g.entries:
            if v.startswith(q):
                out[p] = w + v[len(q):]
                break
            if q.startswith(v):
                out[p + q[len(v):]] = w
    return RimTable.of(out)


def invert_table(f: RimTable) -> RimTable:
    """Inverse through shortest image prefixes: ``v -> u`` for each ``v`` in ``imC(f)``."""
    out = {}
    for v in f.imc():
        out[v] = min((p for p, w in f.entries if w == v), key=lambda p: (len(p), p))
    return RimTable.of(out)


def table_point_inverse(f: RimTable) -> WordFunction:
    """A preimage of each ``y`` in ``Im(f)`` (not necessarily a morphism)."""

    def inv(y: str) -> Optional[str]:
        for p, v in f.entries:
            if y.startswith(v):
                return p + y[len(v):]
        return None

    return WordFunction(inv, None, "combinator", f"point_inverse({f})")


# ---------------------------------------------------------------------------
# text format

def format_table(h: RimTable, inline: bool = False) -> str:
    rows = [f"{p or 'ε'} -> {v or 'ε'}" for p, v in h.entries]
    if inline:
        return "{" + ", ".join(rows) + "}"
    return "\n".join(rows) + ("\n" if rows else "")


def parse_table(text: str) -> RimTable:
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ValueError(f"expected 'p -> q', got {line!r}")
        p, v = (s.strip().replace("ε", "") for s in line.split("->", 1))
        if p in out:
            raise ValueError(f"duplicate domain word {p!r}")
        out[p] = v
    return RimTable.of(out)


# ---------------------------------------------------------------------------
# constructions

def pp0_pair(code: Iterable[str], p0: str) -> tuple[WordFunction, WordFunction]:
    """The maps ``pi`` and ``pi'`` attached to a prefix code and one of its words."""
    code = frozenset(code)
    if not is_prefix_code(code):
        raise ValueError("not a prefix code")
    if p0 not in code:
        raise ValueError(f"{p0!r} is not in the code")
    others = code - {p0}

    def in_others(x: str) -> bool:
        return any(x.startswith(p) for p in others)

    def pi(x: str) -> str:
        return x if in_others(x) else p0 + x

    def pi_prime(x: str) -> Optional[str]:
        if in_others(x):
            return x
        if x.startswith(p0):
            return x[len(p0):]
        return None

    return (
        WordFunction(pi, None, "combinator", f"pi[{p0}]"),
        WordFunction(pi_prime, None, "combinator", f"pi'[{p0}]"),
    )


def rim_inverse_from_point_inverse(f: PartialMap, f0_inv: PartialMap, im_member: Callable[[str], bool]) -> WordFunction:
    """``f'(p z) = f0_inv(p) z`` with ``p`` the shortest prefix of the argument in ``Im(f)``."""

    def inv(y: str) -> Optional[str]:
        p = shortest_prefix_in(y, im_member)
        if p is None:
            return None
        x = f0_inv(p)
        return None if x is None else x + y[len(p):]

    return WordFunction(inv, None, "combinator", "shortest_prefix_inverse")


def psi_lift(f: PartialMap) -> WordFunction:
    """``0 -> ε`` and ``1x -> 1 f(x)``."""

    def psi(x: str) -> Optional[str]:
        if x == "0":
            return ""
        if x.startswith("1"):
            y = f(x[1:])
            return None if y is None else "1" + y
        return None

    return WordFunction(psi, None, "combinator", "psi")


def j0_witness(f: RimTable, x0: str) -> Optional[RimTable]:
    """``(ε <- y0) f (x0 <- ε)`` for ``y0 = f(x0)``; equals the identity."""
    y0 = f(x0)
    if y0 is None:
        return None
    return compose_rim(arrow("", y0), compose_rim(f, arrow(x0, "")))


def total_injective(h: PartialMap, max_len: int) -> bool:
    seen = set()
    for x in all_words(max_len):
        y = h(x)
        if y is None or y in seen:
            return False
        seen.add(y)
    return True


# ---------------------------------------------------------------------------
# Green relations at bounded length

@dataclass(frozen=True)
class RReport:
    eq_holds: bool
    image_included: bool

    @property
    def consistent(self) -> bool:
        return self.eq_holds == self.image_included


@dataclass(frozen=True)
class LReport:
    eq_holds: bool
    partition_coarser: bool

    @property
    def consistent(self) -> bool:
        return self.eq_holds == self.partition_coarser


def _image_contains(r: PartialMap, y: str, radius: int) -> bool:
    contains = getattr(r, "image_contains", None)
    if contains is not None:
        return contains(y)
    return any(r(x) == y for x in all_words(radius))


def _then(g: PartialMap, x: Optional[str]) -> Optional[str]:
    return None if x is None else g(x)


def green_leq_r(f: PartialMap, r: PartialMap, r_inv: PartialMap, max_len: int = DEFAULT_GREEN_LEN,
                radius: Optional[int] = None) -> RReport:
    """``f = r r' f`` versus ``Im(f) ⊆ Im(r)``, over inputs of length ``<= max_len``.

    Image inclusion is checked on the images of those inputs.  ``radius`` caps the preimage search when ``r`` is not a table.
    """
    eq, incl = True, True
    for x in all_words(max_len):
        y = f(x)
        if _then(r, _then(r_inv, y)) != y:
            eq = False
        if y is not None and not _image_contains(r, y, radius if radius is not None else 2 * max_len):
            incl = False
    return RReport(eq, incl)


def green_leq_l(f: PartialMap, r: PartialMap, r_inv: PartialMap, max_len: int = DEFAULT_GREEN_LEN) -> LReport:
    """``f = f r' r`` versus ``mod f <= mod r``, over inputs of length ``<= max_len``.

    ``mod f <= mod r`` is read as: ``Dom(f) ⊆ Dom(r)``, and inputs with the
    same ``r``-value are either both outside ``Dom(f)`` or have the same
    ``f``-value.  Pairs are taken from the tested range together with each
    input's canonical partner ``r'(r(x))``.
    """
    eq, coarser = True, True
    classes: dict[str, list[str]] = {}
    for x in all_words(max_len):
        fx, rx = f(x), r(x)
        if _then(f, _then(r_inv, rx)) != fx:
            eq = False
        if fx is not None and rx is None:
            coarser = False
        if rx is not None:
            members = classes.setdefault(rx, [])
            members.append(x)
            partner = r_inv(rx)
            if partner is not None and partner not in members:
                members.append(partner)
    for members in classes.values():
        values = {f(x) for x in members}
        if len(values) > 1:
            coarser = False
    return LReport(eq, coarser)
