"""Inverses by bounded enumeration, inverse checks, and reduction checkers.

An :class:`EnumOracle` answers the two membership questions the inverse
algorithms need ("is ``y`` an image?", "is ``y`` an image of something in
``z A*``?") by exhaustive search over inputs no longer than the balance
bound allows, capped by ``max_probe``.  Answers under a cap are flagged as
truncated rather than silently trusted.

Dictionary order puts a word before its proper extensions and otherwise
compares at the first differing bit; Python's ``str`` ordering on ``"01"``
words is exactly this order.
"""

from __future__ import annotations

import bisect
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .bounds import PolyBound, eval_bound
from .circuits import lp_alpha, lp_beta, weak_turing_invert
from .machine import WordFunction, program_header, split_program
from .words import (
    WordLike,
    all_words,
    concat,
    decode3,
    drop,
    encode3,
    hash_affix,
    hash_strip,
    leading_zeros,
    length,
    split_header,
    startswith,
    zeros,
)

DEFAULT_MAX_PROBE = 10

PartialMap = Callable[[WordLike], Optional[WordLike]]
Candidates = Callable[[WordLike, int], Iterable[WordLike]]


def default_max_probe() -> int:
    return int(os.environ.get("FPM_MAX_PROBE", DEFAULT_MAX_PROBE))


class OracleInconsistency(RuntimeError):
    pass


@dataclass(frozen=True)
class Membership:
    found: bool
    truncated: bool

    @property
    def inconclusive(self) -> bool:
        return self.truncated and not self.found

    def __bool__(self) -> bool:
        return self.found


def sorted_words(max_len: int) -> list[str]:
    return sorted(all_words(max_len))


class EnumOracle:
    """Exhaustive preimage search for ``f`` within ``min(q(|y|), max_probe)``.

    Without ``candidates`` all binary words up to ``max_probe`` are indexed
    once.  With ``candidates(y, radius)`` the oracle only tries the supplied
    words, which must come in dictionary order; this serves functions whose
    preimages share a long fixed prefix (encoded or padded inputs).
    """

    def __init__(self, f: PartialMap, q: Optional[PolyBound] = None, max_probe: Optional[int] = None,
                 candidates: Optional[Candidates] = None):
        self.f = f
        self.q = q if q is not None else getattr(f, "bound", None)
        self.max_probe = default_max_probe() if max_probe is None else max_probe
        self.candidates = candidates
        self._index: Optional[dict[str, list[str]]] = None
        self._cand_cache: dict = {}

    def radius(self, y: WordLike) -> int:
        if self.q is None:
            return self.max_probe
        return min(eval_bound(self.q, length(y)), self.max_probe)

    def truncated(self, y: WordLike) -> bool:
        return self.q is None or eval_bound(self.q, length(y)) > self.max_probe

    def _build_index(self) -> dict[str, list[str]]:
        if self._index is None:
            index: dict[str, list[str]] = {}
            for x in sorted_words(self.max_probe):
                y = self.f(x)
                if isinstance(y, str):
                    index.setdefault(y, []).append(x)
            self._index = index
        return self._index

    def preimages(self, y: WordLike) -> list:
        """``f^{-1}(y)`` within the radius, in dictionary order."""
        r = self.radius(y)
        if self.candidates is not None:
            key = (y if isinstance(y, str) else y.segments, r)
            if key not in self._cand_cache:
                self._cand_cache[key] = [x for x in self.candidates(y, r) if self.f(x) == y]
            return self._cand_cache[key]
        if not isinstance(y, str):
            return []
        return [x for x in self._build_index().get(y, []) if len(x) <= r]

    def query(self, y: WordLike, z: str = "") -> Membership:
        pre = self.preimages(y)
        if z and self.candidates is None:
            i = bisect.bisect_left(pre, z)
            found = i < len(pre) and pre[i].startswith(z)
        else:
            found = any(startswith(x, z) for x in pre)
        return Membership(found, self.truncated(y))


def image_member(o: EnumOracle, y: WordLike) -> bool:
    return o.query(y).found


def extension_member(o: EnumOracle, y: WordLike, z: str) -> bool:
    return o.query(y, z).found


def fprime_select(o: EnumOracle, direction: str, y: WordLike) -> Optional[WordLike]:
    """Dictionary-least (``min``) or greatest (``max``) preimage of ``y``.

    ``min`` walks down from ``ε`` taking the 0-branch whenever it still
    contains a preimage and stops at the first preimage met.  ``max`` takes
    the 1-branch, else the 0-branch, and stops only when neither branch holds
    a preimage.  Oracles with a candidate list pick the extremum from the list.
    """
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be min or max, got {direction!r}")
    if not image_member(o, y):
        return None
    if o.candidates is not None:
        pre = o.preimages(y)
        return pre[0] if direction == "min" else pre[-1]
    z = ""
    for _ in range(o.radius(y) + 2):
        if direction == "min":
            if o.f(z) == y:
                return z
            z += "0" if extension_member(o, y, z + "0") else "1"
        else:
            if extension_member(o, y, z + "1"):
                z += "1"
            elif extension_member(o, y, z + "0"):
                z += "0"
            else:
                if o.f(z) != y:
                    raise OracleInconsistency(f"no preimage below {z!r}")
                return z
    raise OracleInconsistency("preimage search ran past the radius")


def fprime_ith(o: EnumOracle, i: int, y: WordLike) -> Optional[WordLike]:
    """The ``i``-th preimage in dictionary order, or the last one when there are fewer."""
    if i < 1:
        raise ValueError("i counts from 1")
    pre = o.preimages(y)
    if not pre:
        return None
    return pre[min(i, len(pre)) - 1]


def select_function(o: EnumOracle, how: str, i: int = 1) -> WordFunction:
    """``how`` is ``min``, ``max`` or ``ith``."""
    if how == "ith":
        return WordFunction(lambda y: fprime_ith(o, i, y), None, "combinator", f"f'_{i}")
    return WordFunction(lambda y: fprime_select(o, how, y), None, "combinator", f"f'_{how}")


def verify_inverse(f: PartialMap, f_inv: PartialMap, max_len: int = 6,
                   inputs: Optional[Iterable[WordLike]] = None) -> bool:
    """``f(f_inv(f(x))) = f(x)`` for every tested ``x`` in ``Dom(f)``."""
    for x in (all_words(max_len) if inputs is None else inputs):
        y = f(x)
        if y is None:
            continue
        x2 = f_inv(y)
        if x2 is None or f(x2) != y:
            return False
    return True


# ---------------------------------------------------------------------------
# simulations and reductions

@dataclass(frozen=True)
class SimulationWitness:
    beta: PartialMap
    alpha: PartialMap


@dataclass(frozen=True)
class SimulationReport:
    ok: bool
    counterexample: Optional[WordLike] = None


def _chain(x: Optional[WordLike], *fs: PartialMap) -> Optional[WordLike]:
    for f in fs:
        if x is None:
            return None
        x = f(x)
    return x


def check_simulation(f1: PartialMap, f2: PartialMap, w: SimulationWitness, max_len: int = 6,
                     inputs: Optional[Iterable[WordLike]] = None) -> SimulationReport:
    """Does ``beta f2 alpha`` agree with ``f1`` (values and definedness)?"""
    for x in (all_words(max_len) if inputs is None else inputs):
        if _chain(x, w.alpha, f2, w.beta) != f1(x):
            return SimulationReport(False, x)
    return SimulationReport(True)


@dataclass(frozen=True)
class Transport:
    """Turns any inverse of the target into an inverse of the source.

    Sandwich transports compute ``beta(g'(alpha(y)))``.  Weak transports
    instead use the inverse's domain as a query oracle before one call.
    """

    kind: str
    alpha: PartialMap
    beta: PartialMap
    weak: bool = False
    weak_apply: Optional[Callable[[PartialMap, WordLike], Optional[WordLike]]] = None

    def apply(self, g_inv: PartialMap) -> WordFunction:
        if self.weak:
            return WordFunction(lambda y: self.weak_apply(g_inv, y), None, "combinator", f"{self.kind}-transport")
        return WordFunction(lambda y: _chain(y, self.alpha, g_inv, self.beta), None, "combinator",
                            f"{self.kind}-transport")

    @property
    def maps(self) -> tuple:
        return (self.alpha, self.beta)


@dataclass
class ReductionReport:
    simulation: SimulationReport
    samples_verified: int
    failing_samples: list[str] = field(default_factory=list)
    uniform: bool = True

    @property
    def ok(self) -> bool:
        return self.simulation.ok and not self.failing_samples


def check_inversive_reduction(f1: PartialMap, f2: PartialMap, w: SimulationWitness, transport: Transport,
                              samples: Sequence[PartialMap], max_len: int = 6,
                              inputs: Optional[Iterable[WordLike]] = None,
                              target_inputs: Optional[Iterable[WordLike]] = None) -> ReductionReport:
    """Check ``f1 <= f2`` by simulation and transport each sampled inverse of ``f2``.

    Raises ``ValueError`` when a sample is not an inverse of ``f2`` on
    ``target_inputs``.  ``uniform`` holds when every transported inverse was
    built from the same ``(alpha, beta)`` pair.
    """
    inputs = list(all_words(max_len) if inputs is None else inputs)
    target_inputs = None if target_inputs is None else list(target_inputs)
    sim = check_simulation(f1, f2, w, inputs=inputs)
    failing, maps = [], set()
    for k, g_inv in enumerate(samples):
        name = getattr(g_inv, "name", "") or f"sample {k}"
        if not verify_inverse(f2, g_inv, max_len, target_inputs):
            raise ValueError(f"{name} is not an inverse of the target")
        maps.add(tuple(id(m) for m in transport.maps))
        if not verify_inverse(f1, transport.apply(g_inv), inputs=inputs):
            failing.append(name)
    return ReductionReport(sim, len(samples), failing, len(maps) <= 1)


# ---------------------------------------------------------------------------
# transports

def encoded_function(f: PartialMap) -> WordFunction:
    """``f^C``: ``encode3(x) 11 v  ->  encode3(f(x)) 11 v``."""

    def fc(t: WordLike) -> Optional[WordLike]:
        parts = split_header(t)
        if parts is None:
            return None
        y = f(parts[0])
        return None if y is None else concat(encode3(y), "11", parts[1])

    return WordFunction(fc, None, "combinator", "f^C")


def encoded_candidates(t: WordLike, radius: int) -> Iterable[WordLike]:
    parts = split_header(t)
    if parts is None:
        return []
    return [concat(encode3(x), "11", parts[1]) for x in sorted_words(radius)]


def encode_hash(x: str) -> str:
    return encode3(hash_affix(x))


def decode_hash(t: WordLike) -> Optional[str]:
    if not isinstance(t, str):
        return None
    s = decode3(t)
    return None if s is None else hash_strip(s)


def evaluator_candidates(t: WordLike, radius: int) -> Iterable[WordLike]:
    """Possible preimages under the evaluator: same header (and pad), any payload."""
    parts = split_program(t)
    if parts is None:
        return []
    w, rest = parts
    hdr = program_header(w)
    if w.pad_depth:
        h = leading_zeros(rest)
        if not startswith(drop(rest, h), "11"):
            return []
        return [concat(hdr, zeros(h), "11", x) for x in sorted_words(radius)]
    return [concat(hdr, x) for x in sorted_words(radius)]


def lift_candidates(u: WordLike, radius: int) -> Iterable[str]:
    """Preimages of ``0^m 1 y`` under the lift have the form ``0^|y| 1 x`` with ``|x| = m``."""
    if not isinstance(u, str) or "1" not in u:
        return []
    y = lp_beta(u)
    m = len(u) - len(y) - 1
    return ["0" * len(y) + "1" + x for x in sorted(all_words(m, m))]


def inverse_transport(kind: str, **context) -> Transport:
    """Transport for one of the proved reductions.

    * ``encoding``: source ``f``, target ``f^C``; ``alpha = encode3(x#)``,
      ``beta = strip(decode3(.))``.
    * ``evaluator``: source ``phi_w``, target the evaluator; ``context['plan']``
      is the program's :class:`~fpm.evaluator.StarPlan`.
    * ``circuit``: source a length-preserving ``f``, target ``ev_circ``;
      ``context['alpha']`` builds ``(C_|y|, y)``.
    * ``lpLift``: source ``f``, target its lift; ``context['pf']`` bounds
      preimage lengths.  This transport is weak.
    """
    if kind == "encoding":
        return Transport(kind, encode_hash, decode_hash)
    if kind == "evaluator":
        from .evaluator import star_alpha, star_beta

        plan = context["plan"]
        return Transport(kind, star_alpha(plan), star_beta(plan))
    if kind == "circuit":
        def second(t: WordLike) -> Optional[WordLike]:
            parts = split_header(t)
            return None if parts is None else parts[1]

        return Transport(kind, context["alpha"], second)
    if kind == "lpLift":
        f, pf = context["f"], context["pf"]

        def weak(ell_inv: PartialMap, y: WordLike) -> Optional[WordLike]:
            domain = getattr(ell_inv, "domain", None) or (lambda u: ell_inv(u) is not None)
            return weak_turing_invert(f, pf, domain, ell_inv, y)

        return Transport(kind, lp_alpha(f), lp_beta, weak=True, weak_apply=weak)
    raise ValueError(f"unknown transport kind {kind!r}")
