"""The restricted universal evaluator, generator words, and the compiler maps.

``ev_qc(q, encode3(serialize(w)) 11 x) = encode3(serialize(w)) 11 phi_w(x)``
for programs whose bound is below ``q``.  Every counted program factors
through this evaluator and the padding combinators; :func:`star_evaluate`
runs that factorization, and :func:`compile_beta` writes it out as a
generator word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence as Seq

from .bounds import PolyBound, compose_bounds, eval_bound, leq_bound, padding_rounds
from .machine import (
    Builtin,
    PolyProgram,
    Sequence,
    WordFunction,
    program_header,
    run_counted,
    split_program,
    try_parse_program,
)
from .padding import (
    co_program,
    contr1,
    contr1_inverse,
    ex_program,
    expand1,
    expand1_inverse,
    iterate,
    pi0,
    pi1,
    pi1_prime,
    pi1_prime_inverse,
    pi_inverse,
    recontr1,
    recontr1_inverse,
    reexpand1,
    reexpand1_inverse,
)
from .words import WordLike, all_words, concat, drop, encode3, length, split_header, to_str

DEFAULT_Q2_C = 12

GENERATORS = ("pi0", "pi1", "pi1'", "ev", "expand", "reexpand", "contr", "recontr")
CORE_GENERATORS = ("pi0", "pi1", "pi1'", "ev")

# The empty function: "11x" carries an empty header, which never parses.
EMPTY_WORD = ("ev", "pi1", "pi1")


def q2_bound(c: int = DEFAULT_Q2_C) -> PolyBound:
    if c < 12:
        raise ValueError(f"q2 needs c >= 12, got {c}")
    return PolyBound(2, c)


# ---------------------------------------------------------------------------
# evaluators

def ev_qc_counted(q: PolyBound, t: WordLike) -> tuple[Optional[WordLike], int]:
    """``ev_qc`` together with the steps the hosted program used."""
    parts = split_program(t)
    if parts is None:
        return None, 0
    w, x = parts
    if not leq_bound(w.bound, q):
        return None, 0
    r = run_counted(w, x)
    if not r.ok:
        return None, r.steps
    return concat(program_header(w), r.result), r.steps


def ev_qc(q: PolyBound, t: WordLike) -> Optional[WordLike]:
    return ev_qc_counted(q, t)[0]


def e_qc(q: PolyBound, t: WordLike) -> Optional[WordLike]:
    """Injective variant: ``header 11 x  ->  header 11 encode3(phi_w(x)) 11 x``."""
    parts = split_program(t)
    if parts is None:
        return None
    w, x = parts
    if not leq_bound(w.bound, q):
        return None
    r = run_counted(w, x)
    if not r.ok:
        return None
    return concat(program_header(w), encode3(to_str(r.result)), "11", x)


def e_projection(q: PolyBound, t: WordLike) -> Optional[WordLike]:
    """``(w, y, x)  ->  (w, y)`` when ``y`` and ``x`` balance under ``q``."""
    parts = split_program(t)
    if parts is None:
        return None
    w, rest = parts
    inner = split_header(rest)
    if inner is None:
        return None
    y, x = inner
    if len(y) > eval_bound(q, length(x)) or length(x) > eval_bound(q, len(y)):
        return None
    return concat(program_header(w), y)


def e_qc_inverse(q: PolyBound, t: WordLike) -> Optional[WordLike]:
    parts = split_program(t)
    if parts is None:
        return None
    w, rest = parts
    inner = split_header(rest)
    if inner is None:
        return None
    cand = concat(program_header(w), inner[1])
    return cand if e_qc(q, cand) == t else None


def ev_function(c: int = DEFAULT_Q2_C) -> WordFunction:
    q = q2_bound(c)
    return WordFunction(lambda t: ev_qc(q, t), PolyBound(4, 12 * c), "combinator", f"ev_q2[c={c}]")


# ---------------------------------------------------------------------------
# generators

def generator_map(token: str, c: int = DEFAULT_Q2_C) -> Callable[[WordLike], Optional[WordLike]]:
    if token == "ev":
        q = q2_bound(c)
        return lambda t: ev_qc(q, t)
    table = {
        "pi0": pi0,
        "pi1": pi1,
        "pi1'": pi1_prime,
        "expand": expand1,
        "reexpand": reexpand1,
        "contr": contr1,
        "recontr": recontr1,
    }
    if token not in table:
        raise ValueError(f"unknown generator {token!r}")
    return table[token]


def generator_inverse(token: str, c: int = DEFAULT_Q2_C) -> Optional[Callable[[WordLike], Optional[WordLike]]]:
    """Explicit inverse of a regular generator (``None`` for ``ev``)."""
    return {
        "pi0": pi_inverse("0"),
        "pi1": pi_inverse("1"),
        "pi1'": pi1_prime_inverse,
        "expand": expand1_inverse,
        "reexpand": reexpand1_inverse,
        "contr": contr1_inverse,
        "recontr": recontr1_inverse,
    }.get(token)


def apply_builtin(v: Builtin, z: WordLike) -> tuple[Optional[WordLike], int]:
    """Output and extra cost of a builtin body; the base cost is the output length."""
    if v.name == "ev":
        return ev_qc_counted(q2_bound(v.param), z)
    return generator_map(v.name)(z), 0


_BUILTIN_BOUNDS = {
    "pi0": PolyBound(1, 12),
    "pi1": PolyBound(1, 12),
    "pi1'": PolyBound(1, 12),
    "expand": PolyBound(2, 192),
    "reexpand": PolyBound(2, 192),
    "contr": PolyBound(2, 192),
    "recontr": PolyBound(2, 192),
}


def builtin_program(token: str, c: int = DEFAULT_Q2_C) -> PolyProgram:
    if token == "ev":
        return PolyProgram(Builtin("ev", c), PolyBound(4, 12 * c))
    return PolyProgram(Builtin(token), _BUILTIN_BOUNDS[token])


def parse_generator_word(text: str) -> tuple[str, ...]:
    """Whitespace-separated letters; ``tok^n`` repeats a letter ``n`` times."""
    tokens: tuple[str, ...] = ()
    for part in text.split():
        tok, caret, n = part.partition("^")
        if caret and not n.isdigit():
            raise ValueError(f"bad repetition in {part!r}")
        tokens += (tok,) * (int(n) if caret else 1)
    bad = [t for t in tokens if t not in GENERATORS]
    if bad:
        raise ValueError(f"unknown generator(s): {' '.join(bad)}")
    if not tokens:
        raise ValueError("a generator word needs at least one letter")
    return tokens


def format_generator_word(s: Seq[str]) -> str:
    return " ".join(s)


def eval_generator_word(s: Seq[str], x: WordLike, c: int = DEFAULT_Q2_C) -> Optional[WordLike]:
    """Apply the letters of ``s`` right to left; undefinedness propagates."""
    if not s:
        raise ValueError("a generator word needs at least one letter")
    i = len(s) - 1
    while i >= 0:
        tok = s[i]
        j = i
        if tok in ("pi0", "pi1"):
            while j > 0 and s[j - 1] in ("pi0", "pi1"):
                j -= 1
            x = concat("".join(t[-1] for t in s[j:i + 1]), x)
        elif tok == "pi1'":
            while j > 0 and s[j - 1] == "pi1'":
                j -= 1
            k = i - j + 1
            if length(x) < k:
                return None
            x = drop(x, k)
        else:
            x = generator_map(tok, c)(x)
            if x is None:
                return None
        i = j - 1
    return x


def generator_word_function(s: Seq[str], c: int = DEFAULT_Q2_C) -> WordFunction:
    s = tuple(s)
    return WordFunction(lambda x: eval_generator_word(s, x, c), None, "combinator", format_generator_word(s))


def equivalence_search(s1: Seq[str], s2: Seq[str], max_len: int, c: int = DEFAULT_Q2_C) -> Optional[str]:
    """First ``x`` (length-lex, ``|x| <= max_len``) where the two words disagree.

    ``None`` only means no disagreement was found up to ``max_len``.
    """
    for x in all_words(max_len):
        if eval_generator_word(s1, x, c) != eval_generator_word(s2, x, c):
            return x
    return None


# ---------------------------------------------------------------------------
# the padded factorization

def extra_rounds(p: PolyBound) -> int:
    """Additional contraction rounds that let shrinking programs through ``contr``."""
    return 1 + max((2 * p.a).bit_length().bit_length(), p.k.bit_length())


@dataclass(frozen=True)
class StarPlan:
    """Shape of the factorization of ``phi_w`` for one program ``w``.

    The affix carries ``ex^extra(w)``; then ``expand``, ``2m`` reexpands,
    the evaluator, ``2m + extra`` recontracts, ``contr``, and a final drop of
    ``drop_len`` symbols.
    """

    w: PolyProgram
    m: int
    extra: int
    start: PolyProgram
    hosted: PolyProgram
    w_prime: PolyProgram

    @property
    def affix(self) -> str:
        return program_header(self.start)

    @property
    def drop_len(self) -> int:
        return len(program_header(self.w_prime))

    @property
    def word_length(self) -> int:
        return len(self.affix) + 1 + 2 * self.m + 1 + (2 * self.m + self.extra) + 1 + self.drop_len


def star_plan(w: PolyProgram, literal: bool = False) -> StarPlan:
    m = padding_rounds(w.bound)
    extra = 0 if literal else extra_rounds(w.bound)
    n = 2 * m + 1 + extra
    hosted = iterate(ex_program, w, n)
    return StarPlan(w, m, extra, iterate(ex_program, w, extra), hosted, iterate(co_program, hosted, n))


def star_alpha(plan: StarPlan) -> Callable[[WordLike], Optional[WordLike]]:
    """Everything before the evaluator: affix, expand, reexpands."""

    def alpha(x: WordLike) -> Optional[WordLike]:
        t = expand1(concat(plan.affix, x))
        for _ in range(2 * plan.m):
            t = reexpand1(t)
        return t

    return alpha


def star_beta(plan: StarPlan) -> Callable[[WordLike], Optional[WordLike]]:
    """Everything after the evaluator: recontracts, contr, drop."""

    def beta(t: Optional[WordLike]) -> Optional[WordLike]:
        for _ in range(2 * plan.m + plan.extra):
            if t is None:
                return None
            t = recontr1(t)
        if t is None:
            return None
        t = contr1(t)
        if t is None or length(t) < plan.drop_len:
            return None
        return drop(t, plan.drop_len)

    return beta


def star_evaluate(w: PolyProgram, x: WordLike, c: int = DEFAULT_Q2_C, literal: bool = False) -> Optional[WordLike]:
    """Compute ``phi_w(x)`` through the generator factorization.

    ``literal=True`` uses exactly ``2m`` recontractions and no extra rounds;
    that variant only works for programs that do not shrink their input.
    """
    plan = star_plan(w, literal)
    t = star_alpha(plan)(x)
    if t is None:
        return None
    return star_beta(plan)(ev_qc(q2_bound(c), t))


def compile_beta(u: str, literal: bool = False) -> tuple[str, ...]:
    """Generator word computing the program serialized in ``u``.

    Malformed ``u`` yields a word for the empty function.
    """
    w = try_parse_program(u)
    if w is None:
        return EMPTY_WORD
    plan = star_plan(w, literal)
    affix = tuple("pi" + b for b in plan.affix)
    return (
        ("pi1'",) * plan.drop_len
        + ("contr",)
        + ("recontr",) * (2 * plan.m + plan.extra)
        + ("ev",)
        + ("reexpand",) * (2 * plan.m)
        + ("expand",)
        + affix
    )


def compile_alpha(s: Seq[str], c: int = DEFAULT_Q2_C) -> PolyProgram:
    """A counted program for the composite of ``s``, run as a sequence.

    Its bound folds :func:`compose_bounds` from the first-applied letter on.
    """
    if not s:
        raise ValueError("a generator word needs at least one letter")
    parts = tuple(builtin_program(tok, c) for tok in reversed(s))
    bound = parts[0].bound
    for p in parts[1:]:
        bound = compose_bounds(bound, p.bound)
    return PolyProgram(Sequence(parts), bound)


def fold_bounds(bounds: Iterable[PolyBound]) -> PolyBound:
    it = iter(bounds)
    acc = next(it)
    for b in it:
        acc = compose_bounds(acc, b)
    return acc
