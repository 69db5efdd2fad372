"""Turing machines with a polynomial step counter, and their serialization.

A :class:`PolyProgram` couples a program body with a bound ``a*n^k + a`` and a
padding depth.  The body is a multi-tape :class:`TMProgram`, a
:class:`Builtin` generator, or a :class:`Sequence` of polynomial programs run
one after the other.  :func:`run_counted` executes a polynomial program under
the counter discipline: the body gets ``p'(n)/12`` steps, and an output ``y``
is only returned when ``|x| <= p(|y|)``.

Tape conventions: every tape starts with an endmarker ``>`` in cell 0, heads
start on cell 1, tape 0 holds the input, and the output is read from the last
tape (cells 1.. up to the first blank) when the machine reaches its halt
state.  Stopping anywhere else means no output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional, Union

from .bounds import PolyBound, eval_bound, exec_budget
from .words import (
    LongWord,
    ResourceLimit,
    WordLike,
    concat,
    decode3,
    drop,
    encode3,
    leading_zeros,
    length,
    split_header,
    startswith,
    zeros,
)

BLANK = "_"
END = ">"
SYMBOLS = "01_>"
ANY = "*"
SAME = "="
MOVES = "LSR"

# Hard cap on simulated steps per run, independent of the counter.
MAX_STEPS = 10 ** 7

TIMEOUT = "timeout"
BALANCE = "balanceViolation"
NO_OUTPUT = "noOutput"
MALFORMED = "malformedInput"


class MalformedProgram(ValueError):
    pass


# ---------------------------------------------------------------------------
# program bodies

@dataclass(frozen=True)
class Row:
    state: int
    reads: str
    next: int
    writes: str
    moves: str


def _expand_row(row: Row) -> Iterable[tuple[str, str, str]]:
    """Concrete ``(reads, writes, moves)`` triples covered by a pattern row.

    Wildcard reads never produce a row that writes over or moves left of an
    endmarker; such combinations are skipped.  Explicit endmarker reads must
    obey the rule or the row is rejected.
    """
    choices = [SYMBOLS if r == ANY else r for r in row.reads]
    for reads in itertools.product(*choices):
        writes, ok = [], True
        for i, r in enumerate(reads):
            w = r if row.writes[i] == SAME else row.writes[i]
            if r == END and (w != END or row.moves[i] == "L"):
                if row.reads[i] == END:
                    raise MalformedProgram(f"row {row} overwrites or leaves an endmarker")
                ok = False
                break
            if r != END and w == END:
                raise MalformedProgram(f"row {row} writes an endmarker")
            writes.append(w)
        if ok:
            yield "".join(reads), "".join(writes), row.moves


@dataclass(frozen=True)
class TMProgram:
    """Multi-tape machine; rows may use ``*`` (any symbol) in reads and ``=`` (keep) in writes."""

    tapes: int
    n_states: int
    start: int
    halt: int
    rows: tuple[Row, ...]
    table: dict = field(init=False, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if self.tapes < 1 or self.n_states < 1:
            raise MalformedProgram("need at least one tape and one state")
        for q in (self.start, self.halt):
            if not 0 <= q < self.n_states:
                raise MalformedProgram(f"state {q} out of range")
        table: dict = {}
        for row in self.rows:
            _check_row(row, self.tapes, self.n_states, SYMBOLS + ANY, SYMBOLS + SAME)
            for reads, writes, moves in _expand_row(row):
                key = (row.state, reads)
                if key in table:
                    raise MalformedProgram(f"two transitions for state {row.state} reading {reads!r}")
                table[key] = (row.next, writes, moves)
        object.__setattr__(self, "table", table)


def _check_row(row: Row, tapes: int, n_states: int, read_syms: str, write_syms: str) -> None:
    if not (0 <= row.state < n_states and 0 <= row.next < n_states):
        raise MalformedProgram(f"row {row} references an unknown state")
    if not (len(row.reads) == len(row.writes) == len(row.moves) == tapes):
        raise MalformedProgram(f"row {row} does not match {tapes} tapes")
    if any(c not in read_syms for c in row.reads) or any(c not in write_syms for c in row.writes):
        raise MalformedProgram(f"row {row} uses an unknown symbol")
    if any(c not in MOVES for c in row.moves):
        raise MalformedProgram(f"row {row} uses an unknown move")


BUILTINS = ("pi0", "pi1", "pi1'", "expand", "reexpand", "contr", "recontr", "ev")


@dataclass(frozen=True)
class Builtin:
    """One of the fixed generator maps, used as a program body.

    ``param`` is the constant ``c`` of ``q2(n) = c n^2 + c`` for ``ev`` and 0
    otherwise.
    """

    name: str
    param: int = 0

    def __post_init__(self) -> None:
        if self.name not in BUILTINS:
            raise MalformedProgram(f"unknown builtin {self.name!r}")
        if (self.name == "ev") != (self.param > 0):
            raise MalformedProgram("only ev takes a parameter")


@dataclass(frozen=True)
class Sequence:
    """Run ``parts[0]``, then ``parts[1]`` on its output, and so on."""

    parts: tuple["PolyProgram", ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise MalformedProgram("empty sequence")


Body = Union[TMProgram, Builtin, Sequence]


@dataclass(frozen=True)
class PolyProgram:
    v: Body
    bound: PolyBound
    pad_depth: int = 0

    def __post_init__(self) -> None:
        if self.bound.a < 12:
            raise MalformedProgram(f"polynomial programs need a >= 12, got {self.bound.a}")
        if self.pad_depth < 0:
            raise MalformedProgram("negative padding depth")


# ---------------------------------------------------------------------------
# running

@dataclass(frozen=True)
class RunOutcome:
    result: Optional[WordLike]
    reason: Optional[str]
    steps: int

    @property
    def ok(self) -> bool:
        return self.reason is None

    def __str__(self) -> str:
        if self.ok:
            return self.result if isinstance(self.result, str) else repr(self.result)
        return f"REJECT({self.reason})"


def simulate(v: TMProgram, x: str, budget: int) -> RunOutcome:
    """Run ``v`` on ``x`` for at most ``budget`` steps."""
    tapes = [[END] + list(x)] + [[END] for _ in range(v.tapes - 1)]
    heads = [1] * v.tapes
    state, steps = v.start, 0
    table = v.table
    while state != v.halt:
        reads = "".join(t[h] if h < len(t) else BLANK for t, h in zip(tapes, heads))
        move = table.get((state, reads))
        if move is None:
            return RunOutcome(None, NO_OUTPUT, steps)
        if steps >= budget:
            return RunOutcome(None, TIMEOUT, steps)
        if steps >= MAX_STEPS:
            raise ResourceLimit(f"run exceeded {MAX_STEPS} steps with budget {budget} left open")
        state, writes, moves = move
        for i, (w, m) in enumerate(zip(writes, moves)):
            t, h = tapes[i], heads[i]
            if h >= len(t):
                t.extend(BLANK * (h - len(t) + 1))
            t[h] = w
            heads[i] = h + (m == "R") - (m == "L")
        steps += 1
    out = []
    for c in tapes[-1][1:]:
        if c == BLANK:
            break
        out.append(c)
    return RunOutcome("".join(out), None, steps)


def _run_body(w: PolyProgram, z: WordLike, budget: int) -> RunOutcome:
    v = w.v
    if isinstance(v, TMProgram):
        if isinstance(z, LongWord):
            raise ResourceLimit("machine input too long to simulate")
        return simulate(v, z, budget)
    if isinstance(v, Builtin):
        from .evaluator import apply_builtin

        out, extra = apply_builtin(v, z)
        if out is None:
            return RunOutcome(None, NO_OUTPUT, extra)
        steps = length(out) + extra
        if steps > budget:
            return RunOutcome(None, TIMEOUT, budget)
        return RunOutcome(out, None, steps)
    steps, cur = 0, z
    for part in v.parts:
        sub = run_counted(part, cur)
        steps += sub.steps
        if not sub.ok:
            return RunOutcome(None, sub.reason, steps)
        if steps > budget:
            return RunOutcome(None, TIMEOUT, budget)
        cur = sub.result
    return RunOutcome(cur, None, steps)


def run_counted(w: PolyProgram, x: WordLike) -> RunOutcome:
    """Execute ``w`` on ``x`` as a Turing machine with polynomial counter.

    A padded program (``pad_depth > 0``) expects ``0^h 11 z``, runs its body on
    ``z`` and answers ``0^h 11 y``.  The step budget and the balance check are
    taken against the whole padded input and output.
    """
    n = length(x)
    budget = exec_budget(w.bound, n)
    if w.pad_depth:
        h = leading_zeros(x)
        rest = drop(x, h)
        if not startswith(rest, "11"):
            return RunOutcome(None, MALFORMED, 0)
        core = _run_body(w, drop(rest, 2), budget)
        if not core.ok:
            return core
        y = concat(zeros(h), "11", core.result)
    else:
        core = _run_body(w, x, budget)
        if not core.ok:
            return core
        y = core.result
    if n > eval_bound(w.bound, length(y)):
        return RunOutcome(None, BALANCE, core.steps)
    return RunOutcome(y, None, core.steps)


# ---------------------------------------------------------------------------
# word functions

@dataclass(frozen=True, eq=False)
class WordFunction:
    """An evaluable partial function on binary words with a declared bound.

    ``None`` means undefined.  ``tag`` records where the function came from:
    ``"program"``, ``"table"`` or ``"combinator"``.
    """

    evaluator: Callable[[WordLike], Optional[WordLike]]
    bound: Optional[PolyBound] = None
    tag: str = "combinator"
    name: str = ""

    def __call__(self, x: WordLike) -> Optional[WordLike]:
        return self.evaluator(x)

    def __repr__(self) -> str:
        return f"WordFunction({self.name or self.tag})"

    def balanced_at(self, x: str) -> bool:
        """Spot-check the two-sided balance condition at ``x``."""
        y = self(x)
        if y is None or self.bound is None:
            return True
        return length(y) <= self.bound(len(x)) and len(x) <= self.bound(length(y))


def program_function(w: PolyProgram, name: str = "") -> WordFunction:
    def ev(x: WordLike) -> Optional[WordLike]:
        return run_counted(w, x).result

    return WordFunction(ev, w.bound, "program", name)


def compose(*fs: Callable[[WordLike], Optional[WordLike]], name: str = "") -> WordFunction:
    """``compose(f, g, h)(x) = f(g(h(x)))`` with undefinedness propagating."""

    def ev(x: WordLike) -> Optional[WordLike]:
        for f in reversed(fs):
            if x is None:
                return None
            x = f(x)
        return x

    return WordFunction(ev, None, "combinator", name)


# ---------------------------------------------------------------------------
# serialization

_SYM3 = {"0": "000", "1": "001", "_": "010", ">": "011", "*": "100", "=": "101"}
_MOVE2 = {"L": "00", "S": "01", "R": "10"}


def unary(n: int) -> str:
    return "1" * n + "0"


def binary(n: int) -> str:
    return format(n, "b")


def grammar_bits(v: Body) -> str:
    """The binary body grammar ``G(v)`` (see docs/grammar.md)."""
    if isinstance(v, TMProgram):
        out = ["0", unary(v.tapes), unary(v.n_states), unary(v.start), unary(v.halt), unary(len(v.rows))]
        for r in v.rows:
            out.append(unary(r.state))
            out.extend(_SYM3[c] for c in r.reads)
            out.append(unary(r.next))
            out.extend(_SYM3[c] for c in r.writes)
            out.extend(_MOVE2[c] for c in r.moves)
        return "".join(out)
    if isinstance(v, Builtin):
        bits = "10" + unary(BUILTINS.index(v.name))
        if v.name == "ev":
            c = binary(v.param)
            bits += unary(len(c)) + c
        return bits
    out = ["11", unary(len(v.parts))]
    for part in v.parts:
        s = serialize_program(part)
        out.append(unary(len(s)) + s)
    return "".join(out)


@lru_cache(maxsize=4096)
def serialize_program(w: PolyProgram) -> str:
    tri = "#".join((grammar_bits(w.v), binary(w.bound.k), binary(w.bound.a), binary(w.pad_depth)))
    return encode3(tri)


class _Reader:
    def __init__(self, bits: str):
        self.bits, self.pos = bits, 0

    def take(self, n: int) -> str:
        if self.pos + n > len(self.bits):
            raise MalformedProgram("truncated program")
        s = self.bits[self.pos:self.pos + n]
        self.pos += n
        return s

    def unary(self) -> int:
        end = self.bits.find("0", self.pos)
        if end < 0:
            raise MalformedProgram("unterminated unary field")
        n = end - self.pos
        self.pos = end + 1
        return n

    def sym(self, allowed: str) -> str:
        code = self.take(3)
        for c, b in _SYM3.items():
            if b == code and c in allowed:
                return c
        raise MalformedProgram(f"bad symbol code {code}")

    def move(self) -> str:
        code = self.take(2)
        for c, b in _MOVE2.items():
            if b == code:
                return c
        raise MalformedProgram(f"bad move code {code}")


def _parse_body(r: _Reader) -> Body:
    if r.take(1) == "0":
        tapes, n_states, start, halt, n_rows = (r.unary() for _ in range(5))
        rows = []
        for _ in range(n_rows):
            state = r.unary()
            reads = "".join(r.sym(SYMBOLS + ANY) for _ in range(tapes))
            nxt = r.unary()
            writes = "".join(r.sym(SYMBOLS + SAME) for _ in range(tapes))
            moves = "".join(r.move() for _ in range(tapes))
            rows.append(Row(state, reads, nxt, writes, moves))
        return TMProgram(tapes, n_states, start, halt, tuple(rows))
    if r.take(1) == "0":
        idx = r.unary()
        if idx >= len(BUILTINS):
            raise MalformedProgram("unknown builtin index")
        param = 0
        if BUILTINS[idx] == "ev":
            param = _parse_nat(r.take(r.unary()))
        return Builtin(BUILTINS[idx], param)
    parts = []
    for _ in range(r.unary()):
        parts.append(parse_program(r.take(r.unary())))
    return Sequence(tuple(parts))


def _parse_nat(s: str) -> int:
    if not s or (len(s) > 1 and s[0] == "0") or any(c not in "01" for c in s):
        raise MalformedProgram(f"bad binary number {s!r}")
    return int(s, 2)


@lru_cache(maxsize=4096)
def parse_program(u: str) -> PolyProgram:
    """Inverse of :func:`serialize_program`; raises :class:`MalformedProgram`."""
    tri = decode3(u)
    if tri is None:
        raise MalformedProgram("not a 00/01/11 block word")
    fields = tri.split("#")
    if len(fields) != 4:
        raise MalformedProgram("expected four #-separated fields")
    body, k, a, d = fields
    r = _Reader(body)
    try:
        v = _parse_body(r)
    except (ValueError, RecursionError) as exc:
        raise MalformedProgram(str(exc)) from exc
    if r.pos != len(body):
        raise MalformedProgram("trailing bits after program body")
    try:
        return PolyProgram(v, PolyBound(_parse_nat(k), _parse_nat(a)), _parse_nat(d))
    except ValueError as exc:
        raise MalformedProgram(str(exc)) from exc


def try_parse_program(u: str) -> Optional[PolyProgram]:
    try:
        return parse_program(u)
    except MalformedProgram:
        return None


@lru_cache(maxsize=1024)
def program_header(w: PolyProgram) -> str:
    """``encode3(serialize(w)) 11``, the header the evaluator expects."""
    return encode3(serialize_program(w)) + "11"


def split_program(t: WordLike) -> Optional[tuple[PolyProgram, WordLike]]:
    """Parse ``encode3(serialize(w)) 11 x`` into ``(w, x)``."""
    parts = split_header(t)
    if parts is None:
        return None
    w = try_parse_program(parts[0])
    return None if w is None else (w, parts[1])


# ---------------------------------------------------------------------------
# nondeterministic choice machines

@dataclass(frozen=True)
class ChoiceProgram:
    """Machine with at most two transitions per configuration.

    When two transitions apply, the next bit of the choice sequence picks one
    (0 selects the row listed first).  A run accepts when it reaches
    ``accept`` having consumed the choice sequence exactly.
    """

    tapes: int
    n_states: int
    start: int
    accept: int
    rows: tuple[Row, ...]
    bound: PolyBound
    table: dict = field(init=False, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        table: dict = {}
        for row in self.rows:
            _check_row(row, self.tapes, self.n_states, SYMBOLS + ANY, SYMBOLS + SAME)
            for reads, writes, moves in _expand_row(row):
                opts = table.setdefault((row.state, reads), [])
                opts.append((row.next, writes, moves))
                if len(opts) > 2:
                    raise MalformedProgram("more than binary nondeterminism")
        object.__setattr__(self, "table", table)


def choice_run(m: ChoiceProgram, x: str, s: str) -> bool:
    tapes = [[END] + list(x)] + [[END] for _ in range(m.tapes - 1)]
    heads = [1] * m.tapes
    state, used = m.start, 0
    for _ in range(eval_bound(m.bound, len(x))):
        if state == m.accept:
            return used == len(s)
        reads = "".join(t[h] if h < len(t) else BLANK for t, h in zip(tapes, heads))
        opts = m.table.get((state, reads), [])
        if not opts:
            return False
        if len(opts) == 2:
            if used == len(s):
                return False
            opt = opts[int(s[used])]
            used += 1
        else:
            opt = opts[0]
        state, writes, moves = opt
        for i, (w, mv) in enumerate(zip(writes, moves)):
            t, h = tapes[i], heads[i]
            if h >= len(t):
                t.extend(BLANK * (h - len(t) + 1))
            t[h] = w
            heads[i] = h + (mv == "R") - (mv == "L")
    return state == m.accept and used == len(s)


def f_m(m: ChoiceProgram) -> WordFunction:
    """``encode3(x) 11 s  ->  x`` when ``m`` accepts ``x`` with choices ``s``."""

    def ev(t: WordLike) -> Optional[str]:
        parts = split_header(t)
        if parts is None:
            return None
        x, s = parts
        if isinstance(s, LongWord):
            return None
        return x if choice_run(m, x, s) else None

    return WordFunction(ev, PolyBound(m.bound.k, m.bound.a + 4), "combinator", "f_M")


def choice_to_program(m: ChoiceProgram) -> PolyProgram:
    """A deterministic counted program computing ``f_m(m)``.

    Tapes: 0 holds ``encode3(x) 11 s``, 1..r are the choice machine's tapes,
    the last is the output.  The header is decoded onto tape 1 and the output
    tape at once, tape 1 is rewound, then the choice machine is simulated with
    tape 0's head walking over ``s``.
    """
    r = m.tapes
    tapes = r + 2
    rest = ANY * (r - 1)
    keep = SAME * (r - 1)
    stay = "S" * (r - 1)
    A0, AZ, AO, B = 0, 1, 2, 3
    base, halt = 4, 4 + m.n_states
    rows = [
        Row(A0, "0" + ANY + rest + ANY, AZ, SAME + SAME + keep + SAME, "RS" + stay + "S"),
        Row(A0, "1" + ANY + rest + ANY, AO, SAME + SAME + keep + SAME, "RS" + stay + "S"),
        Row(AO, "1" + ANY + rest + ANY, B, SAME + SAME + keep + SAME, "RS" + stay + "S"),
        Row(B, ANY + "0" + rest + ANY, B, SAME * tapes, "SL" + stay + "S"),
        Row(B, ANY + "1" + rest + ANY, B, SAME * tapes, "SL" + stay + "S"),
        Row(B, ANY + BLANK + rest + ANY, B, SAME * tapes, "SL" + stay + "S"),
        Row(B, ANY + END + rest + ANY, base + m.start, SAME * tapes, "SR" + stay + "S"),
    ]
    for bit in "01":
        rows.append(Row(AZ, bit + ANY + rest + ANY, A0, SAME + bit + keep + bit, "RR" + stay + "R"))
    for (q, reads), opts in sorted(m.table.items()):
        if q == m.accept:
            continue
        if len(opts) == 1:
            nq, writes, moves = opts[0]
            rows.append(Row(base + q, ANY + reads + ANY, base + nq, SAME + writes + SAME, "S" + moves + "S"))
        else:
            for bit, (nq, writes, moves) in zip("01", opts):
                rows.append(Row(base + q, bit + reads + ANY, base + nq, SAME + writes + SAME, "R" + moves + "S"))
    rows.append(Row(base + m.accept, BLANK + ANY * r + ANY, halt, SAME * tapes, "S" * tapes))
    v = TMProgram(tapes, halt + 1, A0, halt, tuple(rows))
    return PolyProgram(v, PolyBound(m.bound.k, 12 * (m.bound.a + 2)))


# ---------------------------------------------------------------------------
# text format

def _split_row(line: str) -> tuple[str, str, str, str, str]:
    left, right = line.split("->")
    state, reads = left.split()
    nxt, writes, moves = right.split()
    return state, reads, nxt, writes, moves


def parse_program_text(text: str) -> Union[PolyProgram, ChoiceProgram]:
    """Read a ``.tm`` description (see docs/formats.md).

    A file with an ``accept`` line describes a choice machine; one with a
    ``builtin`` line describes a generator program; anything else is a
    deterministic machine.
    """
    settings: dict[str, list[str]] = {}
    rows: list[tuple[str, str, str, str, str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            rows.append(_split_row(line))
        else:
            key, *vals = line.split()
            settings[key] = vals
    k, a = (int(v) for v in settings.get("bound", ["1", "12"]))
    bound = PolyBound(k, a)
    if "builtin" in settings:
        name, *param = settings["builtin"]
        return PolyProgram(Builtin(name, int(param[0]) if param else 0), bound, int(settings.get("pad", ["0"])[0]))
    tapes = int(settings.get("tapes", ["1"])[0])
    start = settings.get("start", ["s"])[0]
    final = settings.get("accept", settings.get("halt", ["h"]))[0]
    names = {start: 0}
    for q, _, n, _, _ in rows:
        names.setdefault(q, len(names))
        names.setdefault(n, len(names))
    names.setdefault(final, len(names))
    body = tuple(Row(names[q], r, names[n], w, m) for q, r, n, w, m in rows)
    if "accept" in settings:
        return ChoiceProgram(tapes, len(names), 0, names[final], body, bound)
    v = TMProgram(tapes, len(names), 0, names[final], body)
    return PolyProgram(v, bound, int(settings.get("pad", ["0"])[0]))


def format_program_text(w: PolyProgram) -> str:
    lines = [f"bound {w.bound.k} {w.bound.a}"]
    if w.pad_depth:
        lines.append(f"pad {w.pad_depth}")
    v = w.v
    if isinstance(v, Builtin):
        lines.append(f"builtin {v.name}" + (f" {v.param}" if v.param else ""))
    elif isinstance(v, TMProgram):
        lines += [f"tapes {v.tapes}", f"start q{v.start}", f"halt q{v.halt}"]
        lines += [f"q{r.state} {r.reads} -> q{r.next} {r.writes} {r.moves}" for r in v.rows]
    else:
        raise ValueError("sequence programs have no text form; use the serialized form")
    return "\n".join(lines) + "\n"


def to_hex(bits: str) -> str:
    """``<length>:<hex>``, keeping leading zeros recoverable."""
    return f"{len(bits)}:{int(bits, 2):x}" if bits else "0:"


def from_hex(text: str) -> str:
    n, _, h = text.strip().partition(":")
    n = int(n)
    return format(int(h, 16), f"0{n}b") if n else ""
