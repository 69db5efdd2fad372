"""Length-preserving boolean circuits, CNF formulas, and the length-preserving lift.

Circuits are evaluated bit-parallel: each wire's truth table over all ``2^n``
inputs is one Python integer, with input ``x`` at bit position ``int(x, 2)``
(so ``x_0`` is the most significant input bit).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .bounds import PolyBound, eval_bound, leq_bound
from .machine import WordFunction, compose, program_header, run_counted, split_program
from .words import pair, split_header, words_of_length

OPS = ("AND", "OR", "NOT", "IN", "CONST")
_ARITY = {"AND": 2, "OR": 2, "NOT": 1}


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    op: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    arity: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        for i, g in enumerate(self.gates):
            if g.op not in OPS:
                raise ValueError(f"unknown gate {g.op}")
            if g.op in _ARITY:
                if len(g.args) != _ARITY[g.op] or any(not 0 <= a < i for a in g.args):
                    raise ValueError(f"gate g{i} must reference earlier gates")
            elif g.op == "IN":
                if len(g.args) != 1 or not 0 <= g.args[0] < self.arity:
                    raise ValueError(f"gate g{i} reads a missing input")
            elif len(g.args) != 1 or g.args[0] not in (0, 1):
                raise ValueError(f"gate g{i} is not a constant bit")
        if len(self.outputs) != self.arity:
            raise ValueError("a length-preserving circuit needs one output per input")
        if any(not 0 <= o < len(self.gates) for o in self.outputs):
            raise ValueError("output references a missing gate")


def _var_table(n: int, j: int) -> int:
    b = 1 << (n - 1 - j)
    t, width = ((1 << b) - 1) << b, 2 * b
    while width < 1 << n:
        t |= t << width
        width *= 2
    return t


@lru_cache(maxsize=256)
def output_tables(c: Circuit) -> tuple[int, ...]:
    """Truth table of each output over all ``2^arity`` inputs."""
    n = c.arity
    full = (1 << (1 << n)) - 1
    vals: list[int] = []
    for g in c.gates:
        if g.op == "AND":
            vals.append(vals[g.args[0]] & vals[g.args[1]])
        elif g.op == "OR":
            vals.append(vals[g.args[0]] | vals[g.args[1]])
        elif g.op == "NOT":
            vals.append(full ^ vals[g.args[0]])
        elif g.op == "IN":
            vals.append(_var_table(n, g.args[0]))
        else:
            vals.append(full if g.args[0] else 0)
    return tuple(vals[o] for o in c.outputs)


def evaluate(c: Circuit, x: str) -> str:
    if len(x) != c.arity:
        raise ArityError(f"circuit has arity {c.arity}, input has length {len(x)}")
    vals: list[int] = []
    for g in c.gates:
        if g.op == "AND":
            vals.append(vals[g.args[0]] & vals[g.args[1]])
        elif g.op == "OR":
            vals.append(vals[g.args[0]] | vals[g.args[1]])
        elif g.op == "NOT":
            vals.append(1 - vals[g.args[0]])
        elif g.op == "IN":
            vals.append(int(x[g.args[0]]))
        else:
            vals.append(g.args[0])
    return "".join(str(vals[o]) for o in c.outputs)


def ev_circ(c: Circuit, x: str) -> tuple[Circuit, str]:
    return c, evaluate(c, x)


# ---------------------------------------------------------------------------
# synthesis

class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = []
        self.index: dict[Gate, int] = {}
        self.memo: dict[tuple[int, int], int] = {}

    def gate(self, op: str, *args: int) -> int:
        g = Gate(op, args)
        if g not in self.index:
            self.index[g] = len(self.gates)
            self.gates.append(g)
        return self.index[g]

    def node(self, j: int, t: int) -> int:
        """Gate computing the table ``t`` over variables ``j..n-1``."""
        size = 1 << (self.n - j)
        if t == 0:
            return self.gate("CONST", 0)
        if t == (1 << size) - 1:
            return self.gate("CONST", 1)
        key = (j, t)
        if key in self.memo:
            return self.memo[key]
        half = size // 2
        t0, t1 = t & ((1 << half) - 1), t >> half
        if t0 == t1:
            out = self.node(j + 1, t0)
        else:
            x = self.gate("IN", j)
            full = (1 << half) - 1
            if t0 == 0 and t1 == full:
                out = x
            elif t0 == full and t1 == 0:
                out = self.gate("NOT", x)
            else:
                hi = self.gate("AND", x, self.node(j + 1, t1))
                lo = self.gate("AND", self.gate("NOT", x), self.node(j + 1, t0))
                out = self.gate("OR", hi, lo)
        self.memo[key] = out
        return out


def circuit_from_tables(n: int, tables: list[int]) -> Circuit:
    b = _Builder(n)
    outs = tuple(b.node(0, t) for t in tables)
    return Circuit(n, tuple(b.gates), outs)


def synthesize_circuit(f: Callable[[str], Optional[str]], n: int) -> Circuit:
    """Circuit agreeing with ``f`` on all of ``A^n`` (Shannon expansion of its truth table)."""
    tables = [0] * n
    for idx, x in enumerate(words_of_length(n)):
        y = f(x)
        if y is None:
            raise ValueError(f"function undefined at {x!r}")
        if len(y) != n:
            raise ValueError(f"function is not length-preserving at {x!r}")
        for i, bit in enumerate(y):
            if bit == "1":
                tables[i] |= 1 << idx
    return circuit_from_tables(n, tables)


def preimage_mask(c: Circuit, y: str) -> int:
    if len(y) != c.arity:
        raise ArityError(f"circuit has arity {c.arity}, target has length {len(y)}")
    full = (1 << (1 << c.arity)) - 1
    m = full
    for t, bit in zip(output_tables(c), y):
        m &= t if bit == "1" else full ^ t
    return m


def invert_circuit_brute(c: Circuit, y: str, select: str = "min", i: int = 1) -> Optional[str]:
    """A preimage of ``y``: the least (``min``), greatest (``max``) or ``i``-th (clamped)."""
    m = preimage_mask(c, y)
    if not m:
        return None
    if select == "min":
        idx = (m & -m).bit_length() - 1
    elif select == "max":
        idx = m.bit_length() - 1
    elif select == "ith":
        for _ in range(i - 1):
            rest = m & (m - 1)
            if not rest:
                break
            m = rest
        idx = (m & -m).bit_length() - 1
    else:
        raise ValueError(f"unknown selection {select!r}")
    return format(idx, f"0{c.arity}b") if c.arity else ""


# ---------------------------------------------------------------------------
# formats

def format_circuit(c: Circuit) -> str:
    lines = [f"arity {c.arity}"]
    for i, g in enumerate(c.gates):
        if g.op in ("IN", "CONST"):
            lines.append(f"g{i} = {g.op} {g.args[0]}")
        else:
            lines.append(f"g{i} = {g.op} " + " ".join(f"g{a}" for a in g.args))
    lines.append("OUT " + " ".join(f"g{o}" for o in c.outputs))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    gates: list[Gate] = []
    names: dict[str, int] = {}
    outputs: Optional[tuple[int, ...]] = None
    arity: Optional[int] = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "arity":
            arity = int(tok[1])
        elif tok[0] == "OUT":
            outputs = tuple(names[t] for t in tok[1:])
        elif len(tok) >= 3 and tok[1] == "=":
            op = tok[2]
            if op in ("IN", "CONST"):
                args: tuple[int, ...] = (int(tok[3]),)
            else:
                args = tuple(names[t] for t in tok[3:])
            names[tok[0]] = len(gates)
            gates.append(Gate(op, args))
        else:
            raise ValueError(f"cannot parse circuit line {raw!r}")
    if outputs is None:
        raise ValueError("missing OUT line")
    if arity is None:
        arity = len(outputs)
    return Circuit(arity, tuple(gates), outputs)


def _nat(n: int) -> str:
    b = format(n, "b")
    return "1" * len(b) + "0" + b


_OPCODE = {"AND": "000", "OR": "001", "NOT": "010", "IN": "011", "CONST": "100"}


@lru_cache(maxsize=256)
def circuit_bits(c: Circuit) -> str:
    """Binary encoding: self-delimiting counts, then fixed-width gate references."""
    width = max(1, len(c.gates).bit_length())
    out = [_nat(c.arity), _nat(len(c.gates))]
    for g in c.gates:
        out.append(_OPCODE[g.op])
        if g.op == "CONST":
            out.append(str(g.args[0]))
        else:
            out.extend(format(a, f"0{width}b") for a in g.args)
    out.extend(format(o, f"0{width}b") for o in c.outputs)
    return "".join(out)


@lru_cache(maxsize=256)
def parse_circuit_bits(bits: str) -> Optional[Circuit]:
    pos = 0

    def nat() -> int:
        nonlocal pos
        end = bits.find("0", pos)
        if end < 0:
            raise ValueError
        k = end - pos
        val = bits[end + 1:end + 1 + k]
        if len(val) != k or not val:
            raise ValueError
        pos = end + 1 + k
        return int(val, 2)

    def take(k: int) -> str:
        nonlocal pos
        if pos + k > len(bits):
            raise ValueError
        pos += k
        return bits[pos - k:pos]

    try:
        arity, count = nat(), nat()
        width = max(1, count.bit_length())
        ops = {v: k for k, v in _OPCODE.items()}
        gates = []
        for _ in range(count):
            op = ops[take(3)]
            if op == "CONST":
                args: tuple[int, ...] = (int(take(1)),)
            else:
                args = tuple(int(take(width), 2) for _ in range(_ARITY.get(op, 1)))
            gates.append(Gate(op, args))
        outputs = tuple(int(take(width), 2) for _ in range(arity))
        if pos != len(bits):
            return None
        return Circuit(arity, tuple(gates), outputs)
    except (ValueError, KeyError):
        return None


def ev_circ_word(t: str) -> Optional[str]:
    """``ev_circ`` on pair encodings ``encode3(bits(C)) 11 x``."""
    parts = split_header(t)
    if parts is None:
        return None
    c = parse_circuit_bits(parts[0])
    if c is None or len(parts[1]) != c.arity:
        return None
    return pair(parts[0], evaluate(c, parts[1]))


def ev_circ_function() -> WordFunction:
    return WordFunction(ev_circ_word, PolyBound(1, 12), "combinator", "ev_circ")


class CircuitFamily:
    """Circuits ``C_n`` for a length-preserving function, synthesized on demand."""

    def __init__(self, f: Callable[[str], Optional[str]]):
        self.f = f
        self._cache: dict[int, Circuit] = {}

    def __call__(self, n: int) -> Circuit:
        if n not in self._cache:
            self._cache[n] = synthesize_circuit(self.f, n)
        return self._cache[n]


def circ_reduce(f: Callable[[str], Optional[str]]) -> tuple[WordFunction, WordFunction, CircuitFamily]:
    """``alpha(x) = (C_|x|, x)`` and ``beta(C, y) = y``, so ``f = beta ev_circ alpha``."""
    family = CircuitFamily(f)

    def alpha(x: str) -> str:
        return pair(circuit_bits(family(len(x))), x)

    def beta(t: str) -> Optional[str]:
        parts = split_header(t)
        return None if parts is None else parts[1]

    return (
        WordFunction(alpha, None, "combinator", "circ_alpha"),
        WordFunction(beta, PolyBound(1, 12), "combinator", "circ_beta"),
        family,
    )


def ev_circ_inverse(select: str = "min", i: int = 1) -> WordFunction:
    """Brute-force inverse of ``ev_circ`` on pair encodings."""

    def inv(t: str) -> Optional[str]:
        parts = split_header(t)
        if parts is None:
            return None
        c = parse_circuit_bits(parts[0])
        if c is None or len(parts[1]) != c.arity:
            return None
        x = invert_circuit_brute(c, parts[1], select, i)
        return None if x is None else pair(parts[0], x)

    return WordFunction(inv, None, "combinator", f"ev_circ_inverse[{select}]")


# ---------------------------------------------------------------------------
# CNF formulas

@dataclass(frozen=True)
class CnfFormula:
    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for cl in self.clauses:
            if len(cl) > 3:
                raise ValueError("clauses have at most three literals")
            if any(lit == 0 or abs(lit) > self.n_vars for lit in cl):
                raise ValueError(f"clause {cl} references a missing variable")


def formula_eval(b: CnfFormula, tau: str) -> int:
    """Value of ``b`` under ``tau``; literal ``+i`` is ``x_{i-1}``, ``-i`` its negation."""
    if len(tau) != b.n_vars:
        raise ArityError(f"formula has {b.n_vars} variables, assignment has length {len(tau)}")
    for cl in b.clauses:
        if not any((tau[abs(l) - 1] == "1") == (l > 0) for l in cl):
            return 0
    return 1


def critical_formula_map(b: CnfFormula, tau: str) -> tuple[CnfFormula, int]:
    return b, formula_eval(b, tau)


def parse_dimacs(text: str) -> CnfFormula:
    n, clauses, cur = None, [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            n = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    if n is None:
        n = max((abs(l) for cl in clauses for l in cl), default=0)
    return CnfFormula(n, tuple(clauses))


def format_dimacs(b: CnfFormula) -> str:
    lines = [f"p cnf {b.n_vars} {len(b.clauses)}"]
    lines += [" ".join(map(str, cl)) + " 0" for cl in b.clauses]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the length-preserving lift

def lp_lift(f: Callable[[str], Optional[str]]) -> WordFunction:
    """``0^n 1 x -> 0^|x| 1 f(x)`` when ``n = |f(x)|``."""

    def ell(u: str) -> Optional[str]:
        n = len(u) - len(u.lstrip("0"))
        if n == len(u):
            return None
        x = u[n + 1:]
        y = f(x)
        if y is None or len(y) != n:
            return None
        return "0" * len(x) + "1" + y

    return WordFunction(ell, None, "combinator", "lp_lift")


def lp_alpha(f: Callable[[str], Optional[str]]) -> WordFunction:
    def alpha(x: str) -> Optional[str]:
        y = f(x)
        return None if y is None else "0" * len(y) + "1" + x

    return WordFunction(alpha, None, "combinator", "lp_alpha")


def lp_beta(u: str) -> Optional[str]:
    """``0^n 1 z -> z``."""
    n = len(u) - len(u.lstrip("0"))
    return None if n == len(u) else u[n + 1:]


def totalized(f: Callable[[str], Optional[str]]) -> Callable[[str], str]:
    """``f`` with undefined values replaced by ``0^|x|``; for a lifted map that word is never an image."""

    def g(x: str) -> str:
        y = f(x)
        return "0" * len(x) if y is None else y

    return g


def weak_turing_invert(f: Callable[[str], Optional[str]], pf: PolyBound, ell_inv_domain: Callable[[str], bool],
                       ell_inv: Callable[[str], Optional[str]], y: str) -> Optional[str]:
    """A shortest preimage of ``y`` from domain queries and one call to an inverse of the lift.

    Queries ``0^m 1 y`` for ``m = 0, 1, ..., pf(|y|)``; the first ``m`` in
    the inverse's domain is the length of the returned preimage.
    """
    for m in range(eval_bound(pf, len(y)) + 1):
        u = "0" * m + "1" + y
        if ell_inv_domain(u):
            v = ell_inv(u)
            return None if v is None else lp_beta(v)
    return None


class LiftCircuitInverse:
    """Inverse of a lifted map through circuits: ``u -> invert(C_|u|, u)``."""

    def __init__(self, f: Callable[[str], Optional[str]], select: str = "min", i: int = 1):
        self.family = CircuitFamily(totalized(lp_lift(f)))
        self.select, self.i = select, i

    def domain(self, u: str) -> bool:
        return bool(preimage_mask(self.family(len(u)), u)) and "1" in u

    def __call__(self, u: str) -> Optional[str]:
        if "1" not in u:
            return None
        return invert_circuit_brute(self.family(len(u)), u, self.select, self.i)


# ---------------------------------------------------------------------------
# critical pair

def critical_pair(i: int, q: PolyBound) -> WordFunction:
    """``e_i(w, x) = (w, phi_w(x))`` when ``x`` and ``phi_w(x)`` start with ``i``, have equal
    length and ``p_w <= q``; ``(w, 0^|x|)`` otherwise."""
    bit = str(i)

    def e(t: str) -> Optional[str]:
        parts = split_program(t)
        if parts is None:
            return None
        w, x = parts
        hdr = program_header(w)
        if x.startswith(bit) and leq_bound(w.bound, q):
            y = run_counted(w, x).result
            if isinstance(y, str) and y.startswith(bit) and len(y) == len(x):
                return hdr + y
        return hdr + "0" * len(x)

    return WordFunction(e, None, "combinator", f"e_{i}")


def critical_product(q: PolyBound) -> WordFunction:
    return compose(critical_pair(1, q), critical_pair(0, q), name="e1 e0")
