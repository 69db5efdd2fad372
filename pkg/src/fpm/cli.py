"""Command-line front end: ``fpm <subcommand> ...``.

Programs are given as ``.tm`` files or as ``fixture:<name>`` for the
built-in corpus.  Exit status is 0 on success, 1 on domain errors, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, Sequence

from . import circuits, evaluator, fixtures, inversion, machine, rim
from .bounds import PolyBound, counter_budget
from .machine import ChoiceProgram, MalformedProgram, PolyProgram, WordFunction
from .words import ResourceLimit, WordLike, all_words, is_binary, render


class DomainError(Exception):
    pass


# Which subcommand exercises each library operation.
OPERATION_COVERAGE = {
    "encode3": "serialize",
    "decode3": "parse",
    "hashAffix/hashStrip": "reduce",
    "minimalPrefixCode": "green",
    "shortestPrefixIn": "green",
    "evalBound/leqBound": "star-eval",
    "composeBounds": "compile-alpha",
    "counterBudget": "run",
    "runCounted": "run",
    "serializeProgram": "serialize",
    "parseProgram": "parse",
    "choiceRun/fM": "run",
    "applyRim/composeRim/arrow": "green",
    "greenLeqR/greenLeqL": "green",
    "pp0Pair": "demo",
    "rimInverseFromPointInverse": "green",
    "psiLift": "demo",
    "affix/dropPrefix": "compile-beta",
    "expand1/reexpand1/contr1/recontr1": "star-eval",
    "exProgram/coProgram": "star-eval",
    "evQC": "star-eval",
    "eQC": "demo",
    "starEvaluate": "star-eval",
    "compileBeta": "compile-beta",
    "compileAlpha": "compile-alpha",
    "evalGeneratorWord": "word-problem",
    "equivalenceSearch": "word-problem",
    "evCirc": "circuit-eval",
    "synthesizeCircuit": "circuit-synth",
    "invertCircuitBrute": "circuit-invert",
    "circReduce": "reduce",
    "formulaEval/criticalFormulaMap": "circuit-eval",
    "lpLift": "lp-reduce",
    "weakTuringInvert": "lp-reduce",
    "criticalPair": "demo",
    "imageMember/extensionMember": "invert",
    "fPrimeSelect/fPrimeIth": "invert",
    "verifyInverse": "reduce",
    "checkSimulation": "reduce",
    "checkInversiveReduction": "reduce",
    "inverseTransport": "reduce",
}


# ---------------------------------------------------------------------------
# argument types

def word_arg(text: str) -> str:
    if text in ("ε", "-"):
        return ""
    if not is_binary(text):
        raise argparse.ArgumentTypeError(f"not a binary word: {text!r}")
    return text


def q2_c_arg(text: str) -> int:
    c = int(text)
    if c < 12:
        raise argparse.ArgumentTypeError(f"q2 constant must be at least 12, got {c}")
    return c


def positive_arg(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def load_program(source: str) -> PolyProgram:
    """``fixture:<name>`` or a path to a ``.tm`` file; choice machines are compiled."""
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        corpus = {**fixtures.program_corpus(), "looping": fixtures.looping()}
        if name not in corpus:
            raise DomainError(f"unknown fixture {name!r}; known: {', '.join(corpus)}")
        return corpus[name]
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(str(exc)) from exc
    try:
        prog = machine.parse_program_text(text)
    except (ValueError, MalformedProgram) as exc:
        raise DomainError(f"{source}: {exc}") from exc
    if isinstance(prog, ChoiceProgram):
        return machine.choice_to_program(prog)
    return prog


def load_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(str(exc)) from exc


# ---------------------------------------------------------------------------
# output

class Out:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def line(self, text: str) -> None:
        print(text, file=self.stream)

    def word(self, w: Optional[WordLike], label: str = "") -> None:
        if self.fmt == "machine":
            self.line("UNDEF" if w is None else (w if isinstance(w, str) else repr(w)))
        else:
            self.line(f"{label}{'undefined' if w is None else render(w)}")

    def outcome(self, r: machine.RunOutcome, label: str = "") -> None:
        if self.fmt == "machine":
            self.line(r.result if r.ok else f"REJECT({r.reason})")
        else:
            self.line(f"{label}{render(r.result) if r.ok else f'REJECT({r.reason})'}  [steps {r.steps}]")


def compress_tokens(s: Sequence[str]) -> str:
    out, i = [], 0
    while i < len(s):
        j = i
        while j < len(s) and s[j] == s[i]:
            j += 1
        out.append(s[i] if j - i == 1 else f"{s[i]}^{j - i}")
        i = j
    return " ".join(out)


# ---------------------------------------------------------------------------
# subcommands

def cmd_run(args, out: Out) -> int:
    w = load_program(args.program)
    for x in args.input:
        r = machine.run_counted(w, x)
        out.outcome(r, f"{render(x)} -> ")
        if args.budget:
            b = counter_budget(w.bound, len(x))
            out.line(f"budget p'={b.p_prime} prep={b.prep} exec={b.exec} balance={b.balance_check} cp={b.cp_upper}")
    return 0


def cmd_serialize(args, out: Out) -> int:
    bits = machine.serialize_program(load_program(args.program))
    out.line(bits if args.bits else machine.to_hex(bits))
    return 0


def cmd_parse(args, out: Out) -> int:
    bits = args.code if args.bits else machine.from_hex(args.code)
    try:
        w = machine.parse_program(bits)
    except MalformedProgram as exc:
        raise DomainError(f"malformed program: {exc}") from exc
    try:
        out.line(machine.format_program_text(w).rstrip("\n"))
    except ValueError:
        out.line(repr(w))
    return 0


def cmd_star_eval(args, out: Out) -> int:
    w = load_program(args.program)
    status = 0
    for x in args.input:
        direct = machine.run_counted(w, x).result
        star = evaluator.star_evaluate(w, x, args.q2_c, literal=args.literal)
        out.word(star, f"{render(x)} -> ")
        if star != direct:
            out.line(f"MISMATCH direct={render(direct) if direct is not None else 'UNDEF'}")
            status = 1
    return status


def cmd_compile_alpha(args, out: Out) -> int:
    s = _generator_word(args.word)
    w = evaluator.compile_alpha(s, args.q2_c)
    out.line(f"bound {w.bound}")
    out.line(machine.to_hex(machine.serialize_program(w)))
    for x in args.input:
        out.outcome(machine.run_counted(w, x), f"{render(x)} -> ")
    return 0


def cmd_compile_beta(args, out: Out) -> int:
    bits = machine.serialize_program(load_program(args.program)) if args.program else machine.from_hex(args.code)
    s = evaluator.compile_beta(bits, literal=args.literal)
    out.line(evaluator.format_generator_word(s) if args.full else compress_tokens(s))
    out.line(f"length {len(s)}")
    for x in args.input:
        out.word(evaluator.eval_generator_word(s, x, args.q2_c), f"{render(x)} -> ")
    return 0


def _generator_word(text: str) -> tuple[str, ...]:
    try:
        return evaluator.parse_generator_word(text)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def cmd_word_problem(args, out: Out) -> int:
    s1, s2 = _generator_word(args.s1), _generator_word(args.s2)
    x = evaluator.equivalence_search(s1, s2, args.max_len, args.q2_c)
    out.line(f"NONE≤{args.max_len}" if x is None else render(x) if out.fmt == "text" else x)
    return 0


def _table(path: str) -> rim.RimTable:
    try:
        return rim.parse_table(load_text(path))
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from exc


def cmd_green(args, out: Out) -> int:
    f, r = _table(args.f), _table(args.r)
    r_inv = rim.invert_table(r)
    rr = rim.green_leq_r(f, r, r_inv, args.max_len)
    lr = rim.green_leq_l(f, r, r_inv, args.max_len)
    out.line(f"R: eq={rr.eq_holds} image_included={rr.image_included}")
    out.line(f"L: eq={lr.eq_holds} partition_coarser={lr.partition_coarser}")
    out.line(f"f∘r = {rim.compose_rim(f, r)}")
    out.line(f"imC(f) = {{{', '.join(sorted(v or 'ε' for v in f.imc()))}}}")
    f_inv = rim.rim_inverse_from_point_inverse(f, rim.table_point_inverse(f), f.image_contains)
    out.line(f"shortest-prefix inverse valid: {inversion.verify_inverse(f, f_inv, args.max_len)}")
    return 0


def _oracle(w: PolyProgram, max_probe: Optional[int]) -> inversion.EnumOracle:
    return inversion.EnumOracle(machine.program_function(w), w.bound, max_probe)


def cmd_invert(args, out: Out) -> int:
    o = _oracle(load_program(args.program), args.max_probe)
    for y in args.input:
        if args.ith:
            x = inversion.fprime_ith(o, args.ith, y)
        else:
            x = inversion.fprime_select(o, "max" if args.max else "min", y)
        out.word(x, f"{render(y)} <- ")
        if out.fmt == "text" and o.truncated(y):
            out.line(f"  (search capped at length {o.radius(y)})")
    return 0


def cmd_reduce(args, out: Out) -> int:
    w = load_program(args.program)
    f = machine.program_function(w)
    report = reduction_report(args.kind, w, f, args.max_len, args.max_probe)
    out.line(f"kind={args.kind} simulation={report.simulation.ok} samples={report.samples_verified} "
             f"failing={','.join(report.failing_samples) or '-'} uniform={report.uniform}")
    return 0 if report.ok else 1


def reduction_report(kind: str, w: PolyProgram, f: WordFunction, max_len: int,
                     max_probe: Optional[int]) -> inversion.ReductionReport:
    """Run one transport check for a program; sample inverses are min, max and 2nd."""
    inputs = list(all_words(max_len))
    if kind == "encoding":
        fc = inversion.encoded_function(f)
        o = inversion.EnumOracle(fc, None, max_probe or max_len, inversion.encoded_candidates)
        witness = inversion.SimulationWitness(inversion.decode_hash, inversion.encode_hash)
        targets = [inversion.encode_hash(x) for x in inputs]
    elif kind == "evaluator":
        plan = evaluator.star_plan(w)
        fc = evaluator.ev_function()
        o = inversion.EnumOracle(fc, None, max_probe or max_len, inversion.evaluator_candidates)
        alpha, beta = evaluator.star_alpha(plan), evaluator.star_beta(plan)
        witness = inversion.SimulationWitness(beta, alpha)
        targets = [alpha(x) for x in inputs]
        t = inversion.inverse_transport(kind, plan=plan)
        samples = [inversion.select_function(o, "min"), inversion.select_function(o, "max"),
                   inversion.select_function(o, "ith", 2)]
        return inversion.check_inversive_reduction(f, fc, witness, t, samples, max_len, inputs, targets)
    elif kind == "circuit":
        alpha, beta, _ = circuits.circ_reduce(_total_lp(f))
        fc = circuits.ev_circ_function()
        witness = inversion.SimulationWitness(beta, alpha)
        t = inversion.inverse_transport(kind, alpha=alpha)
        samples = [circuits.ev_circ_inverse("min"), circuits.ev_circ_inverse("max"),
                   circuits.ev_circ_inverse("ith", 2)]
        targets = [alpha(x) for x in inputs]
        return inversion.check_inversive_reduction(f, fc, witness, t, samples, max_len, inputs, targets)
    elif kind == "lpLift":
        ell = circuits.lp_lift(f)
        alpha = circuits.lp_alpha(f)
        witness = inversion.SimulationWitness(circuits.lp_beta, alpha)
        t = inversion.inverse_transport(kind, f=f, pf=w.bound)
        samples = [circuits.LiftCircuitInverse(f, "min"), circuits.LiftCircuitInverse(f, "max"),
                   circuits.LiftCircuitInverse(f, "ith", 2)]
        targets = [u for u in (alpha(x) for x in inputs) if u is not None]
        return inversion.check_inversive_reduction(f, ell, witness, t, samples, max_len, inputs, targets)
    else:
        raise DomainError(f"unknown reduction kind {kind!r}")
    t = inversion.inverse_transport(kind)
    samples = [inversion.select_function(o, "min"), inversion.select_function(o, "max"),
               inversion.select_function(o, "ith", 2)]
    return inversion.check_inversive_reduction(f, fc, witness, t, samples, max_len, inputs, targets)


def _total_lp(f: WordFunction) -> Callable[[str], str]:
    def g(x: str) -> str:
        y = f(x)
        if y is None or len(y) != len(x):
            raise DomainError(f"function is not length-preserving at {x!r}")
        return y

    return g


def _circuit(path: str) -> circuits.Circuit:
    try:
        return circuits.parse_circuit(load_text(path))
    except (ValueError, KeyError) as exc:
        raise DomainError(f"{path}: {exc}") from exc


def cmd_circuit_eval(args, out: Out) -> int:
    if args.cnf:
        b = circuits.parse_dimacs(load_text(args.circuit))
        for tau in args.input:
            try:
                out.line(str(circuits.critical_formula_map(b, tau)[1]))
            except circuits.ArityError as exc:
                raise DomainError(str(exc)) from exc
        return 0
    c = _circuit(args.circuit)
    for x in args.input:
        try:
            out.word(circuits.ev_circ(c, x)[1], f"{render(x)} -> ")
        except circuits.ArityError as exc:
            raise DomainError(str(exc)) from exc
    return 0


def cmd_circuit_synth(args, out: Out) -> int:
    f = machine.program_function(load_program(args.program))
    try:
        c = circuits.synthesize_circuit(f, args.n)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    out.line(circuits.format_circuit(c).rstrip("\n"))
    return 0


def cmd_circuit_invert(args, out: Out) -> int:
    c = _circuit(args.circuit)
    how = "ith" if args.ith else "max" if args.max else "min"
    for y in args.input:
        try:
            out.word(circuits.invert_circuit_brute(c, y, how, args.ith or 1), f"{render(y)} <- ")
        except circuits.ArityError as exc:
            raise DomainError(str(exc)) from exc
    return 0


def cmd_lp_reduce(args, out: Out) -> int:
    f = machine.program_function(load_program(args.program))
    pf = PolyBound(*args.pf)
    ell_inv = circuits.LiftCircuitInverse(f)
    for y in args.input:
        x = circuits.weak_turing_invert(f, pf, ell_inv.domain, ell_inv, y)
        out.word(x, f"{render(y)} <- ")
    return 0


def cmd_demo(args, out: Out) -> int:
    corpus = fixtures.program_corpus()
    names = [args.name] if args.name else list(corpus)
    for name in names:
        if name not in corpus:
            raise DomainError(f"unknown fixture {name!r}")
        w = corpus[name]
        out.line(f"== {name}  bound {w.bound}")
        for x in ("", "0", "01", "0111"):
            r = machine.run_counted(w, x)
            s = evaluator.star_evaluate(w, x)
            same = "ok" if s == r.result else "MISMATCH"
            out.line(f"  {render(x)}: run={render(r.result) if r.ok else f'REJECT({r.reason})'} star={same}")
    q2 = evaluator.q2_bound()
    hdr = machine.program_header(corpus["identity"])
    out.line(f"E_q2(identity, 01) = {render(evaluator.e_qc(q2, hdr + '01'))}")
    e = circuits.critical_product(q2)
    out.line(f"e1 e0(identity, 01) = {render(e(hdr + '01'))}")
    pi, pi_p = rim.pp0_pair({"0", "1"}, "1")
    out.line(f"pi(10) = {pi('10')}, pi'(110) = {pi_p('110')}")
    psi = rim.psi_lift(machine.program_function(corpus["negate"]))
    out.line(f"psi_negate(101) = {psi('101')}, psi(0) = {render(psi('0'))}")
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpm", description="Counted Turing programs, padding, evaluation and inversion.")
    p.add_argument("--format", choices=("text", "machine"), default="text", help="output format")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    def inputs(sp: argparse.ArgumentParser, required: bool = False) -> None:
        sp.add_argument("--input", "-i", type=word_arg, action="append", default=[], required=required,
                        help="binary input word (repeatable; 'ε' or '-' for empty)")

    sp = add("run", cmd_run, "run a program under its counter")
    sp.add_argument("program")
    inputs(sp, True)
    sp.add_argument("--budget", action="store_true", help="also print the counter budget")

    sp = add("serialize", cmd_serialize, "print a program's serialized form")
    sp.add_argument("program")
    sp.add_argument("--bits", action="store_true", help="print bits instead of hex")

    sp = add("parse", cmd_parse, "parse a serialized program")
    sp.add_argument("code")
    sp.add_argument("--bits", action="store_true", help="the argument is a bit string, not hex")

    sp = add("star-eval", cmd_star_eval, "evaluate through the generator factorization")
    sp.add_argument("program")
    inputs(sp, True)
    sp.add_argument("--q2-c", type=q2_c_arg, default=evaluator.DEFAULT_Q2_C)
    sp.add_argument("--literal", action="store_true", help="no extra contraction rounds")

    sp = add("compile-alpha", cmd_compile_alpha, "compile a generator word to a program")
    sp.add_argument("word", help="e.g. \"pi1' pi0\"")
    inputs(sp)
    sp.add_argument("--q2-c", type=q2_c_arg, default=evaluator.DEFAULT_Q2_C)

    sp = add("compile-beta", cmd_compile_beta, "compile a program to a generator word")
    sp.add_argument("program", nargs="?")
    sp.add_argument("--code", help="serialized program in hex (instead of a program file)")
    inputs(sp)
    sp.add_argument("--full", action="store_true", help="print every letter")
    sp.add_argument("--literal", action="store_true")
    sp.add_argument("--q2-c", type=q2_c_arg, default=evaluator.DEFAULT_Q2_C)

    sp = add("word-problem", cmd_word_problem, "search for a disagreement between two generator words")
    sp.add_argument("s1")
    sp.add_argument("s2")
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--q2-c", type=q2_c_arg, default=evaluator.DEFAULT_Q2_C)

    sp = add("green", cmd_green, "bounded Green-relation tests between two tables")
    sp.add_argument("f")
    sp.add_argument("r")
    sp.add_argument("--max-len", type=int, default=rim.DEFAULT_GREEN_LEN)

    sp = add("invert", cmd_invert, "preimages by bounded enumeration")
    sp.add_argument("program")
    inputs(sp, True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--min", action="store_true", help="dictionary-least preimage (default)")
    g.add_argument("--max", action="store_true", help="dictionary-greatest preimage")
    g.add_argument("--ith", type=positive_arg, help="i-th preimage, clamped to the last")
    sp.add_argument("--max-probe", type=int)

    sp = add("reduce", cmd_reduce, "check an inversive reduction with sampled inverses")
    sp.add_argument("program")
    sp.add_argument("--check", dest="kind", choices=("encoding", "evaluator", "circuit", "lpLift"), required=True)
    sp.add_argument("--max-len", type=int, default=4)
    sp.add_argument("--max-probe", type=int)

    sp = add("circuit-eval", cmd_circuit_eval, "evaluate a circuit (or a CNF formula with --cnf)")
    sp.add_argument("circuit")
    inputs(sp, True)
    sp.add_argument("--cnf", action="store_true")

    sp = add("circuit-synth", cmd_circuit_synth, "synthesize a circuit for a length-preserving program")
    sp.add_argument("program")
    sp.add_argument("--n", type=int, required=True)

    sp = add("circuit-invert", cmd_circuit_invert, "brute-force circuit preimage")
    sp.add_argument("circuit")
    inputs(sp, True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--min", action="store_true")
    g.add_argument("--max", action="store_true")
    g.add_argument("--ith", type=positive_arg)

    sp = add("lp-reduce", cmd_lp_reduce, "invert through the length-preserving lift and circuits")
    sp.add_argument("program")
    inputs(sp, True)
    sp.add_argument("--pf", type=int, nargs=2, metavar=("K", "A"), required=True)

    sp = add("demo", cmd_demo, "walk through the fixture corpus")
    sp.add_argument("name", nargs="?")
    return p


SUBCOMMANDS = ("run", "serialize", "parse", "star-eval", "compile-alpha", "compile-beta", "word-problem", "green",
               "invert", "reduce", "circuit-eval", "circuit-synth", "circuit-invert", "lp-reduce", "demo")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Out(args.format)
    try:
        return args.func(args, out)
    except (DomainError, ResourceLimit, inversion.OracleInconsistency) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
