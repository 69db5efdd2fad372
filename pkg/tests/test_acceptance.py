"""Acceptance suite: one test per criterion, summarized as PASS/FAIL lines at the end of the run."""

import time
from itertools import product

from fpm.bounds import PolyBound, all_bounds, compose_bounds, counter_budget, eval_bound, exec_budget, padding_rounds
from fpm.circuits import (
    LiftCircuitInverse,
    circ_reduce,
    ev_circ,
    ev_circ_function,
    ev_circ_inverse,
    lp_alpha,
    lp_beta,
    lp_lift,
    synthesize_circuit,
    weak_turing_invert,
)
from fpm.evaluator import ev_function, star_alpha, star_beta, star_evaluate, star_plan
from fpm.fixtures import program_corpus, rim_corpus
from fpm.inversion import (
    EnumOracle,
    SimulationWitness,
    check_inversive_reduction,
    decode_hash,
    encode_hash,
    encoded_candidates,
    encoded_function,
    evaluator_candidates,
    fprime_ith,
    fprime_select,
    inverse_transport,
    select_function,
    verify_inverse,
)
from fpm.machine import PolyProgram, program_function, program_header, run_counted
from fpm.padding import (
    PaddedWord,
    co_program,
    contr1,
    ex_program,
    expand1,
    parse_padded,
    recontr1,
    reexpand1,
)
from fpm.rim import (
    green_leq_l,
    green_leq_r,
    invert_table,
    j0_witness,
    pp0_pair,
    rim_inverse_from_point_inverse,
    table_point_inverse,
)
from fpm.words import all_words, decode3, encode3, words_of_length


def test_criterion_1_encoding_roundtrip():
    start = time.perf_counter()
    count = 0
    for n in range(11):
        for letters in product("01#", repeat=n):
            w = "".join(letters)
            assert decode3(encode3(w)) == w
            count += 1
    elapsed = time.perf_counter() - start
    assert count == sum(3 ** n for n in range(11))
    assert elapsed < 5, elapsed


def test_criterion_2_star_equivalence():
    corpus = program_corpus()
    assert len(corpus) >= 8
    start = time.perf_counter()
    mismatches = []
    for name, w in corpus.items():
        for x in all_words(6):
            if star_evaluate(w, x) != run_counted(w, x).result:
                mismatches.append((name, x))
    elapsed = time.perf_counter() - start
    assert mismatches == []
    assert elapsed < 60, elapsed


def test_criterion_3_bound_arithmetic():
    for k1, k2, a1, a2 in product(range(1, 5), range(1, 5), (12, 13, 64), (12, 13, 64)):
        inner, outer = PolyBound(k1, a1), PolyBound(k2, a2)
        comp = compose_bounds(inner, outer)
        for n in range(65):
            m = eval_bound(inner, n)
            assert m + eval_bound(outer, m) <= eval_bound(comp, n)
    for n, j in product(range(65), range(1, 9)):
        assert (n + 1) ** j <= 2 ** (j - 1) * (n ** j + 1)
    v = program_corpus()["identity"].v
    for p in all_bounds(6, 64, 12):
        w = PolyProgram(v, p)
        steps = 0
        while w.bound != PolyBound(1, 12):
            w = ex_program(w)
            steps += 1
        assert steps <= 2 * padding_rounds(p) + 1


def test_criterion_4_padding_inverses():
    corpus = program_corpus()
    w = ex_program(corpus["negate"])
    for h in range(101):
        t = PaddedWord(w, h, "01").word()
        back = parse_padded(recontr1(reexpand1(t)))
        assert back.pad == max(1, h) and back.payload == "01"
        if h >= 1:
            assert back.pad == h
    for prog in corpus.values():
        hdr = program_header(prog)
        for x in all_words(6):
            out = contr1(expand1(hdr + x))
            assert out is not None and out.endswith(x)
            assert out == program_header(co_program(ex_program(prog))) + x
    for prog in corpus.values():
        w2 = co_program(ex_program(prog))
        for x in all_words(8):
            assert run_counted(w2, x).result == run_counted(prog, x).result


def test_criterion_5_inversion_algorithms():
    start = time.perf_counter()
    for name, w in program_corpus().items():
        f = program_function(w)
        o = EnumOracle(f)
        values = {x: f(x) for x in all_words(o.max_probe)}
        images = sorted({y for y in values.values() if y is not None and len(y) <= 6})
        assert images, name
        for y in images:
            r = o.radius(y)
            pre = sorted(x for x, v in values.items() if v == y and len(x) <= r)
            lo, hi = fprime_select(o, "min", y), fprime_select(o, "max", y)
            assert (lo, hi) == (pre[0], pre[-1]), (name, y)
            assert f(lo) == y and f(hi) == y
            for i in range(1, 6):
                assert fprime_ith(o, i, y) == pre[min(i, len(pre)) - 1]
    assert time.perf_counter() - start < 60


def test_criterion_6_pp0_pair():
    for code in ({"0", "1"}, {"00", "01", "1"}, {"0", "10", "11"}):
        for p0 in code:
            pi, pi_p = pp0_pair(code, p0)
            seen = set()
            for x in all_words(8):
                y = pi(x)
                assert y is not None and y not in seen
                seen.add(y)
                assert pi_p(y) == x


def test_criterion_7_shortest_prefix_inverse():
    tables = [t for t in rim_corpus() if t.entries]
    assert len(tables) >= 5
    for f in tables:
        f_inv = rim_inverse_from_point_inverse(f, table_point_inverse(f), f.image_contains)
        assert verify_inverse(f, f_inv, 8)
        for y in all_words(6):
            if f_inv(y) is not None:
                for z in all_words(2):
                    assert f_inv(y + z) == f_inv(y) + z


def test_criterion_8_circuit_chain():
    fs = {
        "NOT": (lambda x: x.translate(str.maketrans("01", "10")), PolyBound(1, 1)),
        "rotate": (lambda x: x[1:] + x[:1], PolyBound(1, 1)),
        "doubling": (lambda x: x + x, PolyBound(1, 1)),
        "truncate": (lambda x: x[: len(x) // 2], PolyBound(1, 2)),
    }
    for name, (f, pf) in fs.items():
        inv = LiftCircuitInverse(f)
        for y in all_words(6):
            x = weak_turing_invert(f, pf, inv.domain, inv, y)
            lengths = [len(z) for z in all_words(2 * len(y) + 1) if f(z) == y]
            if not lengths:
                assert x is None, (name, y)
            else:
                assert x is not None and f(x) == y and len(x) == min(lengths), (name, y)
        for n in range(11):
            if all(len(f(z)) == n for z in words_of_length(n)):
                c = synthesize_circuit(f, n)
                assert all(ev_circ(c, z)[1] == f(z) for z in words_of_length(n))
        ell = lp_lift(f)
        for n in range(1, 11):
            c = synthesize_circuit(lambda u: ell(u) or "0" * len(u), n)
            for u in words_of_length(n):
                assert ev_circ(c, u)[1] == (ell(u) or "0" * n)


def _samples(o):
    return [select_function(o, "min"), select_function(o, "max"), select_function(o, "ith", 2)]


def test_criterion_9_inverse_transport():
    corpus = program_corpus()
    inputs = list(all_words(4))
    reports = {}

    f = program_function(corpus["first_bit"])
    fc = encoded_function(f)
    o = EnumOracle(fc, None, 5, encoded_candidates)
    reports["encoding"] = check_inversive_reduction(
        f, fc, SimulationWitness(decode_hash, encode_hash), inverse_transport("encoding"), _samples(o), 4,
        inputs, [encode_hash(x) for x in inputs])

    w = corpus["first_bit"]
    plan = star_plan(w)
    alpha = star_alpha(plan)
    ev = ev_function()
    o = EnumOracle(ev, None, 4, evaluator_candidates)
    reports["evaluator"] = check_inversive_reduction(
        program_function(w), ev, SimulationWitness(star_beta(plan), alpha), inverse_transport("evaluator", plan=plan),
        _samples(o), 3, list(all_words(3)), [alpha(x) for x in all_words(3)])

    zeros = program_function(corpus["zeros"])
    c_alpha, c_beta, _ = circ_reduce(zeros)
    samples = [ev_circ_inverse("min"), ev_circ_inverse("max"), ev_circ_inverse("ith", 2)]
    reports["circuit"] = check_inversive_reduction(
        zeros, ev_circ_function(), SimulationWitness(c_beta, c_alpha), inverse_transport("circuit", alpha=c_alpha),
        samples, 4, inputs, [c_alpha(x) for x in inputs])

    half = program_function(corpus["first_half"])
    samples = [LiftCircuitInverse(half, "min"), LiftCircuitInverse(half, "max"), LiftCircuitInverse(half, "ith", 2)]
    l_alpha = lp_alpha(half)
    reports["lpLift"] = check_inversive_reduction(
        half, lp_lift(half), SimulationWitness(lp_beta, l_alpha),
        inverse_transport("lpLift", f=half, pf=PolyBound(1, 2)), samples, 4, inputs, [l_alpha(x) for x in inputs])

    for kind, rep in reports.items():
        assert rep.samples_verified >= 3, kind
        assert rep.ok and rep.uniform, (kind, rep)
    # the sampled inverses really differ
    t = c_alpha("0110")
    outs = {ev_circ_inverse(s)(ev_circ_function()(t)) for s in ("min", "max")}
    assert len(outs) == 2


def test_criterion_10_green_consistency():
    tables = rim_corpus()
    assert len(tables) == 10
    for f, r in product(tables, tables):
        r_inv = invert_table(r)
        assert verify_inverse(r, r_inv, 6)
        assert green_leq_r(f, r, r_inv, 6).consistent, (f, r)
        assert green_leq_l(f, r, r_inv, 6).consistent, (f, r)
    for f in tables:
        if not f.entries:
            continue
        x0 = f.entries[0][0]
        w = j0_witness(f, x0)
        assert all(w(x) == x for x in all_words(6))


def test_criterion_11_cost_model():
    for p in all_bounds(4, 80, 12):
        for n in (0, 1, 2, 5, 17):
            b = counter_budget(p, n)
            assert b.prep + b.exec + b.balance_check == b.p_prime
    for w in program_corpus().values():
        for x in all_words(8):
            r = run_counted(w, x)
            if r.ok:
                assert r.steps <= exec_budget(w.bound, len(x))
