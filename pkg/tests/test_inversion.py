from itertools import product

import pytest

from fpm.bounds import PolyBound
from fpm.circuits import LiftCircuitInverse, lp_alpha, lp_beta, lp_lift
from fpm.evaluator import ev_function, star_alpha, star_beta, star_plan
from fpm.fixtures import rim_corpus
from fpm.inversion import (
    EnumOracle,
    Membership,
    OracleInconsistency,
    SimulationWitness,
    Transport,
    check_inversive_reduction,
    check_simulation,
    decode_hash,
    default_max_probe,
    encode_hash,
    encoded_candidates,
    encoded_function,
    evaluator_candidates,
    extension_member,
    fprime_ith,
    fprime_select,
    image_member,
    inverse_transport,
    select_function,
    verify_inverse,
)
from fpm.machine import WordFunction, compose, program_function
from fpm.rim import green_leq_r, invert_table, rim_inverse_from_point_inverse, table_point_inverse
from fpm.words import all_words

DOUBLE = WordFunction(lambda x: x + x, PolyBound(1, 12), "combinator", "double")
HALF = WordFunction(lambda x: x[: len(x) // 2], PolyBound(1, 12), "combinator", "half")
IDENT = WordFunction(lambda x: x, PolyBound(1, 12), "combinator", "id")


def table_function(table):
    return WordFunction(table.get, PolyBound(1, 12), "table")


def oracle(f, max_probe=6):
    return EnumOracle(f, None, max_probe)


def test_membership_examples():
    o = oracle(DOUBLE)
    assert image_member(o, "11")
    assert not image_member(o, "1")
    assert all(image_member(oracle(IDENT), y) for y in all_words(4))
    assert extension_member(o, "11", "1")
    assert not extension_member(o, "11", "0")
    assert extension_member(o, "11", "") == image_member(o, "11")


def test_truncation_flag():
    o = EnumOracle(DOUBLE, PolyBound(1, 12), 4)
    m = o.query("10")
    assert isinstance(m, Membership)
    assert m.truncated and m.inconclusive and not m
    capped = EnumOracle(DOUBLE, PolyBound(1, 1), 10)
    assert not capped.query("11").truncated
    assert capped.radius("11") == 3


def test_max_probe_env(monkeypatch):
    monkeypatch.setenv("FPM_MAX_PROBE", "3")
    assert default_max_probe() == 3
    assert EnumOracle(DOUBLE).max_probe == 3


def test_fprime_examples():
    f = table_function({"1": "0", "00": "0"})
    o = oracle(f)
    assert fprime_select(o, "min", "0") == "00"
    assert fprime_select(o, "max", "0") == "1"
    o = oracle(table_function({"0": "1", "01": "1"}))
    assert fprime_select(o, "min", "1") == "0"
    assert fprime_select(o, "max", "1") == "01"
    for y in all_words(4):
        assert fprime_select(oracle(IDENT), "min", y) == y
    with pytest.raises(ValueError):
        fprime_select(o, "mid", "1")


def test_fprime_ith_examples():
    o = oracle(table_function({"00": "1", "01": "1", "1": "1"}))
    assert fprime_ith(o, 2, "1") == "01"
    assert fprime_ith(o, 99, "1") == "1"
    assert fprime_ith(o, 1, "0") is None
    with pytest.raises(ValueError):
        fprime_ith(o, 0, "1")


def test_oracle_inconsistency():
    class Liar(EnumOracle):
        def query(self, y, z=""):
            return Membership(True, False)

    with pytest.raises(OracleInconsistency):
        fprime_select(Liar(lambda x: None, None, 3), "max", "0")


def test_verify_inverse_examples():
    assert verify_inverse(DOUBLE, HALF, 6)
    assert not verify_inverse(DOUBLE, IDENT, 6)


@pytest.mark.parametrize("name", ["first_bit", "zeros", "first_half", "doubling", "const_one", "zero_prefixed"])
def test_selection_properties(corpus, name):
    f = program_function(corpus[name])
    o = oracle(f, 7)
    images = {f(x) for x in all_words(7)} - {None}
    for y in sorted(y for y in images if len(y) <= 6):
        lo, hi = fprime_select(o, "min", y), fprime_select(o, "max", y)
        pre = o.preimages(y)
        assert f(lo) == y and f(hi) == y
        assert lo <= hi
        assert (lo == hi) == (len(pre) == 1)
        assert fprime_ith(o, 1, y) == lo
        assert fprime_ith(o, 10 ** 6, y) == hi
    assert verify_inverse(f, select_function(o, "min"), 5)


@pytest.mark.parametrize("name", ["first_bit", "doubling", "negate"])
def test_image_iff_inverse_roundtrip(corpus, name):
    f = program_function(corpus[name])
    o = oracle(f, 7)
    f_inv = select_function(o, "max")
    assert verify_inverse(f, f_inv, 5)
    for y in all_words(6):
        x = f_inv(y)
        assert image_member(o, y) == (x is not None and f(x) == y)


# ---------------------------------------------------------------------------
# simulations and reductions

def test_check_simulation_examples():
    assert check_simulation(IDENT, IDENT, SimulationWitness(IDENT, IDENT), 5).ok
    bad = check_simulation(IDENT, IDENT, SimulationWitness(lambda y: y + "0", IDENT), 5)
    assert not bad.ok and bad.counterexample == ""


def test_check_simulation_star(corpus):
    w = corpus["negate"]
    plan = star_plan(w)
    rep = check_simulation(program_function(w), ev_function(), SimulationWitness(star_beta(plan), star_alpha(plan)), 6)
    assert rep.ok


def _encoding_setup(f):
    fc = encoded_function(f)
    o = EnumOracle(fc, None, 6, encoded_candidates)
    samples = [select_function(o, "min"), select_function(o, "max"), select_function(o, "ith", 2)]
    targets = [encode_hash(x) for x in all_words(4)]
    return fc, samples, targets


def test_encoding_transport():
    for f in (DOUBLE, HALF):
        fc, samples, targets = _encoding_setup(f)
        rep = check_inversive_reduction(f, fc, SimulationWitness(decode_hash, encode_hash),
                                        inverse_transport("encoding"), samples, 4, target_inputs=targets)
        assert rep.ok and rep.uniform and rep.samples_verified == 3


def test_broken_transport_named():
    fc, samples, targets = _encoding_setup(HALF)
    flip = str.maketrans("01", "10")
    broken = Transport("broken", encode_hash, lambda t: None if decode_hash(t) is None else decode_hash(t).translate(flip))
    rep = check_inversive_reduction(HALF, fc, SimulationWitness(decode_hash, encode_hash), broken, samples, 4,
                                    target_inputs=targets)
    assert not rep.ok
    assert rep.failing_samples == [s.name for s in samples]


def test_bad_sample_rejected():
    fc, _, targets = _encoding_setup(HALF)
    with pytest.raises(ValueError):
        check_inversive_reduction(HALF, fc, SimulationWitness(decode_hash, encode_hash),
                                  inverse_transport("encoding"), [lambda t: t], 3, target_inputs=targets)


def test_unknown_kind():
    with pytest.raises(ValueError):
        inverse_transport("teleport")


def test_evaluator_transport(corpus):
    w = corpus["first_bit"]
    f = program_function(w)
    plan = star_plan(w)
    ev = ev_function()
    o = EnumOracle(ev, None, 4, evaluator_candidates)
    alpha = star_alpha(plan)
    samples = [select_function(o, "min"), select_function(o, "max"), select_function(o, "ith", 2)]
    rep = check_inversive_reduction(f, ev, SimulationWitness(star_beta(plan), alpha),
                                    inverse_transport("evaluator", plan=plan), samples, 3,
                                    target_inputs=[alpha(x) for x in all_words(3)])
    assert rep.ok and rep.uniform


def test_lift_transport():
    f = DOUBLE
    ell = lp_lift(f)
    t = inverse_transport("lpLift", f=f, pf=PolyBound(1, 1))
    assert t.weak
    samples = [LiftCircuitInverse(f, "min"), LiftCircuitInverse(f, "max")]
    for s in samples:
        s.name = f"lift-{s.select}"
    targets = [lp_alpha(f)(x) for x in all_words(4)]
    rep = check_inversive_reduction(f, ell, SimulationWitness(lp_beta, lp_alpha(f)), t, samples, 4,
                                    target_inputs=targets)
    assert rep.ok


# ---------------------------------------------------------------------------
# R-equivalent tables are inverse-equivalent

def _r_equivalent_pairs():
    tables = rim_corpus()
    for f, g in product(tables, tables):
        if f == g:
            continue
        if green_leq_r(f, g, invert_table(g)).eq_holds and green_leq_r(g, f, invert_table(f)).eq_holds:
            yield f, g


def _inverses(f):
    # preimages of images of A^{<=6} can be two letters longer
    o = EnumOracle(f, None, 8)
    return [
        invert_table(f),
        rim_inverse_from_point_inverse(f, table_point_inverse(f), f.image_contains),
        select_function(o, "min"),
        select_function(o, "max"),
    ]


def test_r_class_reductions():
    pairs = list(_r_equivalent_pairs())
    assert len(pairs) >= 2
    for f, g in pairs:
        # g <= f: g = f (f' g), and any inverse h of f gives g' f h as an inverse of g
        f0, g0 = invert_table(f), invert_table(g)
        witness = SimulationWitness(lambda y: y, compose(f0, g))
        transport = Transport("r-class", lambda y: y, compose(g0, f))
        rep = check_inversive_reduction(g, f, witness, transport, _inverses(f), 6)
        assert rep.ok and rep.uniform, (f, g)
