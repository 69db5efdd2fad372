"""A small corpus of counted programs and choice machines.

Every program here stays well inside its step budget on all inputs, so its
results do not depend on the counter.
"""

from __future__ import annotations

from functools import lru_cache

from .bounds import PolyBound
from .machine import ChoiceProgram, PolyProgram, Row, TMProgram, choice_to_program

def _tm(tapes: int, rows: list[tuple], states: list[str], start: str = "s", halt: str = "h") -> TMProgram:
    idx = {q: i for i, q in enumerate(states)}
    body = tuple(Row(idx[q], r, idx[n], w, m) for q, r, n, w, m in rows)
    return TMProgram(tapes, len(states), idx[start], idx[halt], body)


def identity() -> PolyProgram:
    rows = [
        ("s", "0*", "s", "=0", "RR"),
        ("s", "1*", "s", "=1", "RR"),
        ("s", "_*", "h", "==", "SS"),
    ]
    return PolyProgram(_tm(2, rows, ["s", "h"]), PolyBound(1, 12))


def negate() -> PolyProgram:
    rows = [
        ("s", "0*", "s", "=1", "RR"),
        ("s", "1*", "s", "=0", "RR"),
        ("s", "_*", "h", "==", "SS"),
    ]
    return PolyProgram(_tm(2, rows, ["s", "h"]), PolyBound(1, 12))


def const_empty() -> PolyProgram:
    return PolyProgram(_tm(2, [("s", "**", "h", "==", "SS")], ["s", "h"]), PolyBound(1, 12))


def const_one() -> PolyProgram:
    rows = [("s", "**", "h", "=1", "SS")]
    return PolyProgram(_tm(2, rows, ["s", "h"]), PolyBound(1, 12))


def zeros_map() -> PolyProgram:
    """``x -> 0^|x|``."""
    rows = [
        ("s", "0*", "s", "=0", "RR"),
        ("s", "1*", "s", "=0", "RR"),
        ("s", "_*", "h", "==", "SS"),
    ]
    return PolyProgram(_tm(2, rows, ["s", "h"]), PolyBound(1, 12))


def doubling() -> PolyProgram:
    """``x -> xx``: copy, rewind, copy again."""
    rows = [
        ("c1", "0*", "c1", "=0", "RR"),
        ("c1", "1*", "c1", "=1", "RR"),
        ("c1", "_*", "r", "==", "LS"),
        ("r", "0*", "r", "==", "LS"),
        ("r", "1*", "r", "==", "LS"),
        ("r", ">*", "c2", "==", "RS"),
        ("c2", "0*", "c2", "=0", "RR"),
        ("c2", "1*", "c2", "=1", "RR"),
        ("c2", "_*", "h", "==", "SS"),
    ]
    return PolyProgram(_tm(2, rows, ["c1", "r", "c2", "h"], start="c1"), PolyBound(1, 36))


def first_half() -> PolyProgram:
    """``x -> x[:|x|//2]``: count pairs on a work tape, rewind, copy that many."""
    rows = [
        ("st", "0**", "p1", "===", "RSS"),
        ("st", "1**", "p1", "===", "RSS"),
        ("st", "_**", "h", "===", "SSS"),
        ("p0", "0**", "p1", "===", "RSS"),
        ("p0", "1**", "p1", "===", "RSS"),
        ("p0", "_**", "w0", "===", "SSS"),
        ("p1", "0**", "p0", "=1=", "RRS"),
        ("p1", "1**", "p0", "=1=", "RRS"),
        ("p1", "_**", "w0", "===", "SSS"),
        ("w0", "0**", "w0", "===", "LSS"),
        ("w0", "1**", "w0", "===", "LSS"),
        ("w0", "_**", "w0", "===", "LSS"),
        ("w0", ">**", "w1", "===", "RSS"),
        ("w1", "*1*", "w1", "===", "SLS"),
        ("w1", "*_*", "w1", "===", "SLS"),
        ("w1", "*>*", "cp", "===", "SRS"),
        ("cp", "01*", "cp", "==0", "RRR"),
        ("cp", "11*", "cp", "==1", "RRR"),
        ("cp", "*_*", "h", "===", "SSS"),
    ]
    return PolyProgram(_tm(3, rows, ["st", "p0", "p1", "w0", "w1", "cp", "h"], start="st"), PolyBound(1, 60))


def first_bit() -> PolyProgram:
    rows = [
        ("s", "0*", "h", "=0", "SS"),
        ("s", "1*", "h", "=1", "SS"),
        ("s", "_*", "h", "==", "SS"),
    ]
    return PolyProgram(_tm(2, rows, ["s", "h"]), PolyBound(1, 12))


def zero_prefixed_identity() -> PolyProgram:
    """Identity on ``0A*``, undefined elsewhere."""
    rows = [
        ("s", "0*", "c", "=0", "RR"),
        ("c", "0*", "c", "=0", "RR"),
        ("c", "1*", "c", "=1", "RR"),
        ("c", "_*", "h", "==", "SS"),
    ]
    return PolyProgram(_tm(2, rows, ["s", "c", "h"]), PolyBound(1, 12))


def looping() -> PolyProgram:
    """Never halts; always stopped by the counter."""
    return PolyProgram(_tm(1, [("s", "*", "s", "=", "S")], ["s", "h"]), PolyBound(1, 12))


def contains_one_machine() -> ChoiceProgram:
    """Guesses the position of a 1: on each 1, choice 0 walks on, choice 1 accepts."""
    rows = (
        Row(0, "0", 0, "=", "R"),
        Row(0, "1", 0, "=", "R"),
        Row(0, "1", 1, "=", "S"),
    )
    return ChoiceProgram(1, 2, 0, 1, rows, PolyBound(1, 2))


def even_parity_machine() -> ChoiceProgram:
    """Deterministic: accepts words with an even number of 1s."""
    rows = (
        Row(0, "0", 0, "=", "R"),
        Row(0, "1", 1, "=", "R"),
        Row(1, "0", 1, "=", "R"),
        Row(1, "1", 0, "=", "R"),
        Row(0, "_", 2, "=", "S"),
    )
    return ChoiceProgram(1, 3, 0, 2, rows, PolyBound(1, 2))


@lru_cache(maxsize=None)
def program_corpus() -> dict[str, PolyProgram]:
    return {
        "identity": identity(),
        "negate": negate(),
        "const_empty": const_empty(),
        "const_one": const_one(),
        "zeros": zeros_map(),
        "doubling": doubling(),
        "first_half": first_half(),
        "first_bit": first_bit(),
        "zero_prefixed": zero_prefixed_identity(),
        "fm_contains_one": choice_to_program(contains_one_machine()),
        "fm_even_parity": choice_to_program(even_parity_machine()),
    }


RIM_TABLES = (
    {"": ""},
    {"": "0"},
    {"": "1"},
    {"0": ""},
    {"0": "1", "1": "0"},
    {"0": "00", "1": "01"},
    {"0": "0", "1": "0"},
    {"00": "1", "01": "0", "1": ""},
    {"0": "", "1": ""},
    {"1": "11"},
)


def rim_corpus():
    """Ten finite right-ideal morphisms; each is regular with inverse ``invert_table``."""
    from .rim import RimTable

    return [RimTable.of(t) for t in RIM_TABLES]
