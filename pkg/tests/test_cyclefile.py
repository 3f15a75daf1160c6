from __future__ import annotations

import pytest

from addchow.cyclefile import format_cycle_file, parse_cycle_file, read_cycle_file, write_cycle_file
from addchow.cycles import AdmissibilityError, FormalCycle, ModulusRing, boundary, concat, delta, point, totaro_c2
from addchow.field import ParseError, var
from addchow.verify import curve_corpus, point_corpus, reduced_curve

a, b1, b2, x = var("a"), var("b1"), var("b2"), var("x")

C2_TEXT = """\
# Totaro's cycle
symbols: a b1 b2
parameter: s
modulus: 2
slots: 2
+1 (1/a; s, (b1*s - b1*b2)/(s - b1*b2))
"""


def test_parse_c2():
    assert parse_cycle_file(C2_TEXT) == totaro_c2(a, b1, b2)


def test_parse_points_and_merge():
    text = "slots: 1\n+2 (x; t1)\n-1 (x; t1)\n+1 (y; t1)\n"
    c = parse_cycle_file(text)
    assert len(c) == 2
    assert c.terms[point(x, var("t1"))] == 1


def test_other_parameter_name():
    text = "parameter: z\nslots: 1\n+1 (a; (z - 2)/(z + 3))\n"
    c = parse_cycle_file(text)
    (term, _), = list(c)
    assert term.is_curve


def test_empty_cycle_needs_slots():
    assert parse_cycle_file("slots: 3\n").is_zero()
    with pytest.raises(ParseError):
        parse_cycle_file("# nothing\n")


@pytest.mark.parametrize("c", [
    totaro_c2(a, b1, b2),
    boundary(totaro_c2(a, b1, b2)),
    delta(FormalCycle.of(point(x, var("t1")), ModulusRing((2,)))),
    reduced_curve(),
    concat(point_corpus(1)[1], point_corpus(1, prefix="s", a="y")[1]),
] + [c for _, c in curve_corpus(3)], ids=lambda c: f"{c.n}-slot")
def test_round_trip(c):
    text = format_cycle_file(c)
    back = parse_cycle_file(text)
    assert back == c and back.ring == c.ring and back.decomposable == c.decomposable
    assert format_cycle_file(back) == text


def test_parameter_avoids_symbol_clash():
    c = FormalCycle.of(point(var("s"), var("t1")), ModulusRing((2,)))
    text = format_cycle_file(c)
    assert "parameter: s1" in text
    assert parse_cycle_file(text) == c


def test_file_helpers(tmp_path):
    path = tmp_path / "c2.cyc"
    write_cycle_file(str(path), totaro_c2(a, b1, b2))
    assert read_cycle_file(str(path)) == totaro_c2(a, b1, b2)


@pytest.mark.parametrize("text,exc,needle", [
    ("slots: 1\n+1 x; t1\n", ParseError, "line 2"),
    ("slots: 1\n+1 (x, t1)\n", ParseError, "';'"),
    ("symbols: x\nslots: 1\n+1 (x; t1)\n", ParseError, "line 3"),
    ("slots: 1\n+1 (x; 1)\n", AdmissibilityError, "line 2"),
    ("slots: 2\n+1 (x; t1)\n", ParseError, "expected 2"),
    ("+1 (s; s)\n", ParseError, "affine coordinate depends"),
    ("+1 (0; s, s + 2)\n", AdmissibilityError, "line 1"),
    ("symbols: s\nslots: 0\n", ParseError, "parameter"),
    ("modulus: two\nslots: 0\n", ParseError, "modulus"),
])
def test_errors(text, exc, needle):
    with pytest.raises(exc) as info:
        parse_cycle_file(text)
    assert needle in str(info.value)
