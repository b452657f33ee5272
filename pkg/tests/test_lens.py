"""Lens space filling strings, ball recognition, the Wahl family."""

import json
from math import gcd

import pytest

from cuspatlas.cf import excess, fib
from cuspatlas.lens import (
    LensSpace,
    bounds,
    excess_one_strings,
    fibonacci_boundary,
    filling_strings,
    rational_ball_string,
    to_dict,
    wahl_family,
)


def test_lens_validation():
    for p, q in ((4, 2), (1, 1), (5, 5), (5, 0)):
        with pytest.raises(ValueError):
            LensSpace(p, q)


def test_inverse_and_canonical():
    L = LensSpace(25, 21)
    assert L.q_inv == 6
    assert L.canonical() == LensSpace(25, 6)
    assert L.reversed_orientation() == LensSpace(25, 4)
    assert str(L) == "L(25,21)"


def test_wahl_recognition():
    assert wahl_family(LensSpace(25, 4)) == (5, 1)
    assert wahl_family(LensSpace(9, 5)) == (3, 2)
    assert wahl_family(LensSpace(9, 2)) == (3, 1)
    assert wahl_family(LensSpace(4, 1)) == (2, 1)
    assert wahl_family(LensSpace(16, 3)) == (4, 1)
    assert wahl_family(LensSpace(7, 3)) is None
    assert wahl_family(LensSpace(4, 3)) is None
    assert wahl_family(LensSpace(16, 9)) is None


def test_bounds_convention():
    assert bounds(LensSpace(25, 4)) == (2, 2, 2, 2, 2, 5)
    assert bounds(LensSpace(25, 21)) == (7, 2, 2, 2)
    assert bounds(LensSpace(4, 1)) == (2, 2, 2)
    assert bounds(LensSpace(7, 6)) == (7,)


def test_filling_strings_small():
    assert dict(filling_strings(LensSpace(4, 1))) == {(1, 2, 1): 2, (2, 1, 2): 1}
    assert filling_strings(LensSpace(7, 6)) == []
    ones = [m for m, chi in filling_strings(LensSpace(25, 4)) if chi == 1]
    assert ones == [(2, 2, 2, 2, 1, 5)]


def test_rational_ball_strings():
    assert rational_ball_string(LensSpace(25, 4)) == (2, 2, 2, 2, 1, 5)
    assert rational_ball_string(LensSpace(9, 5)) == (3, 1, 2, 2)
    assert rational_ball_string(LensSpace(9, 2)) == (2, 2, 1, 3)
    assert rational_ball_string(LensSpace(7, 3)) is None
    assert rational_ball_string(LensSpace(4, 3)) is None


def test_excess_one_iff_wahl_small_sweep():
    for p in range(2, 41):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            L = LensSpace(p, q)
            ones = excess_one_strings(L)
            if wahl_family(L) is None:
                assert ones == [], (p, q)
            else:
                assert len(ones) == 1, (p, q)


def test_wahl_members_have_their_ball_string():
    for m in range(2, 10):
        for k in range(1, m):
            if gcd(m, k) != 1:
                continue
            L = LensSpace(m * m, m * k - 1)
            s = rational_ball_string(L)
            assert s is not None
            assert excess(bounds(L), s) == 1


def test_string_set_reverses_under_inverse():
    for p, q in ((25, 4), (25, 21), (13, 5), (18, 5), (12, 7)):
        L = LensSpace(p, q)
        M = LensSpace(p, L.q_inv)
        a = filling_strings(L)
        b = filling_strings(M)
        assert len(a) == len(b)
        assert sorted(chi for _, chi in a) == sorted(chi for _, chi in b)
        assert sorted(m for m, _ in a) == sorted(
            tuple(reversed(m)) for m, _ in b
        )


def test_fibonacci_family():
    for j in (5, 7, 9, 11, 13, 15):
        assert fib(j) ** 2 == fib(j - 2) * fib(j + 2) - 1
        L = fibonacci_boundary(j)
        assert (L.p, L.q) == (fib(j) ** 2, fib(j - 2) ** 2)
        assert wahl_family(L) == (fib(j), fib(j - 4))
    assert fibonacci_boundary(5) == LensSpace(25, 4)
    for bad in (4, 3, 6):
        with pytest.raises(ValueError):
            fibonacci_boundary(bad)


def test_report_dict():
    d = to_dict(LensSpace(4, 1))
    assert json.loads(json.dumps(d)) == d
    assert d["rational_ball"] == [2, 1, 2]
    assert d["wahl"] == [2, 1]
    assert {"string": [2, 1, 2], "excess": 1} in d["strings"]
    big = to_dict(LensSpace(fib(15) ** 2, fib(13) ** 2))
    assert big["strings"] is None and "strings_note" in big
    assert big["rational_ball"] is not None
