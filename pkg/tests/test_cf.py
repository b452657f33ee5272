from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspatlas.cf import (
    cf_dual,
    cf_eval,
    cf_expand,
    continuant,
    enumerate_zero_strings,
    excess,
    fib,
    is_zero_string,
    iter_strings_below,
    mod_inverse,
    zero_string_tails,
)


def eval_oracle(seq):
    """Independent evaluator: plain recursion on Fractions, None = infinity."""
    if not seq:
        return None
    tail = eval_oracle(seq[1:])
    if tail is None:
        return Fraction(seq[0])
    if tail == 0:
        return None
    return Fraction(seq[0]) - 1 / tail


coprime_pairs = st.integers(2, 400).flatmap(
    lambda p: st.tuples(
        st.just(p),
        st.integers(1, p - 1).filter(lambda q: gcd(p, q) == 1),
    )
)


def test_expand_frozen():
    assert cf_expand(22, 7) == (4, 2, 2, 2, 2, 2, 2)
    assert cf_expand(43, 7) == (7, 2, 2, 2, 2, 2, 2)
    assert cf_expand(25, 21) == (2, 2, 2, 2, 2, 5)
    assert cf_expand(4, 1) == (4,)
    assert cf_expand(4, 3) == (2, 2, 2)
    assert cf_expand(7, 3) == (3, 2, 2)
    assert cf_expand(2, 1) == (2,)


def test_expand_rejects_bad_input():
    with pytest.raises(ValueError):
        cf_expand(4, 2)
    with pytest.raises(ValueError):
        cf_expand(3, 3)


def test_eval_frozen():
    assert cf_eval((2, 2)) == Fraction(3, 2)
    assert cf_eval((2, 1, 2)) == 0
    assert cf_eval(()) is None
    assert cf_eval((4,)) == 4
    assert cf_eval((1, 1)) == 0  # the shortest zero string
    assert cf_eval((1, 1, 1)) is None  # [1,1] = 0, then 1 - 1/0


def test_eval_agrees_with_oracle_small():
    for seq in iter_strings_below((3, 3, 3, 3)):
        assert cf_eval(seq) == eval_oracle(seq)


@given(coprime_pairs)
def test_expand_eval_roundtrip(pq):
    p, q = pq
    seq = cf_expand(p, q)
    assert all(m >= 2 for m in seq)
    assert cf_eval(seq) == Fraction(p, q)


@given(coprime_pairs)
def test_continuant_matches_eval(pq):
    p, q = pq
    seq = cf_expand(p, q)
    assert Fraction(continuant(seq), continuant(seq[1:])) == Fraction(p, q)


@given(coprime_pairs)
def test_riemenschneider_duality(pq):
    p, q = pq
    seq = cf_expand(p, q)
    dual = cf_dual(seq)
    assert cf_eval(dual) == Fraction(p, p - q)
    # total weight is preserved: sum(a_i - 1) = sum(b_j - 1)
    assert sum(m - 1 for m in seq) == sum(m - 1 for m in dual)
    assert cf_dual(dual) == seq


def test_dual_frozen():
    assert cf_dual((2, 2, 2)) == (4,)
    assert cf_dual((4,)) == (2, 2, 2)


@given(coprime_pairs)
def test_reversal_inverts_q(pq):
    p, q = pq
    # [a_l, ..., a_1] expands p / (q^{-1} mod p)
    seq = cf_expand(p, q)
    assert tuple(reversed(seq)) == cf_expand(p, mod_inverse(q, p))


def test_zero_strings_frozen_sets():
    assert enumerate_zero_strings((2, 2, 2)) == [(1, 2, 1), (2, 1, 2)]
    assert enumerate_zero_strings((2, 2, 2, 2, 2, 5)) == [
        (1, 1, 1, 1, 2, 1),
        (1, 1, 1, 2, 1, 2),
        (1, 1, 2, 1, 2, 1),
        (1, 1, 2, 2, 1, 2),
        (1, 2, 1, 1, 1, 1),
        (1, 2, 1, 2, 1, 1),
        (1, 2, 2, 2, 2, 1),
        (2, 1, 1, 1, 1, 2),
        (2, 1, 2, 1, 1, 1),
        (2, 1, 2, 2, 1, 1),
        (2, 2, 2, 2, 1, 5),
    ]
    # all-2 bounds, counts by length
    assert [len(enumerate_zero_strings((2,) * l)) for l in range(2, 7)] == [
        1, 2, 1, 3, 10,
    ]
    assert enumerate_zero_strings((4,)) == []
    assert enumerate_zero_strings(()) == []


def test_zero_strings_exhaustive_against_bruteforce():
    for bounds in [(2, 2, 2), (3, 2, 4), (2, 2, 2, 2), (4, 3, 2, 3), (2, 3, 2, 3, 2)]:
        expected = [m for m in iter_strings_below(bounds) if eval_oracle(m) == 0]
        assert enumerate_zero_strings(bounds) == expected


@given(st.lists(st.integers(1, 4), min_size=1, max_size=6).map(tuple))
@settings(max_examples=200)
def test_zero_strings_lexicographic_and_valid(bounds):
    found = enumerate_zero_strings(bounds)
    assert found == sorted(found)
    for m in found:
        assert is_zero_string(m)
        assert all(1 <= mi <= ni for mi, ni in zip(m, bounds))


def test_zero_string_reversal_closure():
    # the continuant is palindromic-symmetric, so zero strings under
    # symmetric bounds are closed under reversal
    bounds = (3, 2, 3, 2, 3)
    found = set(enumerate_zero_strings(bounds))
    assert found
    for m in found:
        assert tuple(reversed(m)) in found


def test_zero_string_tails():
    tails = zero_string_tails((2, 1, 2))
    assert tails is not None
    # t_i must equal the value of the suffix starting at i
    for i, t in enumerate(tails):
        assert t == eval_oracle((2, 1, 2)[i:])
    assert zero_string_tails((2, 2)) is None


def test_excess():
    assert excess((2, 2, 2, 2, 2, 5), (2, 2, 2, 2, 1, 5)) == 1
    assert excess((2, 2, 2), (1, 2, 1)) == 2
    with pytest.raises(ValueError):
        excess((2, 2), (2,))


def test_fib():
    assert [fib(i) for i in range(11)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
