"""Fillings of lens spaces through bounded zero strings.

A filling of L(p,q) corresponds to a string m with 1 <= m_i <= n_i and
[m_1,...,m_l] = 0, where n is the expansion of p/(p-q); the excess
sum(n_i - m_i) is the filling's second Betti number.  Under this
parameter convention the spaces L(m^2, mk-1) carry their rational
homology ball string directly: lowering one entry of n by 1 closes the
string exactly once, and only for them.

An excess-1 string differs from n at a single entry, so the ball
search probes len(n) candidates instead of walking the whole bounded
product space; sweeps must use it, full enumeration is for reports on
individual spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import List, Optional, Tuple

from .cf import (
    CFString,
    cf_expand,
    enumerate_zero_strings,
    excess,
    fib,
    is_zero_string,
    mod_inverse,
)


@dataclass(frozen=True)
class LensSpace:
    """L(p,q), oriented; q and its inverse mod p present the same space."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 2 or not 0 < self.q < self.p or gcd(self.p, self.q) != 1:
            raise ValueError(f"no lens space L({self.p},{self.q})")

    @property
    def q_inv(self) -> int:
        return mod_inverse(self.q, self.p)

    def canonical(self) -> "LensSpace":
        """The representative with the smaller of q and its inverse."""
        return LensSpace(self.p, min(self.q, self.q_inv))

    def reversed_orientation(self) -> "LensSpace":
        return LensSpace(self.p, self.p - self.q)

    def __str__(self) -> str:
        return f"L({self.p},{self.q})"


def wahl_family(L: LensSpace) -> Optional[Tuple[int, int]]:
    """(m, k) when p = m^2 and q or its inverse is mk-1 with m, k
    coprime; None otherwise."""
    m = isqrt(L.p)
    if m * m != L.p:
        return None
    for q2 in (L.q, L.q_inv):
        k, rem = divmod(q2 + 1, m)
        if rem == 0 and gcd(m, k) == 1:
            return m, k
    return None


def bounds(L: LensSpace) -> CFString:
    """The entry bounds for filling strings of L."""
    return cf_expand(L.p, L.p - L.q)


def filling_strings(L: LensSpace) -> List[Tuple[CFString, int]]:
    """Every filling string with its excess, in lexicographic order.
    Walks the bounded product space; meant for individual reports."""
    n = bounds(L)
    return [(m, excess(n, m)) for m in enumerate_zero_strings(n)]


def excess_one_strings(L: LensSpace) -> List[CFString]:
    """All excess-1 filling strings, one probe per lowerable entry."""
    n = bounds(L)
    out = []
    for j in range(len(n)):
        if n[j] >= 2:
            m = n[:j] + (n[j] - 1,) + n[j + 1 :]
            if is_zero_string(m):
                out.append(m)
    return out


def rational_ball_string(L: LensSpace) -> Optional[CFString]:
    """The unique excess-1 filling string, present exactly on the Wahl
    family; the lowered entry always sits on a 2 in the bounds."""
    ones = excess_one_strings(L)
    if not ones:
        assert wahl_family(L) is None, "Wahl space missing its ball string"
        return None
    assert wahl_family(L) is not None, "ball string off the Wahl family"
    assert len(ones) == 1, "rational-ball string is unique"
    (m,) = ones
    n = bounds(L)
    (j,) = [i for i in range(len(n)) if n[i] != m[i]]
    assert n[j] == 2, "the lowered entry sits on a 2"
    return m


def fibonacci_boundary(j: int) -> LensSpace:
    """L(F_j^2, F_{j-2}^2): what the one-cusp degree-F_j curve
    complement has for boundary, odd j >= 5."""
    if j < 5 or j % 2 == 0:
        raise ValueError("odd j >= 5")
    return LensSpace(fib(j) ** 2, fib(j - 2) ** 2)


def to_dict(L: LensSpace, string_limit: int = 1 << 20) -> dict:
    """CLI-facing report: strings, excesses, ball data, Wahl shape.
    Skips the full string listing when the bounded product space
    exceeds string_limit candidates."""
    ball = rational_ball_string(L)
    wahl = wahl_family(L)
    n = bounds(L)
    space = 1
    for a in n:
        space *= a
    out = {
        "p": L.p,
        "q": L.q,
        "q_inverse": L.q_inv,
        "bounds": list(n),
        "rational_ball": None if ball is None else list(ball),
        "wahl": None if wahl is None else list(wahl),
    }
    if space <= string_limit:
        out["strings"] = [
            {"string": list(m), "excess": chi} for m, chi in filling_strings(L)
        ]
    else:
        out["strings"] = None
        out["strings_note"] = f"listing skipped: {space} candidate strings"
    return out
