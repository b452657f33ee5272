"""Cusp singularities with one Puiseux pair and their numerical invariants.

A cusp of type (p, q) (2 <= p < q, coprime) is the singularity of
x^p = y^q.  The classification machinery needs its multiplicity
sequence, delta invariant, semigroup counting function, and the two
arithmetic gates (semigroup condition, Riemann-Hurwitz) on collections
of cusps sharing a plane curve of given degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

MultSeq = tuple[int, ...]


@dataclass(frozen=True, order=True)
class CuspType:
    p: int
    q: int

    def __post_init__(self) -> None:
        if not (2 <= self.p < self.q):
            raise ValueError(f"need 2 <= p < q, got ({self.p},{self.q})")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"need coprime, got ({self.p},{self.q})")

    @property
    def delta(self) -> int:
        # delta = number of semigroup gaps = (p-1)(q-1)/2
        return (self.p - 1) * (self.q - 1) // 2

    @property
    def milnor(self) -> int:
        return 2 * self.delta

    def mult_seq(self) -> MultSeq:
        return mult_seq(self.p, self.q)

    def semigroup_counts(self, upto: int) -> list[int]:
        """R(n) = #(semigroup <p,q> in [0, n)) for n = 0 .. upto."""
        member = [False] * max(upto, 1)
        for a in range(0, max(upto, 1), self.p):
            for b in range(a, max(upto, 1), self.q):
                member[b] = True
        counts = [0]
        for n in range(upto):
            counts.append(counts[-1] + (1 if member[n] else 0))
        return counts[: upto + 1]

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def mult_seq(p: int, q: int) -> MultSeq:
    """Multiplicity sequence of the (p,q) cusp: the Euclidean quotient
    runs, with the trailing run of 1s dropped."""
    if gcd(p, q) != 1 or not (2 <= p < q):
        raise ValueError(f"bad cusp ({p},{q})")
    seq: list[int] = []
    a, b = q, p
    while b > 1:
        k, r = divmod(a, b)
        seq.extend([b] * k)
        a, b = b, r
    return tuple(seq)


def ms_recognize(seq: MultSeq) -> Optional[CuspType]:
    """Inverse of mult_seq: the (p,q) whose multiplicity sequence this
    is, or None when no one-Puiseux-pair cusp realizes it.

    The runs of equal values must replay a Euclidean remainder chain
    ending at 1.
    """
    if not seq or any(m < 2 for m in seq):
        return None
    runs: list[tuple[int, int]] = []  # (value, count)
    for m in seq:
        if runs and runs[-1][0] == m:
            runs[-1] = (m, runs[-1][1] + 1)
        else:
            runs.append((m, 1))
    values = [v for v, _ in runs] + [1]
    counts = [c for _, c in runs]
    # remainder chain: values[i-1] = counts[i] * values[i] + values[i+1]
    for i in range(1, len(runs)):
        if values[i - 1] != counts[i] * values[i] + values[i + 1]:
            return None
    p = values[0]
    q = counts[0] * values[0] + values[1]
    if gcd(p, q) != 1 or not (2 <= p < q):
        return None
    if mult_seq(p, q) != tuple(seq):
        return None
    return CuspType(p, q)


def semigroup_R(cusp: CuspType, n: int) -> int:
    """Count of semigroup elements of <p,q> in [0, n)."""
    if n <= 0:
        return 0
    return cusp.semigroup_counts(n)[n]


@dataclass(frozen=True)
class CuspCombo:
    """A collection of cusps on a rational plane curve of degree d.

    The delta invariants must absorb the whole arithmetic genus:
    sum(delta) = (d-1)(d-2)/2.
    """

    degree: int
    cusps: tuple[CuspType, ...]

    def __post_init__(self) -> None:
        if self.degree < 3:
            raise ValueError("degree >= 3")
        if not self.cusps:
            raise ValueError("need at least one cusp")
        object.__setattr__(self, "cusps", tuple(sorted(self.cusps)))
        genus = (self.degree - 1) * (self.degree - 2) // 2
        total = sum(c.delta for c in self.cusps)
        if total != genus:
            raise ValueError(
                f"delta sum {total} != arithmetic genus {genus} at degree {self.degree}"
            )

    @property
    def total_milnor(self) -> int:
        return sum(c.milnor for c in self.cusps)

    def multi_sequence(self) -> tuple[MultSeq, ...]:
        return tuple(c.mult_seq() for c in self.cusps)

    def __str__(self) -> str:
        return "+".join(str(c) for c in self.cusps) + f" deg {self.degree}"


def combo_R(combo: CuspCombo, n: int) -> int:
    """Minimum convolution of the per-cusp counting functions at n.

    (R1 <> R2)(n) = min_k R1(k) + R2(n-k); since each R is 0 on
    nonpositives and nondecreasing, k ranges over [0, n].
    """
    if n <= 0:
        return 0
    tables = [c.semigroup_counts(n) for c in combo.cusps]
    acc = tables[0]
    for table in tables[1:]:
        acc = [
            min(acc[k] + table[m - k] for k in range(m + 1)) for m in range(n + 1)
        ]
    return acc[n]


def semigroup_condition(combo: CuspCombo) -> Optional[int]:
    """Borodzik-Livingston gate: R(jd+1) = (j+1)(j+2)/2 for
    j = -1 .. d-2.  Returns the first failing j, or None when the
    combo passes."""
    d = combo.degree
    for j in range(-1, d - 1):
        expected = (j + 1) * (j + 2) // 2
        if combo_R(combo, j * d + 1) != expected:
            return j
    return None


def riemann_hurwitz(combo: CuspCombo) -> Optional[CuspType]:
    """Pencil-projection count.  For the pencil through a cusp p with
    multiplicity sequence starting [m_p, m_p2]:

        2d - 2 m_p >= 2 + sum_{q != p} (m_q - 1) + (m_p2 - 1)

    and for a generic pencil point off the curve:

        2d - 2 >= sum_q (m_q - 1).

    Returns a cusp witnessing a violation (or the first cusp for the
    off-curve bound), None when every inequality holds.
    """
    d = combo.degree
    firsts = [c.mult_seq()[0] for c in combo.cusps]
    if 2 * d - 2 < sum(m - 1 for m in firsts):
        return combo.cusps[0]
    for i, c in enumerate(combo.cusps):
        ms = c.mult_seq()
        m_p = ms[0]
        m_p2 = ms[1] if len(ms) > 1 else 1
        others = sum(m - 1 for j, m in enumerate(firsts) if j != i)
        if 2 * d - 2 * m_p < 2 + others + (m_p2 - 1):
            return c
    return None


def cusp_types_with_delta(delta: int) -> list[CuspType]:
    """All one-Puiseux-pair types with (p-1)(q-1) = 2*delta, sorted."""
    out = []
    target = 2 * delta
    for a in range(1, target + 1):
        if target % a:
            continue
        p, q = a + 1, target // a + 1
        if 2 <= p < q and gcd(p, q) == 1:
            out.append(CuspType(p, q))
    return sorted(out)


def enumerate_combos(degree: int) -> list[CuspCombo]:
    """Every genus-balanced multiset of cusps at the given degree,
    deterministic order (sorted by the cusp tuple)."""
    genus = (degree - 1) * (degree - 2) // 2
    by_delta = {k: cusp_types_with_delta(k) for k in range(1, genus + 1)}
    results: list[tuple[CuspType, ...]] = []

    def extend(remaining: int, chosen: list[CuspType], floor: CuspType | None) -> None:
        if remaining == 0:
            results.append(tuple(chosen))
            return
        for k in range(1, remaining + 1):
            for c in by_delta[k]:
                if floor is not None and c < floor:
                    continue
                chosen.append(c)
                extend(remaining - k, chosen, c)
                chosen.pop()

    extend(genus, [], None)
    combos = [CuspCombo(degree, cs) for cs in results]
    combos.sort(key=lambda combo: combo.cusps)
    return combos


def unicuspidal_families(degree: int) -> list[CuspType]:
    """Members of the known unicuspidal families at this degree:
    (d-1, d); (d/2, 2d-1) for even d; the sporadic (3,22) at 8 and
    (6,43) at 16; the Fibonacci cusps (F_{j-2}, F_{j+2}) at F_j and
    (F_j^2, F_{j+2}^2) at F_j F_{j+2}, odd j."""
    from .cf import fib

    found = set()
    if degree >= 3:
        found.add(CuspType(degree - 1, degree))
    if degree >= 4 and degree % 2 == 0:
        found.add(CuspType(degree // 2, 2 * degree - 1))
    if degree == 8:
        found.add(CuspType(3, 22))
    if degree == 16:
        found.add(CuspType(6, 43))
    j = 5
    while fib(j) <= degree:
        if fib(j) == degree:
            found.add(CuspType(fib(j - 2), fib(j + 2)))
        j += 2
    j = 3
    while fib(j) * fib(j + 2) <= degree:
        if fib(j) * fib(j + 2) == degree:
            found.add(CuspType(fib(j) ** 2, fib(j + 2) ** 2))
        j += 2
    return sorted(found)
