"""Sphere classes in blown-up planes and the exhaustive embedding search.

A rooted plumbing records a configuration of rational curves; this
module answers the homological question of how that configuration can
sit inside a blow-up of the plane.  Classes live in the odd unimodular
lattice <h, e_0, e_1, ...> with h.h = +1 and e_i.e_i = -1.  A sphere of
self-intersection s must satisfy the adjunction equality, which leaves
only finitely many coefficient multisets (profiles); the search assigns
classes vertex by vertex in breadth-first order from the root (which is
always sent to h), breaks the permutation symmetry of exceptional
indices by orbit prefixes, and discards partial assignments that no
positive area form supports.  Results are relabelled canonically and
sorted, so repeated runs and different thread counts agree bit for bit.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Iterator, Literal, Mapping, Optional, Sequence, Union

from .linalg import int_det, int_kernel_basis
from .plumbing import PlumbingGraph

ECoeffs = tuple[tuple[int, int], ...]
Parity = Literal["even", "odd"]


def _normalize(coeffs: Union[Mapping[int, int], Iterable[tuple[int, int]]]) -> ECoeffs:
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    merged: dict[int, int] = {}
    for i, c in items:
        merged[i] = merged.get(i, 0) + c
    return tuple(sorted((i, c) for i, c in merged.items() if c != 0))


@dataclass(frozen=True)
class HClass:
    """a0*h + sum(c_i * e_i), with the e-coefficients stored sparsely."""

    a0: int
    coeffs: ECoeffs = ()

    def __post_init__(self) -> None:
        prev = -1
        for i, c in self.coeffs:
            if i <= prev:
                raise ValueError("coefficients must be sorted by index")
            if c == 0:
                raise ValueError("zero coefficients must be dropped")
            prev = i

    @classmethod
    def make(
        cls, a0: int, coeffs: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()
    ) -> "HClass":
        return cls(a0, _normalize(coeffs))

    def coeff(self, i: int) -> int:
        for j, c in self.coeffs:
            if j == i:
                return c
        return 0

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.coeffs)

    def pairing(self, other: "HClass") -> int:
        val = self.a0 * other.a0
        mine = dict(self.coeffs)
        for i, c in other.coeffs:
            val -= mine.get(i, 0) * c
        return val

    @property
    def square(self) -> int:
        return self.pairing(self)

    def __str__(self) -> str:
        parts: list[str] = []
        if self.a0 == 1:
            parts.append("h")
        elif self.a0 == -1:
            parts.append("-h")
        elif self.a0 != 0:
            parts.append(f"{self.a0}h")
        for i, c in self.coeffs:
            sign = "+" if c > 0 else "-"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}e{i}")
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


_TERM = re.compile(r"([+-]?)(\d*)(?:(h)|e(\d+))")


def parse_class(text: str) -> HClass:
    """Inverse of str(HClass), e.g. "h-e0-e1", "2h-e0", "e1-e2"."""
    s = text.replace(" ", "")
    if s == "0":
        return HClass(0)
    a0 = 0
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None:
            raise ValueError(f"cannot parse class {text!r} at {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            a0 += sign * mag
        else:
            i = int(m.group(4))
            coeffs[i] = coeffs.get(i, 0) + sign * mag
        pos = m.end()
    return HClass.make(a0, coeffs)


def canonical_class(n: int) -> HClass:
    """-3h + e_0 + ... + e_{n-1}, so K.A = -3*a0 - sum of coefficients."""
    return HClass(-3, tuple((i, 1) for i in range(n)))


def adjunction_profiles(a0: int, s: int) -> list[tuple[int, ...]]:
    """All coefficient multisets a rational a0-degree sphere of square s allows.

    Each profile is the multiset of nonzero e-coefficients, sorted in
    descending order, constrained by sum(c^2) = a0^2 - s and
    sum(c) = 2 - 3*a0 + s together with positivity of intersections
    against the exceptional spheres: a degree-zero class carries exactly
    one +1 and otherwise -1s, a positive-degree class only negatives.
    """
    if a0 < 0:
        raise ValueError("profiles are only defined for nonnegative degree")
    if a0 == 0:
        n_neg = -1 - s
        if n_neg < 0:
            return []
        return [(1,) + (-1,) * n_neg]
    sq = a0 * a0 - s
    sm = 3 * a0 - 2 - s
    if sq < 0 or sm < 0 or (sq == 0) != (sm == 0):
        return []
    if sq == 0:
        return [()]

    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], cap: int, rem_sum: int, rem_sq: int) -> None:
        if rem_sum == 0:
            if rem_sq == 0:
                out.append(tuple(-b for b in reversed(prefix)))
            return
        for b in range(min(cap, rem_sum, isqrt(rem_sq)), 0, -1):
            rs, rq = rem_sum - b, rem_sq - b * b
            # the remaining rs entries lie in [1, b], so rs <= rq <= b*rs
            if rs <= rq <= b * rs:
                prefix.append(b)
                rec(prefix, b, rs, rq)
                prefix.pop()

    rec([], sm, sm, sq)
    return sorted(out, reverse=True)


def _phase1_feasible(cons: Sequence[tuple[Sequence[int], int]], nvars: int) -> bool:
    """Exact phase-one simplex: does {y >= 0, row.y >= rhs per row} admit a point?

    All right-hand sides are positive.  Bland's rule keeps the pivoting
    finite; everything is a Fraction, so there is no tolerance anywhere.
    """
    m = len(cons)
    width = nvars + 2 * m
    tableau: list[list[Fraction]] = []
    for i, (row, rhs) in enumerate(cons):
        r = [Fraction(v) for v in row] + [Fraction(0)] * (2 * m) + [Fraction(rhs)]
        r[nvars + i] = Fraction(-1)
        r[nvars + m + i] = Fraction(1)
        tableau.append(r)
    basis = [nvars + m + i for i in range(m)]

    def is_artificial(j: int) -> bool:
        return j >= nvars + m

    while True:
        enter = -1
        for j in range(width):
            red = (1 if is_artificial(j) else 0) - sum(
                tableau[i][j] for i in range(m) if is_artificial(basis[i])
            )
            if red < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best: Optional[Fraction] = None
        for i in range(m):
            if tableau[i][enter] > 0:
                ratio = tableau[i][-1] / tableau[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best, leave = ratio, i
        if leave < 0:
            raise AssertionError("phase-one objective cannot be unbounded")
        piv = tableau[leave][enter]
        tableau[leave] = [v / piv for v in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter]:
                f = tableau[i][enter]
                tableau[i] = [a - f * b for a, b in zip(tableau[i], tableau[leave])]
        basis[leave] = enter

    return not any(
        tableau[i][-1] for i in range(m) if is_artificial(basis[i])
    )


def _all_positive_feasible(rows: Sequence[Sequence[int]], nvars: int) -> bool:
    # exists x with every x_j > 0 and row.x > 0?  Scale-invariant, so ask
    # for x_j >= 1 and row.x >= 1 instead and substitute x = y + 1.
    cons = []
    for row in rows:
        rhs = 1 - sum(row)
        if rhs > 0:
            cons.append((row, rhs))
    if not cons:
        return True
    return _phase1_feasible(cons, nvars)


def area_feasible(classes: Iterable[HClass]) -> bool:
    """Can a symplectic form give h and every e_i and every class positive area?

    Area pairs with coefficients directly: class a0*h + sum(c_i e_i) gets
    a0*w(h) + sum(c_i * w(e_i)), and all of w(h), w(e_i) must be positive.
    """
    cl = list(classes)
    idx = sorted({i for c in cl for i, _ in c.coeffs})
    slot = {i: j + 1 for j, i in enumerate(idx)}
    rows = []
    for c in cl:
        row = [0] * (1 + len(idx))
        row[0] = c.a0
        for i, v in c.coeffs:
            row[slot[i]] = v
        rows.append(row)
    return _all_positive_feasible(rows, 1 + len(idx))


@dataclass(frozen=True)
class GramForm:
    """An integer bilinear form presented by a basis of lattice vectors."""

    basis: tuple[HClass, ...]
    matrix: tuple[tuple[int, ...], ...]
    det: int
    parity: Parity

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def negative_definite(self) -> bool:
        for j in range(1, self.rank + 1):
            minor = int_det([list(row[:j]) for row in self.matrix[:j]])
            if minor * (-1) ** j <= 0:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "basis": [str(b) for b in self.basis],
            "matrix": [list(row) for row in self.matrix],
            "det": self.det,
            "parity": self.parity,
        }


def _gram_of(basis: tuple[HClass, ...]) -> GramForm:
    matrix = tuple(tuple(x.pairing(y) for y in basis) for x in basis)
    det = int_det([list(row) for row in matrix]) if basis else 1
    parity: Parity = (
        "even" if all(matrix[i][i] % 2 == 0 for i in range(len(basis))) else "odd"
    )
    return GramForm(basis, matrix, det, parity)


@dataclass(frozen=True)
class Embedding:
    """A class assignment realizing a rooted plumbing inside <h, e_0..e_{N-1}>."""

    graph: PlumbingGraph
    classes: tuple[HClass, ...]
    n_used: int

    def __post_init__(self) -> None:
        g = self.graph
        if g.root is None:
            raise ValueError("an embedding needs a rooted graph")
        if len(self.classes) != g.n:
            raise ValueError("one class per vertex")
        if self.classes[g.root] != HClass(1):
            raise ValueError("the root must carry h")
        used = {i for c in self.classes for i in c.support()}
        if used != set(range(self.n_used)):
            raise ValueError("exceptional indices must be 0..n_used-1")
        kanon = canonical_class(self.n_used)
        for u, cu in enumerate(self.classes):
            if kanon.pairing(cu) != -2 - g.eulers[u]:
                raise ValueError(f"vertex {u} violates adjunction")
            for v in range(u, g.n):
                if cu.pairing(self.classes[v]) != g.pairing(u, v):
                    raise ValueError(f"classes at {u},{v} miss the graph pairing")

    @property
    def k(self) -> int:
        """Extra exceptional directions beyond the graph's own blow-ups."""
        return self.n_used - (self.graph.n - 1)

    def to_dict(self) -> dict:
        return {
            "classes": [str(c) for c in self.classes],
            "n_used": self.n_used,
            "k": self.k,
        }


def _bfs_order(g: PlumbingGraph) -> list[int]:
    from collections import deque

    order = [g.root]
    seen = {g.root}
    queue = deque(order)
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    if len(order) != g.n:
        raise ValueError("embedding search needs a connected graph")
    return order


def _orbits(cos: Sequence[Mapping[int, int]], n_used: int) -> list[list[int]]:
    # indices with the same coefficient history are interchangeable; the
    # search only ever takes a prefix of each orbit
    groups: dict[tuple[int, ...], list[int]] = {}
    for i in range(n_used):
        col = tuple(c.get(i, 0) for c in cos)
        groups.setdefault(col, []).append(i)
    return sorted(groups.values(), key=lambda o: o[0])


def _grouped(profile: tuple[int, ...]) -> list[tuple[int, int]]:
    out: list[list[int]] = []
    for v in profile:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return [(v, c) for v, c in out]


def _distributions(
    groups: Sequence[tuple[int, int]], orbits: Sequence[Sequence[int]], fresh_start: int
) -> Iterator[tuple[list[tuple[int, int]], int]]:
    """Assign each profile value a distinct index, up to index symmetry.

    Values are placed into prefixes of the interchangeability orbits or
    onto consecutive fresh indices; yields (index, value) lists together
    with the new fresh-index watermark.
    """
    taken = [0] * len(orbits)
    acc: list[tuple[int, int]] = []

    def per_group(gi: int, fresh_at: int) -> Iterator[tuple[list[tuple[int, int]], int]]:
        if gi == len(groups):
            yield list(acc), fresh_at
            return
        val, cnt = groups[gi]

        def per_orbit(oi: int, left: int) -> Iterator[tuple[list[tuple[int, int]], int]]:
            if oi == len(orbits):
                mark = len(acc)
                acc.extend((fresh_at + j, val) for j in range(left))
                yield from per_group(gi + 1, fresh_at + left)
                del acc[mark:]
                return
            members = orbits[oi]
            room = len(members) - taken[oi]
            for t in range(min(left, room), -1, -1):
                if t == 0:
                    yield from per_orbit(oi + 1, left)
                    continue
                mark = len(acc)
                base = taken[oi]
                acc.extend((members[base + j], val) for j in range(t))
                taken[oi] += t
                yield from per_orbit(oi + 1, left - t)
                taken[oi] -= t
                del acc[mark:]

        yield from per_orbit(0, cnt)

    yield from per_group(0, fresh_start)


def _canonical_classes(
    by_vertex: Sequence[tuple[int, Mapping[int, int]]]
) -> tuple[HClass, ...]:
    # relabel indices by first use scanning vertices in order; inside one
    # class larger coefficients come first, and same-coefficient ties go
    # to the index whose later history compares smaller
    nv = len(by_vertex)
    mapping: dict[int, int] = {}
    nxt = 0
    for v, (_, co) in enumerate(by_vertex):
        fresh = [i for i in co if i not in mapping]

        def key(i: int, v: int = v) -> tuple:
            future = tuple(by_vertex[u][1].get(i, 0) for u in range(v + 1, nv))
            return (-co[i], future)

        for i in sorted(fresh, key=key):
            mapping[i] = nxt
            nxt += 1
    return tuple(
        HClass.make(a0, {mapping[i]: c for i, c in co.items()})
        for a0, co in by_vertex
    )


def _zeros_feasible(zero_rows: Sequence[Mapping[int, int]]) -> bool:
    # degree-zero classes are the only ones an area form can starve:
    # anything with a0 > 0 is fed by a large enough w(h)
    idx = sorted(set().union(*zero_rows)) if zero_rows else []
    slot = {i: j for j, i in enumerate(idx)}
    rows = []
    for z in zero_rows:
        row = [0] * len(idx)
        for i, c in z.items():
            row[slot[i]] = c
        rows.append(row)
    return _all_positive_feasible(rows, len(idx))


class _Search:
    def __init__(self, g: PlumbingGraph):
        if g.root is None:
            raise ValueError("embedding search needs a rooted graph")
        if g.eulers[g.root] != 1:
            raise ValueError("the root must be a +1 sphere")
        self.g = g
        self.order = _bfs_order(g)
        self.req = [[g.pairing(u, v) for v in range(g.n)] for u in range(g.n)]
        self.profiles: list[list[tuple[int, ...]]] = []
        for v in self.order:
            if v == g.root:
                self.profiles.append([()])
            else:
                self.profiles.append(
                    adjunction_profiles(self.req[v][g.root], g.eulers[v])
                )

    def candidates(
        self,
        pos: int,
        assigned: Sequence[tuple[int, dict[int, int]]],
        zero_rows: Sequence[dict[int, int]],
        n_used: int,
    ) -> Iterator[tuple[int, dict[int, int], int]]:
        v = self.order[pos]
        a0 = 1 if v == self.g.root else self.req[v][self.g.root]
        cos = [co for _, co in assigned]
        for profile in self.profiles[pos]:
            groups = _grouped(profile)
            orbits = _orbits(cos, n_used)
            for items, new_used in _distributions(groups, orbits, n_used):
                co = dict(items)
                ok = True
                for upos, (ua0, uco) in enumerate(assigned):
                    small, big = (co, uco) if len(co) <= len(uco) else (uco, co)
                    got = ua0 * a0 - sum(c * big.get(i, 0) for i, c in small.items())
                    if got != self.req[self.order[upos]][v]:
                        ok = False
                        break
                if not ok:
                    continue
                if a0 == 0 and not _zeros_feasible([*zero_rows, co]):
                    continue
                yield a0, co, new_used

    def dfs(
        self,
        pos: int,
        assigned: list[tuple[int, dict[int, int]]],
        zero_rows: list[dict[int, int]],
        n_used: int,
        sink: dict,
    ) -> None:
        if pos == self.g.n:
            self.emit(assigned, n_used, sink)
            return
        for a0, co, new_used in self.candidates(pos, assigned, zero_rows, n_used):
            assigned.append((a0, co))
            if a0 == 0:
                zero_rows.append(co)
            self.dfs(pos + 1, assigned, zero_rows, new_used, sink)
            if a0 == 0:
                zero_rows.pop()
            assigned.pop()

    def emit(
        self, assigned: Sequence[tuple[int, dict[int, int]]], n_used: int, sink: dict
    ) -> None:
        by_vertex: list[tuple[int, dict[int, int]]] = [None] * self.g.n  # type: ignore
        for pos, entry in enumerate(assigned):
            by_vertex[self.order[pos]] = entry
        classes = _canonical_classes(by_vertex)
        emb = Embedding(self.g, classes, n_used)
        key = (emb.n_used, tuple((c.a0, c.coeffs) for c in classes))
        sink.setdefault(key, emb)


def enumerate_embeddings(g: PlumbingGraph, threads: int = 1) -> tuple[Embedding, ...]:
    """All class assignments for the rooted graph, canonical and sorted.

    The root maps to h, which forces every other vertex's h-degree to be
    its pairing with the root; adjunction then leaves finitely many
    coefficient profiles per vertex.  Partial assignments are pruned by
    the required pairings and by exact area feasibility of the
    degree-zero classes seen so far.  Output order and labelling do not
    depend on the thread count.
    """
    search = _Search(g)
    if any(not p for p in search.profiles):
        return ()
    found: dict = {}
    seed: list[tuple[int, dict[int, int]]] = [(1, {})]
    if g.n == 1:
        search.emit(seed, 0, found)
    elif threads <= 1:
        search.dfs(1, seed, [], 0, found)
    else:
        first = list(search.candidates(1, seed, [], 0))

        def branch(cand: tuple[int, dict[int, int], int]) -> dict:
            a0, co, n_used = cand
            local: dict = {}
            zero_rows = [co] if a0 == 0 else []
            search.dfs(2, [(1, {}), (a0, co)], zero_rows, n_used, local)
            return local

        if first:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for local in pool.map(branch, first):
                    for key, emb in local.items():
                        found.setdefault(key, emb)

    embeddings = tuple(found[key] for key in sorted(found))
    for emb in embeddings:
        _assert_positive_scan(emb)
    return embeddings


def _assert_positive_scan(emb: Embedding) -> None:
    # no exceptional index may carry +1 in two distinct classes: the
    # corresponding spheres would intersect the same exceptional sphere
    # negatively, which the pairing constraints already forbid
    seen: set[int] = set()
    for c in emb.classes:
        for i, v in c.coeffs:
            if v == 1:
                assert i not in seen, f"index {i} is positive twice"
                seen.add(i)


def _orthogonal_form(emb: Embedding, drop_root: bool) -> GramForm:
    n = emb.n_used
    rows = []
    for v, c in enumerate(emb.classes):
        if drop_root and v == emb.graph.root:
            continue
        rows.append([c.a0] + [-c.coeff(i) for i in range(n)])
    kernel = int_kernel_basis(rows, 1 + n)
    if len(kernel) != 1 + n - len(rows):
        raise ValueError("configuration classes are rationally dependent")
    for vec in kernel:
        lead = next((v for v in vec if v), 1)
        if lead < 0:
            vec[:] = [-v for v in vec]
    basis = tuple(
        HClass.make(vec[0], {i: vec[i + 1] for i in range(n)}) for vec in kernel
    )
    return _gram_of(basis)


def complement_form(emb: Embedding) -> GramForm:
    """Form of the orthogonal complement of all vertex classes (the filling)."""
    return _orthogonal_form(emb, drop_root=False)


def ambient_form(emb: Embedding) -> GramForm:
    """Form orthogonal to the non-root classes: where the root curve lands."""
    return _orthogonal_form(emb, drop_root=True)


def ambient(emb: Embedding, blowups: Optional[int] = None) -> str:
    """Name the closed manifold carrying the root curve after blowing down.

    With the graph built by successive blow-ups, k = n_used - blowups
    counts the exceptional directions the embedding does not consume:
    k = 0 is the plane; an even rank-two residual form is the sphere
    product; otherwise a k-fold blow-up of the plane.
    """
    b = (emb.graph.n - 1) if blowups is None else blowups
    k = emb.n_used - b
    if k < 0:
        raise ValueError("more blow-ups than exceptional indices in use")
    if k == 0:
        return "CP2"
    if ambient_form(emb).parity == "even":
        assert k == 1, "even residual forms only arise with one spare index"
        return "S2xS2"
    return f"CP2#{k}"
