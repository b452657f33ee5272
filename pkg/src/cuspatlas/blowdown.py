"""Blowing an embedded configuration back down to plane curves.

The classes of an embedding live in <h, e_0..e_{N-1}>.  Contracting the
exceptional directions one at a time pushes the configuration forward
to the plane: whenever some configuration sphere's class has been
reduced to a bare e_k, that sphere is the next exceptional divisor and
collapses to a point of the image; otherwise a generic sphere in the
lowest available e_k is contracted instead.  Recording which curves
pass through every collapsed point (with which multiplicity), and which
earlier points ride on the collapsing sphere and so become infinitely
near the new one, determines the complete local intersection data of
the image curves.

The result is a ConfigFingerprint: component degrees plus a forest of
weighted base points.  catalog_lookup matches fingerprints against
plane configurations whose equisingular symplectic isotopy class is
settled, either obstructed (no symplectic realization at all) or unique
up to symplectic isotopy.  A fingerprint that is a known configuration
plus extra lines, each meeting the rest simply enough, reduces to the
known core one line at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Optional, Sequence

from .lattice import Embedding

OBSTRUCTED = "Obstructed"
UNIQUE = "UniqueIsotopy"
UNKNOWN = "Unknown"


@dataclass
class PointNode:
    """One base point of the image configuration, possibly infinitely
    near another (its parent).  mults maps component index to the
    multiplicity of that component's image at the point."""

    id: int
    parent: Optional[int]
    mults: Dict[int, int]

    def to_dict(self, labels: Sequence[str]) -> dict:
        return {
            "id": self.id,
            "parent": self.parent,
            "mults": {labels[c]: m for c, m in sorted(self.mults.items())},
        }


@dataclass(frozen=True)
class ConfigFingerprint:
    """Plane image of a blown-down embedding: component degrees plus
    the forest of weighted base points.

    Every intersection between two components is accounted for by the
    point forest: summing mult_u * mult_v over all nodes recovers the
    product of the degrees (checked on construction).  Nodes are in
    preorder, so a parent always precedes its children.
    """

    degrees: tuple[int, ...]
    labels: tuple[str, ...]
    nodes: tuple[PointNode, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.degrees):
            raise ValueError("labels and degrees disagree")
        if any(d < 1 for d in self.degrees):
            raise ValueError("component degrees must be positive")
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise ValueError("node ids must be 0..len-1 in order")
            if node.parent is not None:
                if not 0 <= node.parent < i:
                    raise ValueError("a parent must precede its child")
                par = self.nodes[node.parent]
                if not set(node.mults) <= set(par.mults):
                    raise ValueError("a child's curves must pass the parent")
            for c, m in node.mults.items():
                if not 0 <= c < len(self.degrees):
                    raise ValueError(f"node {i} names unknown component {c}")
                if m < 1:
                    raise ValueError("multiplicities must be positive")
        for u in range(len(self.degrees)):
            for v in range(u + 1, len(self.degrees)):
                total = sum(
                    n.mults.get(u, 0) * n.mults.get(v, 0) for n in self.nodes
                )
                if total != self.degrees[u] * self.degrees[v]:
                    raise ValueError(
                        f"components {u},{v} meet {total} times, "
                        f"want {self.degrees[u] * self.degrees[v]}"
                    )

    # -- forest helpers ------------------------------------------------

    def roots(self) -> list[int]:
        return [n.id for n in self.nodes if n.parent is None]

    def children(self, i: int) -> list[int]:
        return [n.id for n in self.nodes if n.parent == i]

    def tree(self, root: int) -> list[int]:
        out, stack = [], [root]
        while stack:
            i = stack.pop()
            out.append(i)
            stack.extend(reversed(self.children(i)))
        return out

    def node(self, i: int) -> PointNode:
        return self.nodes[i]

    def curves_in_cluster(self, root: int) -> set[int]:
        got: set[int] = set()
        for i in self.tree(root):
            got.update(self.nodes[i].mults)
        return got

    def cluster_pairing(self, root: int, u: int, v: int) -> int:
        return sum(
            self.nodes[i].mults.get(u, 0) * self.nodes[i].mults.get(v, 0)
            for i in self.tree(root)
        )

    def pair_clusters(self, u: int, v: int) -> list[tuple[int, int]]:
        out = []
        for r in self.roots():
            p = self.cluster_pairing(r, u, v)
            if p:
                out.append((r, p))
        return out

    def pair_pattern(self, u: int, v: int) -> tuple[int, ...]:
        return tuple(sorted((p for _, p in self.pair_clusters(u, v)), reverse=True))

    def simple_tangency(self, u: int, v: int) -> bool:
        """A point where u and v meet with contact exactly 2 and
        nothing else happens: a bare two-node chain on {u, v}."""
        want = {u: 1, v: 1}
        for r in self.roots():
            t = self.tree(r)
            if len(t) == 2 and all(self.nodes[i].mults == want for i in t):
                return True
        return False

    def singular_nodes(self, u: int) -> list[int]:
        return [n.id for n in self.nodes if n.mults.get(u, 0) >= 2]

    def components_of_degree(self, d: int) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    # -- restriction ---------------------------------------------------

    def restrict(self, keep: Sequence[int]) -> "ConfigFingerprint":
        """The fingerprint of the sub-configuration on these components.
        Points that stop witnessing anything (at most one curve, simply)
        are forgotten, as on an actual sub-curve."""
        keep = sorted(set(keep))
        remap = {c: i for i, c in enumerate(keep)}
        mults = [
            {remap[c]: m for c, m in n.mults.items() if c in remap}
            for n in self.nodes
        ]
        kept = _prune([n.parent for n in self.nodes], mults)
        order: list[int] = []

        def walk(i: int) -> None:
            if kept[i]:
                order.append(i)
            for j in self.children(i):
                walk(j)

        for r in self.roots():
            walk(r)
        newid = {old: i for i, old in enumerate(order)}

        def lifted_parent(old: int) -> Optional[int]:
            p = self.nodes[old].parent
            while p is not None and not kept[p]:
                p = self.nodes[p].parent
            return None if p is None else newid[p]

        nodes = tuple(
            PointNode(newid[old], lifted_parent(old), mults[old]) for old in order
        )
        return ConfigFingerprint(
            tuple(self.degrees[c] for c in keep),
            tuple(self.labels[c] for c in keep),
            nodes,
        )

    def remove_component(self, c: int) -> "ConfigFingerprint":
        return self.restrict([i for i in range(len(self.degrees)) if i != c])

    def to_dict(self) -> dict:
        def node_dict(i: int) -> dict:
            n = self.nodes[i]
            return {
                "mults": {self.labels[c]: m for c, m in sorted(n.mults.items())},
                "children": [node_dict(j) for j in self.children(i)],
            }

        return {
            "components": [
                {"label": lab, "degree": d}
                for lab, d in zip(self.labels, self.degrees)
            ],
            "clusters": [node_dict(r) for r in self.roots()],
        }

    def summary(self) -> str:
        degs = ",".join(str(d) for d in sorted(self.degrees))
        pts = []
        for r in sorted(self.roots()):
            curves = sorted(self.curves_in_cluster(r))
            size = len(self.tree(r))
            pts.append(f"[{'+'.join(self.labels[c] for c in curves)}]x{size}")
        return f"degrees({degs}) points " + " ".join(pts)


def _prune(parents: Sequence[Optional[int]], mults: Sequence[Dict[int, int]]) -> list[bool]:
    """Which nodes still witness geometry: at least two curves, one
    curve with multiplicity >= 2, or a surviving descendant."""
    n = len(parents)
    kids: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(parents):
        if p is not None:
            kids[p].append(i)
    kept = [False] * n

    def visit(i: int) -> bool:
        sub = any([visit(j) for j in kids[i]])
        own = len(mults[i]) >= 2 or any(m >= 2 for m in mults[i].values())
        kept[i] = sub or own
        return kept[i]

    for i in range(n):
        if parents[i] is None:
            visit(i)
    return kept


# -- the trace ---------------------------------------------------------


def blow_down_trace(emb: Embedding) -> ConfigFingerprint:
    """Contract all exceptional directions of the embedding and report
    the fingerprint of the resulting plane configuration.

    Pushing forward never changes a coefficient, it only deletes the
    contracted coordinate, so a curve passes through the point created
    at index k exactly when its class had a negative e_k coefficient,
    with multiplicity the negated coefficient.  Points previously
    created on a configuration sphere become infinitely near the point
    that sphere collapses to.  The pre-existing meets of the cap are
    seeded as contact chains so that every intersection of the final
    image curves is accounted for.
    """
    g = emb.graph
    coeff = [dict(c.coeffs) for c in emb.classes]
    a0 = [c.a0 for c in emb.classes]
    active = set(range(g.n))

    parents: list[Optional[int]] = []
    mults: list[Dict[int, int]] = []
    on: list[set[int]] = []

    def new_node(parent: Optional[int], m: Dict[int, int], touches: set[int]) -> int:
        parents.append(parent)
        mults.append(m)
        on.append(touches)
        return len(parents) - 1

    def seed_chain(u: int, v: int, order: int, below: Optional[int]) -> None:
        for _ in range(order):
            below = new_node(below, {u: 1, v: 1}, {u, v})

    corner_pairs: set[tuple[int, int]] = set()
    for x, y, z in g.corners:
        orders = {
            (x, y): g.pairing(x, y),
            (x, z): g.pairing(x, z),
            (y, z): g.pairing(y, z),
        }
        deep = [(pair, r) for pair, r in orders.items() if r > 1]
        if len(deep) > 1:
            raise ValueError("a corner admits at most one tangent pair")
        root = new_node(None, {x: 1, y: 1, z: 1}, {x, y, z})
        if deep:
            (u, v), r = deep[0]
            seed_chain(u, v, r - 1, root)
        corner_pairs.update(orders)
    for u, v, order in g.edges:
        if (u, v) not in corner_pairs:
            seed_chain(u, v, order, None)

    remaining = set(range(emb.n_used))
    steps = 0
    while remaining:
        shrink = None
        for v in sorted(active):
            if a0[v] == 0 and len(coeff[v]) == 1:
                ((k, c),) = coeff[v].items()
                if c == 1 and (shrink is None or k < shrink[0]):
                    shrink = (k, v)
        if shrink is not None:
            k, v = shrink
            m = {
                u: -coeff[u][k]
                for u in active
                if u != v and coeff[u].get(k, 0) < 0
            }
            nid = new_node(None, m, set(m))
            for i in range(nid):
                if parents[i] is None and v in on[i]:
                    parents[i] = nid
            active.remove(v)
        else:
            free = [
                k
                for k in sorted(remaining)
                if all(coeff[u].get(k, 0) <= 0 for u in active)
            ]
            if not free:
                raise RuntimeError("blow-down deadlock: every index is held up")
            k = free[0]
            m = {u: -coeff[u][k] for u in active if coeff[u].get(k, 0) < 0}
            new_node(None, m, set(m))
        for u in active:
            coeff[u].pop(k, None)
        remaining.discard(k)
        steps += 1
    assert steps == emb.n_used

    survivors = sorted(active)
    assert all(a0[v] > 0 and not coeff[v] for v in survivors)
    remap = {v: i for i, v in enumerate(survivors)}
    final_mults = [
        {remap[u]: m for u, m in node.items() if u in remap} for node in mults
    ]
    kept = _prune(parents, final_mults)

    kids: list[list[int]] = [[] for _ in parents]
    tops: list[int] = []
    for i, p in enumerate(parents):
        if p is None:
            tops.append(i)
        else:
            kids[p].append(i)
    order: list[int] = []

    def walk(i: int) -> None:
        if kept[i]:
            order.append(i)
        for j in kids[i]:
            walk(j)

    for i in tops:
        walk(i)
    newid = {old: i for i, old in enumerate(order)}

    def lifted(old: int) -> Optional[int]:
        p = parents[old]
        while p is not None and not kept[p]:
            p = parents[p]
        return None if p is None else newid[p]

    nodes = tuple(
        PointNode(newid[old], lifted(old), final_mults[old]) for old in order
    )
    return ConfigFingerprint(
        tuple(a0[v] for v in survivors),
        tuple(g.labels[v] for v in survivors),
        nodes,
    )


# -- the catalog -------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """Verdict of the plane-configuration catalog."""

    pattern: str
    status: str
    reason: str = ""
    provenance: str = ""

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "status": self.status,
            "reason": self.reason,
            "provenance": self.provenance,
        }


def _obstructed(pattern: str, reason: str) -> CatalogEntry:
    return CatalogEntry(pattern, OBSTRUCTED, reason, "catalog:" + pattern)


def _unique(pattern: str, reason: str = "") -> CatalogEntry:
    return CatalogEntry(pattern, UNIQUE, reason, "catalog:" + pattern)


_UNKNOWN_ENTRY = CatalogEntry("unmatched", UNKNOWN, "", "catalog:unmatched")


def _match_fano(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    # Seven lines meeting in seven triple points.  An obstructed
    # sub-arrangement obstructs the whole configuration, so scan all
    # 7-subsets of the degree-1 components.
    lines = f.components_of_degree(1)
    if len(lines) < 7:
        return None
    for sub in combinations(lines, 7):
        g = f.restrict(sub)
        triples = [
            frozenset(g.node(r).mults)
            for r in g.roots()
            if len(g.node(r).mults) == 3
        ]
        if len(triples) != 7:
            continue
        covered = {pair for t in triples for pair in combinations(sorted(t), 2)}
        if len(covered) == 21:
            return _obstructed(
                "fano-plane", "seven lines meeting in seven triple points"
            )
    return None


def _match_conic_pencil(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    # Three (or more) conics through four common transverse points,
    # plus a line tangent to three of them.
    conics = f.components_of_degree(2)
    lines = f.components_of_degree(1)
    for trio in combinations(conics, 3):
        shared = 0
        for r in f.roots():
            if set(trio) <= f.curves_in_cluster(r) and all(
                f.cluster_pairing(r, a, b) == 1 for a, b in combinations(trio, 2)
            ):
                shared += 1
        if shared != 4:
            continue
        for L in lines:
            if all(f.simple_tangency(L, q) for q in trio):
                return _obstructed(
                    "conic-pencil-common-tangent",
                    "three conics through four common points with a common tangent line",
                )
    return None


def _match_two_conic_contacts(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    # Two conics with a common tangent line whose mutual contact is a
    # single order-4 point, or two simple tangencies.
    conics = f.components_of_degree(2)
    lines = f.components_of_degree(1)
    for a, b in combinations(conics, 2):
        pat = f.pair_pattern(a, b)
        if pat not in ((4,), (2, 2)):
            continue
        for L in lines:
            if f.simple_tangency(L, a) and f.simple_tangency(L, b):
                if pat == (4,):
                    return _obstructed(
                        "two-conics-order4-contact-common-tangent",
                        "order-4 contact between two conics with a common tangent line",
                    )
                return _obstructed(
                    "two-conics-double-tangency-common-tangent",
                    "twice-tangent conics with a common tangent line",
                )
    return None


def _match_concurrent_tangents(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    # A conic with three tangent lines passing through one common point
    # away from the conic.
    for q in f.components_of_degree(2):
        tangent = [
            L for L in f.components_of_degree(1) if f.simple_tangency(L, q)
        ]
        for trio in combinations(tangent, 3):
            for r in f.roots():
                m = f.node(r).mults
                if all(m.get(L, 0) for L in trio) and q not in f.curves_in_cluster(r):
                    return _obstructed(
                        "conic-three-concurrent-tangents",
                        "three tangent lines of a conic through one point",
                    )
    return None


_OBSTRUCTION_MATCHERS = (
    _match_fano,
    _match_conic_pencil,
    _match_two_conic_contacts,
    _match_concurrent_tangents,
)


def _match_line_arrangement(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    if all(d == 1 for d in f.degrees) and len(f.degrees) <= 6:
        return _unique("line-arrangement", f"{len(f.degrees)} lines")
    return None


def _match_smooth_conic(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    if f.degrees == (2,) and not f.singular_nodes(0):
        return _unique("smooth-conic")
    return None


def _match_two_conics(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    if sorted(f.degrees) == [2, 2]:
        pat = f.pair_pattern(0, 1)
        return _unique("two-conics", f"contact pattern {pat}")
    return None


def _match_two_conics_common_tangent(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    if sorted(f.degrees) != [1, 2, 2]:
        return None
    (L,) = f.components_of_degree(1)
    a, b = f.components_of_degree(2)
    pat = f.pair_pattern(a, b)
    if pat not in ((1, 1, 1, 1), (2, 1, 1), (3, 1)):
        return None
    if f.simple_tangency(L, a) and f.simple_tangency(L, b):
        return _unique("two-conics-common-tangent", f"contact pattern {pat}")
    return None


def _match_three_conics_tangent_triangle(
    f: ConfigFingerprint,
) -> Optional[CatalogEntry]:
    # Three conics meeting in three points; at each, two are simply
    # tangent and the third passes transversally, every pair tangent at
    # exactly one of the points; plus a line tangent to all three.
    if sorted(f.degrees) != [1, 2, 2, 2]:
        return None
    (L,) = f.components_of_degree(1)
    conics = f.components_of_degree(2)
    if not all(f.simple_tangency(L, q) for q in conics):
        return None
    tangency_at = {}
    for a, b in combinations(conics, 2):
        if f.pair_pattern(a, b) != (2, 1, 1):
            return None
        (r,) = [s for s, p in f.pair_clusters(a, b) if p == 2]
        (third,) = set(conics) - {a, b}
        if (
            f.cluster_pairing(r, a, third) != 1
            or f.cluster_pairing(r, b, third) != 1
        ):
            return None
        tangency_at[(a, b)] = r
    if len(set(tangency_at.values())) != 3:
        return None
    return _unique(
        "three-conics-tangent-triangle",
        "pairwise tangent at three points with a common tangent line",
    )


def _match_four_conics_triple_flex(f: ConfigFingerprint) -> Optional[CatalogEntry]:
    # Four conics with a common point where three have mutual order-3
    # contact and the fourth order-2 contact with each; the three
    # remaining pair-of-deep-conics + shallow-conic meets are transverse
    # triple points; plus a line tangent to all four.
    if sorted(f.degrees) != [1, 2, 2, 2, 2]:
        return None
    (L,) = f.components_of_degree(1)
    conics = f.components_of_degree(2)
    if not all(f.simple_tangency(L, q) for q in conics):
        return None
    for r in f.roots():
        if not set(conics) <= f.curves_in_cluster(r):
            continue
        for w in conics:
            deep = [q for q in conics if q != w]
            if not all(
                f.cluster_pairing(r, a, b) == 3 for a, b in combinations(deep, 2)
            ):
                continue
            if not all(f.cluster_pairing(r, a, w) == 2 for a in deep):
                continue
            trip = set()
            good = True
            for a, b in combinations(deep, 2):
                others = [(s, p) for s, p in f.pair_clusters(a, b) if s != r]
                if len(others) != 1 or others[0][1] != 1:
                    good = False
                    break
                s = others[0][0]
                if (
                    f.cluster_pairing(s, a, w) != 1
                    or f.cluster_pairing(s, b, w) != 1
                ):
                    good = False
                    break
                trip.add(s)
            if good and len(trip) == 3:
                return _unique(
                    "four-conics-triple-flex",
                    "three conics in order-3 contact, a fourth tangent there, "
                    "with a common tangent line",
                )
    return None


def _match_curve_with_maximal_tangent(
    f: ConfigFingerprint,
) -> Optional[CatalogEntry]:
    # One degree-d curve whose only singularity is a plain point of
    # multiplicity d-1, plus a line with an order-d tangency at a
    # smooth point.
    if len(f.degrees) != 2 or 1 not in f.degrees or sorted(f.degrees)[1] < 2:
        return None
    (L,) = f.components_of_degree(1)
    (c,) = [i for i in range(2) if i != L]
    d = f.degrees[c]
    sing = f.singular_nodes(c)
    if d == 2:
        if sing:
            return None
    else:
        if len(sing) != 1 or f.node(sing[0]).mults != {c: d - 1}:
            return None
    contact = f.pair_clusters(L, c)
    if len(contact) != 1 or contact[0][1] != d:
        return None
    t = f.tree(contact[0][0])
    if len(t) != d or any(f.node(i).mults != {L: 1, c: 1} for i in t):
        return None
    return _unique("curve-with-maximal-tangent-line", f"degree {d}")


_UNIQUE_MATCHERS = (
    _match_line_arrangement,
    _match_smooth_conic,
    _match_two_conics,
    _match_two_conics_common_tangent,
    _match_three_conics_tangent_triangle,
    _match_four_conics_triple_flex,
    _match_curve_with_maximal_tangent,
)


def _peelable_line(f: ConfigFingerprint) -> Optional[int]:
    """A line that can be removed without touching the classification:
    either simply tangent to one curve at a plain point and otherwise
    generic, or everywhere transverse and through at most two points
    that remain special without it."""
    for L in sorted(f.components_of_degree(1)):
        if len(f.degrees) == 1:
            return None
        tangencies = 0
        specials = 0
        ok = True
        for r in f.roots():
            t = f.tree(r)
            places = [i for i in t if L in f.node(i).mults]
            if not places:
                continue
            if any(f.node(i).mults.get(L, 0) != 1 for i in places):
                ok = False
                break
            curves = f.curves_in_cluster(r)
            if (
                len(places) == 2
                and len(t) == 2
                and len(curves) == 2
                and all(len(f.node(i).mults) == 2 for i in t)
            ):
                tangencies += 1
                continue
            if places != [r]:
                ok = False
                break
            rest = {c: m for c, m in f.node(r).mults.items() if c != L}
            deeper = bool(f.children(r))
            if len(rest) >= 2 or any(m >= 2 for m in rest.values()) or deeper:
                specials += 1
        if not ok:
            continue
        if (tangencies == 1 and specials == 0) or (
            tangencies == 0 and specials <= 2
        ):
            return L
    return None


def catalog_lookup(f: ConfigFingerprint) -> CatalogEntry:
    """Match a fingerprint against the catalog, removing free lines as
    needed.  Unmatched configurations are reported Unknown, never
    guessed."""
    for matcher in _OBSTRUCTION_MATCHERS:
        hit = matcher(f)
        if hit is not None:
            return hit
    hits = [m(f) for m in _UNIQUE_MATCHERS]
    hits = [h for h in hits if h is not None]
    assert len(hits) <= 1, "catalog patterns overlap"
    if hits:
        return hits[0]
    L = _peelable_line(f)
    if L is not None:
        return catalog_lookup(f.remove_component(L))
    return _UNKNOWN_ENTRY
