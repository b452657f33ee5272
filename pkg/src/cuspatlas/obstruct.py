"""Obstruction rules and the per-combination classification pipeline.

Each rule reports a Pass or Fail verdict carrying a machine-checkable
witness.  Rules run unconditionally: a combination that dies at one
gate is still pushed through the others, so the record shows every
obstruction that bites.  When a stock cap exists the pipeline also
enumerates adjunctive embeddings, blows each one down, consults the
plane-configuration catalog, and aggregates a final status.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from .blowdown import (
    OBSTRUCTED,
    UNIQUE,
    CatalogEntry,
    ConfigFingerprint,
    blow_down_trace,
    catalog_lookup,
)
from .cusp import (
    CuspCombo,
    CuspType,
    combo_R,
    enumerate_combos,
    riemann_hurwitz,
    semigroup_condition,
)
from .lattice import Embedding, ambient, complement_form, enumerate_embeddings
from .plumbing import build_cap, cap_for_combo


@dataclass(frozen=True)
class ObstructionVerdict:
    """Outcome of one rule: Pass, or Fail with the violated instance."""

    rule: str
    outcome: str
    details: str = ""
    witness: Optional[dict] = None

    @property
    def failed(self) -> bool:
        return self.outcome == "Fail"

    def to_dict(self) -> dict:
        out = {"rule": self.rule, "outcome": self.outcome, "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# rules reserved in the report schema but not implemented here
DISABLED_RULES = (
    {"rule": "Spectrum", "note": "spectrum semicontinuity not implemented"},
    {"rule": "InvolutiveFloer", "note": "involutive Floer bounds not implemented"},
)


def semigroup_verdict(combo: CuspCombo) -> ObstructionVerdict:
    j = semigroup_condition(combo)
    if j is None:
        return ObstructionVerdict("Semigroup", "Pass")
    d = combo.degree
    got = combo_R(combo, j * d + 1)
    want = (j + 1) * (j + 2) // 2
    return ObstructionVerdict(
        "Semigroup",
        "Fail",
        f"counting function at {j * d + 1} gives {got}, needs {want}",
        {"j": j, "argument": j * d + 1, "value": got, "required": want},
    )


def rh_instances(
    degree: int, mult_seqs: Sequence[Sequence[int]]
) -> List[tuple[Union[int, str], int, int]]:
    """Every projection-count inequality as (base, lhs, rhs), lhs >= rhs
    required.  Bases: each cusp index (pencil through that cusp), plus
    "off-curve" for a generic pencil point."""
    firsts = [ms[0] for ms in mult_seqs]
    out: List[tuple[Union[int, str], int, int]] = [
        ("off-curve", 2 * degree - 2, sum(m - 1 for m in firsts))
    ]
    for i, ms in enumerate(mult_seqs):
        second = ms[1] if len(ms) > 1 else 1
        rhs = 2 + sum(m - 1 for j, m in enumerate(firsts) if j != i) + (second - 1)
        out.append((i, 2 * degree - 2 * ms[0], rhs))
    return out


def riemann_hurwitz_verdict(combo: CuspCombo) -> ObstructionVerdict:
    seqs = [c.mult_seq() for c in combo.cusps]
    bad = [
        (base, lhs, rhs)
        for base, lhs, rhs in rh_instances(combo.degree, seqs)
        if lhs < rhs
    ]
    # cross-check against the independent gate in the cusp module
    assert bool(bad) == (riemann_hurwitz(combo) is not None)
    if not bad:
        return ObstructionVerdict("RiemannHurwitz", "Pass")
    base, lhs, rhs = bad[0]
    name = "a generic point" if base == "off-curve" else str(combo.cusps[base])
    return ObstructionVerdict(
        "RiemannHurwitz",
        "Fail",
        f"pencil through {name} needs {lhs} >= {rhs}",
        {"base": base, "lhs": lhs, "rhs": rhs},
    )


_SPORADIC_SIMPLE = {(3, 4), (3, 5)}


def is_simple_cusp(c: CuspType) -> bool:
    return c.p == 2 or (c.p, c.q) in _SPORADIC_SIMPLE


def sextic_simple_verdict(combo: CuspCombo) -> ObstructionVerdict:
    """Degree-6 curves with only simple cusps cannot exist: the double
    plane branched over such a sextic is a K3 surface, whose lattice
    caps the total Milnor number at 19, while rationality forces 20."""
    if combo.degree != 6:
        return ObstructionVerdict("SexticSimple", "Pass", "inapplicable: degree != 6")
    if not all(is_simple_cusp(c) for c in combo.cusps):
        return ObstructionVerdict(
            "SexticSimple", "Pass", "inapplicable: non-simple cusp present"
        )
    mu = combo.total_milnor
    if mu <= 19:
        return ObstructionVerdict("SexticSimple", "Pass")
    return ObstructionVerdict(
        "SexticSimple",
        "Fail",
        f"total Milnor number {mu} exceeds the simple-singularity bound 19",
        {"total_milnor": mu, "bound": 19},
    )


@dataclass
class ClassificationRecord:
    """Everything the pipeline learned about one combination."""

    combo: CuspCombo
    verdicts: List[ObstructionVerdict]
    cap_kind: Optional[str]
    cap_error: Optional[str]
    embeddings: List[Embedding]
    fingerprints: List[ConfigFingerprint]
    entries: List[CatalogEntry]
    final_status: str

    def to_dict(self) -> dict:
        return {
            "combo": str(self.combo),
            "degree": self.combo.degree,
            "cusps": [[c.p, c.q] for c in self.combo.cusps],
            "verdicts": [v.to_dict() for v in self.verdicts],
            "disabled_rules": [dict(r) for r in DISABLED_RULES],
            "cap": self.cap_kind,
            "cap_error": self.cap_error,
            "embeddings": [
                {**e.to_dict(), "complement": complement_form(e).to_dict()}
                for e in self.embeddings
            ],
            "ambients": [ambient(e) for e in self.embeddings],
            "fingerprints": [
                {
                    "summary": f.summary(),
                    "image": f.to_dict(),
                    "catalog": entry.to_dict(),
                }
                for f, entry in zip(self.fingerprints, self.entries)
            ],
            "final_status": self.final_status,
        }


def _final_status(
    verdicts: List[ObstructionVerdict],
    cap_error: Optional[str],
    embeddings: List[Embedding],
    entries: List[CatalogEntry],
) -> str:
    if any(v.failed for v in verdicts):
        return "Obstructed"
    if cap_error is not None:
        return "Unknown"
    viable = [
        (e, ent) for e, ent in zip(embeddings, entries) if ent.status != OBSTRUCTED
    ]
    if not viable:
        return "Obstructed"
    plane = [(e, ent) for e, ent in viable if e.k == 0]
    if plane:
        if len(plane) == 1 and plane[0][1].status == UNIQUE:
            return "UniqueInPlane"
        return "Unknown"
    kmin = min(e.k for e, _ in viable)
    at_min = [(e, ent) for e, ent in viable if e.k == kmin]
    if len(at_min) == 1 and at_min[0][1].status == UNIQUE:
        return f"UniqueInBlowup({kmin})"
    return "Unknown"


def run_pipeline(combo: CuspCombo) -> ClassificationRecord:
    """Run every rule, then cap, embeddings, blow-downs, catalog."""
    verdicts = [
        semigroup_verdict(combo),
        riemann_hurwitz_verdict(combo),
        sextic_simple_verdict(combo),
    ]
    recipe = cap_for_combo(combo)
    cap_kind = cap_error = None
    embeddings: List[Embedding] = []
    fingerprints: List[ConfigFingerprint] = []
    entries: List[CatalogEntry] = []
    if recipe is None:
        cap_error = "no stock cap recipe for this combination"
    else:
        cap_kind = recipe.kind
        graph = build_cap(recipe)
        embeddings = enumerate_embeddings(graph)
        if embeddings:
            verdicts.append(
                ObstructionVerdict(
                    "NoAdjunctiveEmbedding",
                    "Pass",
                    f"{len(embeddings)} adjunctive embeddings",
                )
            )
        else:
            verdicts.append(
                ObstructionVerdict(
                    "NoAdjunctiveEmbedding",
                    "Fail",
                    "no adjunctive class assignment for the cap",
                    {"cap": recipe.kind, "vertices": graph.n},
                )
            )
        fingerprints = [blow_down_trace(e) for e in embeddings]
        entries = [catalog_lookup(f) for f in fingerprints]
        if embeddings:
            killed = [
                i for i, ent in enumerate(entries) if ent.status == OBSTRUCTED
            ]
            if len(killed) == len(entries):
                verdicts.append(
                    ObstructionVerdict(
                        "BlowdownCatalog",
                        "Fail",
                        "every embedding blows down to an obstructed configuration",
                        {
                            "embeddings": killed,
                            "patterns": [entries[i].pattern for i in killed],
                        },
                    )
                )
            else:
                unsettled = sum(
                    1 for ent in entries if ent.status not in (OBSTRUCTED, UNIQUE)
                )
                verdicts.append(
                    ObstructionVerdict(
                        "BlowdownCatalog",
                        "Pass",
                        f"{len(entries) - len(killed)} viable embeddings"
                        + (f", {unsettled} unsettled" if unsettled else ""),
                    )
                )
    status = _final_status(verdicts, cap_error, embeddings, entries)
    return ClassificationRecord(
        combo,
        verdicts,
        cap_kind,
        cap_error,
        embeddings,
        fingerprints,
        entries,
        status,
    )


def classify_degree(degree: int) -> List[ClassificationRecord]:
    """The pipeline over every genus-balanced combination, in the
    enumerator's deterministic order."""
    return [run_pipeline(combo) for combo in enumerate_combos(degree)]
