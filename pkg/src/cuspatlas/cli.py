"""Command line front end, one subcommand per stage of the toolchain.

Every subcommand assembles a Report dict (command echo, inputs, results,
provenance tags collected from catalog hits, tool version) and prints a
short text summary by default, the full report with --json, or DOT
source with --dot where a graph is involved.  Exit status 0 means the
run finished without negative findings, 2 flags an obstructed or
unrealizable answer so shell pipelines can branch on it, and 1 is a
usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from itertools import combinations
from math import isqrt
from typing import Optional, Sequence

from . import __version__
from .blowdown import OBSTRUCTED, blow_down_trace, catalog_lookup
from .cf import fib
from .cusp import CuspCombo, CuspType, ms_recognize, unicuspidal_families
from .lattice import (
    Embedding,
    HClass,
    ambient,
    complement_form,
    enumerate_embeddings,
)
from .lens import LensSpace, fibonacci_boundary, rational_ball_string
from .lens import to_dict as lens_report
from .lens import wahl_family
from .obstruct import classify_degree
from .plumbing import (
    CapRecipe,
    PlumbingGraph,
    build_cap,
    cap_for_combo,
    curve_resolution,
)


class UsageError(Exception):
    """Bad command line input; reported on stderr with exit status 1."""


def _parse_cusp(text: str) -> CuspType:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"a cusp is written p,q not {text!r}")
    try:
        p, q = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"a cusp is written p,q not {text!r}") from None
    return CuspType(p, q)


def _parse_combo(text: str) -> CuspCombo:
    """Read "2,3+2,5" and infer the degree from the genus budget."""
    cusps = tuple(_parse_cusp(part) for part in text.split("+"))
    total = sum(c.delta for c in cusps)
    d = (3 + isqrt(8 * total + 1)) // 2
    if (d - 1) * (d - 2) != 2 * total:
        raise UsageError(
            f"delta sum {total} of {text!r} is not a plane genus (d-1)(d-2)/2"
        )
    return CuspCombo(d, cusps)


def _parse_cap(spec: Sequence[str]) -> CapRecipe:
    """Read a cap spec: "A 3", "B 2", "E3", "E6", or a cusp combination."""
    if not spec:
        raise UsageError("cap spec missing")
    head = spec[0]
    if head in ("A", "B"):
        if len(spec) != 2:
            raise UsageError(f"family {head} needs its parameter p")
        try:
            p = int(spec[1])
        except ValueError:
            raise UsageError(f"family parameter must be an integer: {spec[1]!r}")
        return CapRecipe(head + "_p", p=p)
    if head in ("E3", "E6"):
        if len(spec) != 1:
            raise UsageError(f"family {head} takes no parameter")
        return CapRecipe(head)
    if len(spec) != 1:
        raise UsageError(f"cannot read cap spec {' '.join(spec)!r}")
    combo = _parse_combo(head)
    recipe = cap_for_combo(combo)
    if recipe is None:
        raise UsageError(f"no stock cap recipe for {combo}")
    return recipe


def _parse_family(text: str) -> CapRecipe:
    name = text.replace("_", "")
    if name in ("E3", "E6"):
        return CapRecipe(name)
    if len(name) >= 2 and name[0] in ("A", "B") and name[1:].isdigit():
        return CapRecipe(name[0] + "_p", p=int(name[1:]))
    raise UsageError(f"unknown family {text!r}, expected A<p>, B<p>, E3 or E6")


def _report(command: str, inputs: dict, results: dict, provenance=()) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "provenance": sorted(set(provenance)),
        "version": __version__,
    }


def _graph_dict(g: PlumbingGraph) -> dict:
    return {
        "eulers": list(g.eulers),
        "labels": list(g.labels),
        "edges": [list(e) for e in g.edges],
        "corners": [list(c) for c in g.corners],
        "root": g.root,
        "det": g.det(),
    }


def _embedding_dict(emb: Embedding) -> dict:
    return {
        **emb.to_dict(),
        "ambient": ambient(emb),
        "complement": complement_form(emb).to_dict(),
    }


def _cap_dict(recipe: CapRecipe) -> dict:
    return {
        "kind": recipe.kind,
        "p": recipe.p,
        "combo": str(recipe.resolved_combo()),
        "modes": list(recipe.cusp_modes()),
    }


def _sphere_class(emb: Embedding) -> Optional[HClass]:
    """The complement class e_a - e_b - e_c - e_d if the filling has one."""
    for quad in combinations(range(emb.n_used), 4):
        for pos in quad:
            rest = {i: -1 for i in quad if i != pos}
            cls = HClass.make(0, {pos: 1, **rest})
            if all(cls.pairing(c) == 0 for c in emb.classes):
                return cls
    return None


def cmd_invariants(args) -> tuple[dict, list[str], Optional[str], int]:
    if args.seq is not None:
        if args.p is not None:
            raise UsageError("give either p q or --seq, not both")
        try:
            seq = tuple(int(x) for x in args.seq.split(","))
        except ValueError:
            raise UsageError(f"--seq wants comma separated integers: {args.seq!r}")
        cusp = ms_recognize(seq)
        inputs = {"seq": list(seq)}
        if cusp is None:
            rep = _report("invariants", inputs, {"status": "NotRealizable"})
            return rep, [f"{list(seq)}: NotRealizable"], None, 2
    else:
        if args.p is None or args.q is None:
            raise UsageError("invariants needs p q or --seq")
        cusp = CuspType(args.p, args.q)
        inputs = {"p": args.p, "q": args.q}
    results = {
        "status": "Realizable",
        "p": cusp.p,
        "q": cusp.q,
        "mult_seq": list(cusp.mult_seq()),
        "delta": cusp.delta,
        "milnor": cusp.milnor,
    }
    line = (
        f"({cusp.p},{cusp.q}): multiplicity sequence "
        f"{list(cusp.mult_seq())}, delta {cusp.delta}, milnor {cusp.milnor}"
    )
    return _report("invariants", inputs, results), [line], None, 0


def cmd_resolve(args) -> tuple[dict, list[str], Optional[str], int]:
    combo = _parse_combo(args.combo)
    if args.modes is None:
        modes = ("nc",) * len(combo.cusps)
    else:
        modes = tuple(args.modes.split(","))
        if len(modes) != len(combo.cusps):
            raise UsageError(
                f"{combo} needs {len(combo.cusps)} modes "
                "(they follow the sorted cusp order)"
            )
    g = curve_resolution(combo, modes)
    s = combo.degree**2 if args.s is None else args.s
    if s != combo.degree**2:
        eulers = list(g.eulers)
        eulers[g.root] += s - combo.degree**2
        g = replace(g, eulers=tuple(eulers))
    inputs = {"combo": str(combo), "modes": list(modes), "s": s}
    results = {"graph": _graph_dict(g), "central_weight": g.eulers[g.root]}
    lines = [
        f"{combo} resolved with modes {list(modes)}:",
        f"  {g.n} curves, central weight {g.eulers[g.root]}, det {g.det()}",
    ]
    return _report("resolve", inputs, results), lines, g.to_dot(), 0


def cmd_cap(args) -> tuple[dict, list[str], Optional[str], int]:
    recipe = _parse_cap(args.spec)
    g = build_cap(recipe)
    inputs = {"spec": list(args.spec)}
    results = {"cap": _cap_dict(recipe), "graph": _graph_dict(g)}
    lines = [
        f"cap {recipe.kind} for {recipe.resolved_combo()}:",
        f"  {g.n} curves, root weight {g.eulers[g.root]}, det {g.det()}",
        f"  eulers {list(g.eulers)}",
    ]
    return _report("cap", inputs, results), lines, g.to_dot(), 0


def cmd_embed(args) -> tuple[dict, list[str], Optional[str], int]:
    recipe = _parse_cap(args.spec)
    g = build_cap(recipe)
    embs = enumerate_embeddings(g)
    inputs = {"spec": list(args.spec)}
    results = {
        "cap": _cap_dict(recipe),
        "count": len(embs),
        "embeddings": [_embedding_dict(e) for e in embs],
    }
    lines = [f"cap {recipe.kind}: {len(embs)} embeddings"]
    for e in embs:
        form = complement_form(e)
        lines.append(
            f"  k={e.k} ambient {ambient(e)}, complement rank {form.rank} "
            f"det {form.det} ({form.parity})"
        )
    return _report("embed", inputs, results), lines, None, 0 if embs else 2


def cmd_blowdown(args) -> tuple[dict, list[str], Optional[str], int]:
    recipe = _parse_cap(args.spec)
    g = build_cap(recipe)
    embs = enumerate_embeddings(g)
    entries = []
    lines = []
    tags = []
    for e in embs:
        trace = blow_down_trace(e)
        entry = catalog_lookup(trace)
        tags.append(entry.provenance)
        entries.append(
            {
                "k": e.k,
                "ambient": ambient(e),
                "summary": trace.summary(),
                "image": trace.to_dict(),
                "catalog": entry.to_dict(),
            }
        )
        lines.append(f"  k={e.k} {trace.summary()}")
        lines.append(f"    {entry.pattern}: {entry.status} ({entry.reason})")
    inputs = {"spec": list(args.spec)}
    results = {"cap": _cap_dict(recipe), "count": len(embs), "entries": entries}
    dead = not embs or all(e["catalog"]["status"] == OBSTRUCTED for e in entries)
    lines.insert(0, f"cap {recipe.kind}: {len(embs)} embeddings")
    return _report("blowdown", inputs, results, tags), lines, None, 2 if dead else 0


def cmd_classify(args) -> tuple[dict, list[str], Optional[str], int]:
    records = classify_degree(args.degree)
    dicts = [r.to_dict() for r in records]
    tally: dict[str, int] = {}
    for r in dicts:
        tally[r["final_status"]] = tally.get(r["final_status"], 0) + 1
    tags = [
        f["catalog"]["provenance"]
        for r in dicts
        for f in r["fingerprints"]
        if f["catalog"]["provenance"]
    ]
    inputs = {"degree": args.degree}
    results = {
        "degree": args.degree,
        "count": len(records),
        "tally": {k: tally[k] for k in sorted(tally)},
        "records": dicts,
    }
    lines = [f"{r['combo']}: {r['final_status']}" for r in dicts]
    tally_text = ", ".join(f"{v} {k}" for k, v in sorted(tally.items()))
    lines.append(f"degree {args.degree}: {len(records)} combinations ({tally_text})")
    code = 2 if tally.get("Obstructed") else 0
    return _report("classify", inputs, results, tags), lines, None, code


def cmd_lens(args) -> tuple[dict, list[str], Optional[str], int]:
    L = LensSpace(args.p, args.q)
    results = lens_report(L)
    lines = [f"{L}: bounds {results['bounds']}"]
    if results["wahl"] is not None:
        m, k = results["wahl"]
        lines.append(f"  Wahl form ({m},{k}), ball string {results['rational_ball']}")
    else:
        lines.append("  no rational homology ball filling")
    inputs = {"p": args.p, "q": args.q}
    return _report("lens", inputs, results), lines, None, 0


def _fibonacci_index(cusp: CuspType, degree: int) -> Optional[int]:
    j = 5
    while fib(j) <= degree:
        if (cusp.p, cusp.q) == (fib(j - 2), fib(j + 2)) and degree == fib(j):
            return j
        j += 2
    return None


def _named_family(cusp: CuspType, degree: int) -> Optional[CapRecipe]:
    if (cusp.p, cusp.q) == (degree - 1, degree):
        return CapRecipe("A_p", p=degree - 1)
    if degree == 2 * cusp.p and cusp.q == 4 * cusp.p - 1:
        return CapRecipe("B_p", p=cusp.p)
    if (degree, cusp.p, cusp.q) == (8, 3, 22):
        return CapRecipe("E3")
    if (degree, cusp.p, cusp.q) == (16, 6, 43):
        return CapRecipe("E6")
    return None


def _unicuspidal_entry(cusp: CuspType, degree: int) -> dict:
    combo = CuspCombo(degree, (cusp,))
    recipe = _named_family(cusp, degree) or cap_for_combo(combo)
    entry: dict = {"cusp": [cusp.p, cusp.q], "degree": degree}
    if recipe is None:
        entry["family"] = None
        entry["note"] = "no stock cap recipe"
    else:
        entry["family"] = recipe.kind if recipe.p is None else f"{recipe.kind[0]}{recipe.p}"
        embs = enumerate_embeddings(build_cap(recipe))
        entry["count"] = len(embs)
        entry["ks"] = [e.k for e in embs]
        entry["ambients"] = [ambient(e) for e in embs]
        entry["complement_dets"] = [complement_form(e).det for e in embs]
        entry["complement_parities"] = [complement_form(e).parity for e in embs]
        if recipe.kind == "B_p":
            # rational blow-down: one filling carries a (-4)-sphere class
            for e in embs:
                cls = _sphere_class(e)
                if cls is not None:
                    entry["rational_blowdown"] = {
                        "k": e.k,
                        "class": str(cls),
                        "square": cls.square,
                    }
                    break
    j = _fibonacci_index(cusp, degree)
    if j is not None:
        L = fibonacci_boundary(j)
        ball = rational_ball_string(L)
        wahl = wahl_family(L)
        entry["fibonacci"] = {
            "j": j,
            "boundary": str(L),
            "wahl": None if wahl is None else list(wahl),
            "rational_ball": None if ball is None else list(ball),
        }
    return entry


def _unicuspidal_lines(entry: dict) -> list[str]:
    p, q = entry["cusp"]
    head = f"({p},{q}) degree {entry['degree']}"
    if entry.get("family") is None:
        out = [f"{head}: {entry['note']}"]
    else:
        n = entry["count"]
        out = [
            f"{head} [{entry['family']}]: {n} embedding{'s' if n != 1 else ''}, "
            f"k in {entry['ks']}, ambients {entry['ambients']}"
        ]
    if "rational_blowdown" in entry:
        rb = entry["rational_blowdown"]
        out.append(
            f"  rational blow-down of the (-4)-sphere {rb['class']} "
            f"in the k={rb['k']} filling"
        )
    if "fibonacci" in entry:
        fibo = entry["fibonacci"]
        out.append(
            f"  Fibonacci j={fibo['j']}: boundary {fibo['boundary']}, "
            f"Wahl {tuple(fibo['wahl'])}, ball string {fibo['rational_ball']}"
        )
    return out


def cmd_unicuspidal(args) -> tuple[dict, list[str], Optional[str], int]:
    if (args.family is None) == (args.degree is None):
        raise UsageError("unicuspidal needs exactly one of --degree or --family")
    if args.family is not None:
        recipe = _parse_family(args.family)
        combo = recipe.resolved_combo()
        entries = [_unicuspidal_entry(combo.cusps[0], combo.degree)]
        inputs = {"family": args.family}
    else:
        cusps = unicuspidal_families(args.degree)
        entries = [_unicuspidal_entry(c, args.degree) for c in cusps]
        inputs = {"degree": args.degree}
    lines: list[str] = []
    for entry in entries:
        lines.extend(_unicuspidal_lines(entry))
    if not lines:
        lines = [f"no known unicuspidal families at degree {args.degree}"]
    results = {"families": entries}
    return _report("unicuspidal", inputs, results), lines, None, 0


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract reserves 2 for
    # obstructed findings, so route usage problems through UsageError
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="atlas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand")

    def add(name: str, func, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="print the full report")
        p.set_defaults(func=func, dot=False)
        return p

    p = add("invariants", cmd_invariants, "cusp numerics from p,q or a mult seq")
    p.add_argument("p", type=int, nargs="?")
    p.add_argument("q", type=int, nargs="?")
    p.add_argument("--seq", help="comma separated multiplicity sequence")

    p = add("resolve", cmd_resolve, "resolve a combination on the plane curve")
    p.add_argument("combo", help='cusp combination, e.g. "2,3+2,5"')
    p.add_argument("--s", type=int, help="initial curve self-intersection")
    p.add_argument("--modes", help="per-cusp modes, e.g. nc,min+1")
    p.add_argument("--dot", action="store_true", help="print DOT source")

    p = add("cap", cmd_cap, "build a stock cap")
    p.add_argument("spec", nargs="+", help='"A 3", "B 2", "E3", "E6" or a combo')
    p.add_argument("--dot", action="store_true", help="print DOT source")

    p = add("embed", cmd_embed, "enumerate embeddings of a cap")
    p.add_argument("spec", nargs="+", help="cap spec as for the cap subcommand")

    p = add("blowdown", cmd_blowdown, "blow embeddings down to plane images")
    p.add_argument("spec", nargs="+", help="cap spec as for the cap subcommand")

    p = add("classify", cmd_classify, "run the pipeline over a whole degree")
    p.add_argument("--degree", type=int, required=True)

    p = add("lens", cmd_lens, "filling strings of a lens space")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)

    p = add("unicuspidal", cmd_unicuspidal, "survey unicuspidal families")
    p.add_argument("--degree", type=int)
    p.add_argument("--family", help="A<p>, B<p>, E3 or E6")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            return 1
        report, lines, dot, code = args.func(args)
    except UsageError as exc:
        print(f"atlas: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"atlas: error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        if dot is not None and args.dot:
            report["results"]["dot"] = dot
        print(json.dumps(report, indent=2))
    elif args.dot and dot is not None:
        sys.stdout.write(dot)
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
