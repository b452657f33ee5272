"""Exit codes, report shapes and text output of the atlas binary."""

import contextlib
import io
import json

import pytest

from cuspatlas.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--json")
    return code, json.loads(out)


def test_invariants_from_pair():
    code, out, _ = run("invariants", "2", "7")
    assert code == 0
    assert "[2, 2, 2]" in out and "delta 3" in out and "milnor 6" in out
    code, out, _ = run("invariants", "2", "3")
    assert code == 0 and "delta 1" in out


def test_invariants_recognizes_sequence():
    code, rep = run_json("invariants", "--seq", "3,3,2")
    assert code == 0
    r = rep["results"]
    assert (r["p"], r["q"], r["status"]) == (3, 8, "Realizable")


def test_invariants_not_realizable_exits_2():
    code, out, _ = run("invariants", "--seq", "3,2,2")
    assert code == 2 and "NotRealizable" in out


def test_invariants_usage_errors():
    assert run("invariants", "2")[0] == 1
    assert run("invariants", "2", "7", "--seq", "2,2")[0] == 1
    assert run("invariants", "--seq", "2,x")[0] == 1


def test_resolve_central_weight_default_and_shift():
    code, rep = run_json("resolve", "2,3+2,5", "--s", "16")
    assert code == 0 and rep["results"]["central_weight"] == 0
    _, rep2 = run_json("resolve", "2,3+2,5")
    assert rep2["results"] == rep["results"]
    _, rep = run_json("resolve", "4,5", "--s", "25")
    assert rep["results"]["central_weight"] == 5
    _, rep = run_json("resolve", "4,5", "--s", "26")
    assert rep["results"]["central_weight"] == 6


def test_resolve_mode_count_checked():
    assert run("resolve", "2,3+2,5", "--modes", "nc")[0] == 1


def test_resolve_rejects_impossible_genus():
    code, _, err = run("resolve", "2,5")
    assert code == 1 and "genus" in err


def test_cap_dot_output():
    code, out, _ = run("cap", "A", "3", "--dot")
    assert code == 0
    assert out.startswith("graph plumbing {")
    assert 'label="C (+1)"' in out


def test_cap_accepts_combo_spec():
    code, rep = run_json("cap", "2,3+2,3+2,3")
    assert code == 0
    graph = rep["results"]["graph"]
    assert graph["eulers"][graph["root"]] == 1


def test_embed_counts_and_dets():
    code, rep = run_json("embed", "B", "2")
    assert code == 0 and rep["results"]["count"] == 3
    code, rep = run_json("embed", "E6")
    assert rep["results"]["count"] == 6
    dets = [
        e["complement"]["det"]
        for e in rep["results"]["embeddings"]
        if e["ambient"] == "CP2#6"
    ]
    assert sorted(dets) == [64, 256]


def test_embed_without_solutions_exits_2():
    code, rep = run_json("embed", "3,7")
    assert code == 2 and rep["results"]["count"] == 0


def test_blowdown_tricuspidal_quartic():
    code, rep = run_json("blowdown", "2,3+2,3+2,3")
    assert code == 0
    statuses = [e["catalog"]["status"] for e in rep["results"]["entries"]]
    assert sorted(statuses) == ["Obstructed", "Obstructed", "UniqueIsotopy"]
    assert "catalog:fano-plane" in rep["provenance"]


def test_blowdown_dead_cap_exits_2():
    assert run("blowdown", "3,7")[0] == 2


def test_classify_tallies_and_exit_codes():
    code, rep = run_json("classify", "--degree", "5")
    assert code == 2
    assert rep["results"]["tally"] == {
        "Obstructed": 9,
        "UniqueInBlowup(4)": 2,
        "UniqueInPlane": 8,
    }
    code, rep = run_json("classify", "--degree", "4")
    assert code == 0 and rep["results"]["tally"] == {"UniqueInPlane": 4}


def test_lens_report():
    code, rep = run_json("lens", "25", "4")
    assert code == 0
    assert rep["results"]["wahl"] == [5, 1]
    assert rep["results"]["rational_ball"] == [2, 2, 2, 2, 1, 5]
    assert run("lens", "4", "2")[0] == 1


def test_unicuspidal_degree_five():
    code, rep = run_json("unicuspidal", "--degree", "5")
    assert code == 0
    by_cusp = {tuple(e["cusp"]): e for e in rep["results"]["families"]}
    assert by_cusp[(4, 5)]["family"] == "A4"
    assert by_cusp[(4, 5)]["count"] == 1
    fib5 = by_cusp[(2, 13)]["fibonacci"]
    assert fib5["j"] == 5
    assert fib5["boundary"] == "L(25,4)"
    assert fib5["wahl"] == [5, 1]


def test_unicuspidal_family_b3_blowdown_note():
    code, rep = run_json("unicuspidal", "--family", "B_3")
    assert code == 0
    (entry,) = rep["results"]["families"]
    assert entry["count"] == 2
    assert "even" in entry["complement_parities"]
    note = entry["rational_blowdown"]
    assert note["square"] == -4 and note["k"] == 1


def test_unicuspidal_no_recipe_still_reports():
    code, rep = run_json("unicuspidal", "--degree", "13")
    assert code == 0
    by_cusp = {tuple(e["cusp"]): e for e in rep["results"]["families"]}
    assert by_cusp[(5, 34)]["family"] is None
    assert by_cusp[(5, 34)]["fibonacci"]["boundary"] == "L(169,25)"


def test_unicuspidal_usage():
    assert run("unicuspidal")[0] == 1
    assert run("unicuspidal", "--degree", "5", "--family", "E3")[0] == 1
    assert run("unicuspidal", "--family", "Z9")[0] == 1


def test_usage_errors_exit_1():
    assert run()[0] == 1
    assert run("cap", "Z", "1")[0] == 1
    assert run("cap", "A")[0] == 1
    assert run("resolve", "2,4")[0] == 1
    assert run("embed", "2,3", "extra")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("invariants", "6", "43"),
        ("resolve", "2,5+3,5"),
        ("cap", "E3"),
        ("embed", "A", "5"),
        ("blowdown", "B", "2"),
        ("classify", "--degree", "4"),
        ("lens", "9", "5"),
        ("unicuspidal", "--family", "B4"),
    ],
)
def test_reports_round_trip_json(argv):
    _, rep = run_json(*argv)
    assert json.loads(json.dumps(rep)) == rep
    assert rep["command"] == argv[0]
    assert set(rep) == {"command", "inputs", "results", "provenance", "version"}
