"""End-to-end command line checks: exit codes, report artifacts, and
byte-stable experiment output."""

import json

import pytest

from freebases import hyperbolicity
from freebases.agraph import MarkingEdge, MarkingGraph
from freebases.cli import main


def load(path):
    with open(path) as fh:
        return json.load(fh)


def write_graph(path, g):
    path.write_text(json.dumps(g.to_json_dict()))
    return str(path)


# -- fold ---------------------------------------------------------------------


def test_fold_reports_rose(tmp_path):
    out = tmp_path / "fold.json"
    rc = main(["fold", "--basis", "ab,b,c", "--json", str(out)])
    assert rc == 0
    report = load(out)
    assert report["final_is_rose"] is True
    assert report["single_fold_count"] == 1


def test_fold_non_basis_exits_one_but_writes_artifact(tmp_path):
    out = tmp_path / "fold.json"
    rc = main(["fold", "--basis", "aa,b,c", "--json", str(out), "--no-timings"])
    assert rc == 1
    report = load(out)
    assert report["final_is_rose"] is False


def test_fold_writes_dot(tmp_path):
    dot = tmp_path / "final.dot"
    rc = main(["fold", "--basis", "ab,b,c", "--json", str(tmp_path / "f.json"),
               "--dot", str(dot)])
    assert rc == 0
    assert dot.read_text().startswith("graph")


def test_fold_rejects_garbage_words(tmp_path):
    rc = main(["fold", "--basis", "a!,b,c", "--json", str(tmp_path / "f.json")])
    assert rc == 2


def test_rank_below_two_is_rejected(capsys, tmp_path):
    rc = main(["fold", "--basis", "a,b", "--rank", "1",
               "--json", str(tmp_path / "f.json")])
    assert rc == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "ValueError"


def test_default_report_path_uses_out_dir(tmp_path):
    rc = main(["fold", "--basis", "ab,b,c", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "fold.json").exists()


# -- path-bases ---------------------------------------------------------------


def test_path_bases_reaches_standard_basis(tmp_path):
    out = tmp_path / "pb.json"
    rc = main(["path-bases", "--b", "ab,bab,c", "--json", str(out)])
    assert rc == 0
    report = load(out)
    assert report["reaches_standard_basis"] is True
    assert report["all_pass_is_basis"] is True
    assert report["bases"][-1] == "a,b,c"


def test_path_bases_accepts_conjugate_of_standard(tmp_path):
    out = tmp_path / "pb.json"
    rc = main(["path-bases", "--b", "a,abA,acA", "--json", str(out)])
    assert rc == 0
    report = load(out)
    assert report["conjugation_exponent"] == -1
    assert report["bases"] == ["a,abA,acA"]


# -- fb-adjacent --------------------------------------------------------------


def test_fb_adjacent_reports_certificate(tmp_path):
    out = tmp_path / "adj.json"
    rc = main(["fb-adjacent", "--a", "ab,b,c", "--b", "a,b,c", "--json", str(out)])
    assert rc == 0
    report = load(out)
    assert report["adjacent"] is True
    assert {"i", "j", "sign"} <= set(report["cert"])


def test_fb_adjacent_distant_pair(tmp_path):
    out = tmp_path / "adj.json"
    rc = main(["fb-adjacent", "--a", "abca,bca,ca", "--b", "a,b,c",
               "--json", str(out)])
    assert rc == 0
    report = load(out)
    assert report["adjacent"] is False
    assert "cert" not in report


def test_fb_adjacent_equivalent_pair_exits_one(tmp_path):
    rc = main(["fb-adjacent", "--a", "a,b,c", "--b", "b,A,c",
               "--json", str(tmp_path / "adj.json")])
    assert rc == 1


# -- witness ------------------------------------------------------------------


def test_witness_generate_then_verify(tmp_path):
    out = tmp_path / "w.json"
    rc = main(["witness", "--kind", "h-lipschitz", "--a", "b,a,c",
               "--b", "ab,a,c", "--json", str(out)])
    assert rc == 0
    assert main(["witness", "--verify", str(out),
                 "--json", str(tmp_path / "v.json")]) == 0


def test_witness_verify_rejects_tampering(tmp_path):
    out = tmp_path / "w.json"
    assert main(["witness", "--kind", "hq", "--ambient", "a,b,c",
                 "--subset", "2,3", "--json", str(out)]) == 0
    data = load(out)
    data["vertices"][1]["subset"] = [1]
    out.write_text(json.dumps(data))
    rc = main(["witness", "--verify", str(out),
               "--json", str(tmp_path / "v.json")])
    assert rc == 1


def test_witness_generate_requires_kind_flags(tmp_path):
    rc = main(["witness", "--kind", "hq", "--ambient", "a,b,c",
               "--json", str(tmp_path / "w.json")])
    assert rc == 2


# -- tau ----------------------------------------------------------------------


def test_tau_picks_the_near_side_factor(tmp_path):
    e = MarkingEdge
    m = MarkingGraph(
        [0, 1],
        {
            0: e(0, 1, 0, 0, (1,)),
            1: e(1, 0, 0, 0, (-1,)),
            2: e(2, 3, 1, 1, (2,)),
            3: e(3, 2, 1, 1, (-2,)),
            4: e(4, 5, 0, 1, (1,)),
            5: e(5, 4, 1, 0, (-1,)),
        },
    )
    marking = tmp_path / "marking.json"
    marking.write_text(json.dumps(m.to_json_dict()))
    out = tmp_path / "tau.json"
    rc = main(["tau", "--marking", str(marking), "--edge", "4",
               "--json", str(out)])
    assert rc == 0
    report = load(out)
    assert report["subset"] == [1]
    assert report["ambient"] == ["a", "abA"]


# -- delta / cone-off ---------------------------------------------------------


def test_delta_slim_on_hexagon(tmp_path):
    infile = write_graph(tmp_path / "c6.json", hyperbolicity.cycle_graph(6))
    out = tmp_path / "delta.json"
    rc = main(["delta", "--in", infile, "--method", "slim",
               "--json", str(out), "--no-timings"])
    assert rc == 0
    report = load(out)
    assert report["delta"] == 1
    assert report["vertices"] == 6


def test_delta_four_point_matches_library(tmp_path):
    g = hyperbolicity.grid_graph(2, 3)
    infile = write_graph(tmp_path / "grid.json", g)
    out = tmp_path / "delta.json"
    rc = main(["delta", "--in", infile, "--json", str(out), "--no-timings"])
    assert rc == 0
    assert load(out)["delta"] == hyperbolicity.delta_four_point(g)


def test_delta_missing_file_exits_two(tmp_path):
    rc = main(["delta", "--in", str(tmp_path / "nope.json"),
               "--json", str(tmp_path / "d.json")])
    assert rc == 2


def test_cone_off_full_subset_has_diameter_one(tmp_path):
    infile = write_graph(tmp_path / "p5.json", hyperbolicity.path_graph(5))
    subsets = tmp_path / "subsets.json"
    subsets.write_text(json.dumps([[0, 1, 2, 3, 4]]))
    out = tmp_path / "coned.json"
    rc = main(["cone-off", "--in", infile, "--subsets", str(subsets),
               "--json", str(out)])
    assert rc == 0
    coned = hyperbolicity.FiniteGraph.from_json_dict(load(out))
    assert hyperbolicity.apsp(coned).max() == 1


# -- thin-check ---------------------------------------------------------------


def test_thin_check_median_on_tree(tmp_path):
    g = hyperbolicity.random_tree(10, 3)
    fam = hyperbolicity.geodesic_family(g)
    infile = write_graph(tmp_path / "tree.json", g)
    paths = tmp_path / "paths.json"
    paths.write_text(json.dumps(
        [{"from": x, "to": y, "path": list(p)} for (x, y), p in fam.items()]
    ))
    out = tmp_path / "thin.json"
    rc = main(["thin-check", "--in", infile, "--paths", str(paths),
               "--phi", "median", "--b1", "1", "--json", str(out),
               "--no-timings"])
    assert rc == 0
    report = load(out)
    assert report["b2_hausdorff"] == 0
    assert report["b2_center"] == 0
    assert report["b2"] <= 2


# -- experiment ---------------------------------------------------------------


def test_experiment_report_is_byte_stable(tmp_path):
    argv = ["experiment", "fold-soundness", "--samples", "4", "--seed", "7",
            "--no-timings"]
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(argv + ["--json", str(r1)]) == 0
    assert main(argv + ["--json", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_experiment_workers_match_serial(tmp_path):
    argv = ["experiment", "fold-soundness", "--samples", "4", "--seed", "7",
            "--no-timings"]
    serial, parallel = tmp_path / "s.json", tmp_path / "p.json"
    assert main(argv + ["--json", str(serial)]) == 0
    assert main(argv + ["--json", str(parallel), "--workers", "3"]) == 0
    assert serial.read_bytes() == parallel.read_bytes()


def test_experiment_only_runs_a_single_sample(tmp_path):
    out = tmp_path / "only.json"
    rc = main(["experiment", "fold-soundness", "--seed", "9", "--only", "3",
               "--json", str(out), "--no-timings"])
    assert rc == 0
    report = load(out)
    assert report["config"]["samples"] == 1
    assert [s["index"] for s in report["samples"]] == [3]


def test_experiment_negative_samples_exits_two(tmp_path):
    rc = main(["experiment", "fold-soundness", "--samples", "-1",
               "--json", str(tmp_path / "r.json")])
    assert rc == 2


def test_unknown_subcommand_raises_usage_error():
    with pytest.raises(SystemExit):
        main(["no-such-command"])
