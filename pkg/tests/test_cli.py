import csv
import math
import subprocess
import sys

import numpy as np
import pytest

from rewarddoubling.cli import main
from rewarddoubling.csvio import read_trace, write_trace
from rewarddoubling.core import Trace, run
from rewarddoubling.baselines import GradientDescent
from rewarddoubling import experiments as ex


def _rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# rng=numpy.PCG64(SeedSequence(seed))")
    return list(csv.DictReader(lines[1:]))


def test_simulate_rd1d_writes_two_csvs(tmp_path):
    code = main(["simulate", "--alg", "rd1d", "--eta1", "0.01", "--hbar", "100", "--seq",
                 "rademacher", "--T", "100", "--seed", "7", "--comparators", "0,1,-1",
                 "--out", str(tmp_path)])
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["bounds_rd1d_rademacher_T100_seed7.csv", "trace_rd1d_rademacher_T100_seed7.csv"]
    bounds = _rows(tmp_path / files[0])
    assert list(bounds[0]) == ["algorithm", "sequence", "comparator", "measured", "bound_name",
                               "bound", "slack"]
    assert {r["comparator"] for r in bounds if r["bound_name"] == "rd1d_regret"} == {"0.0", "1.0", "-1.0"}
    assert all(float(r["slack"]) >= -1e-9 for r in bounds)
    trace = _rows(tmp_path / files[1])
    assert list(trace[0]) == ["round", "x", "g", "reward_cum"] and len(trace) == 100


def test_simulate_is_byte_deterministic(tmp_path):
    args = ["simulate", "--alg", "guess", "--seq", "rademacher", "--T", "300", "--seed", "3",
            "--comparators", "0,2.5"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for p in (tmp_path / "a").iterdir():
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()


def test_simulate_smooth_floor_passes(tmp_path):
    assert main(["simulate", "--alg", "smooth", "--eta", "1", "--seq", "all_ones", "--T", "1000",
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "bounds_smooth_all_ones_T1000_seed0.csv")
    floor = [r for r in rows if r["bound_name"].startswith("smooth_reward_floor")]
    assert len(floor) == 1 and float(floor[0]["slack"]) >= 0


def test_simulate_gd_custom_file_matches_closed_form(tmp_path):
    gs = [1.0, -0.5, 0.25, 1.0, -1.0, 0.75]
    f = tmp_path / "g.csv"
    f.write_text("g\n" + "\n".join(map(str, gs)) + "\n")
    assert main(["simulate", "--alg", "gd", "--eta", "1", "--seq", "custom", "--file", str(f),
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "bounds_gd_custom_T6_seed0.csv")
    ident = next(r for r in rows if r["bound_name"] == "gd_reward_identity")
    G, H = math.fsum(gs), math.fsum(g * g for g in gs)
    assert float(ident["measured"]) == pytest.approx(0.5 * (G * G - H), rel=1e-12)


def test_simulate_vector_composite(tmp_path):
    assert main(["simulate", "--alg", "rd", "--dim", "4", "--seq", "rademacher", "--T", "200",
                 "--comparators", "0,3", "--out", str(tmp_path)]) == 0
    trace = _rows(tmp_path / "trace_rd_rademacher_T200_seed0.csv")
    assert list(trace[0]) == ["round", "coord", "x", "g"]
    assert trace[-1]["round"] == "summary" and len(trace) == 200 * 4 + 1


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["simulate", "--alg", "nope", "--seq", "all_ones", "--T", "5"]) == 2
    assert main(["simulate", "--alg", "gd", "--seq", "nope", "--T", "5"]) == 2
    assert main(["simulate", "--alg", "gd", "--seq", "custom"]) == 2
    assert main(["verify", "nope"]) == 2
    assert main([]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("g\n0.5\n2.0\n")
    assert main(["simulate", "--alg", "gd", "--seq", "custom", "--file", str(bad),
                 "--out", str(tmp_path)]) == 2
    assert "outside [-1, 1]" in capsys.readouterr().err


def test_violation_exits_1(tmp_path):
    # a negative tolerance demands strictly positive slack, which the GD identity row cannot have
    args = ["simulate", "--alg", "gd", "--seq", "alternating", "--T", "10", "--out", str(tmp_path)]
    assert main(args) == 0
    assert main(args + ["--tolerance", "-1"]) == 1


def test_precondition_failure_is_reported_not_asserted(tmp_path):
    assert main(["simulate", "--alg", "rd1d", "--eta1", "0.1", "--hbar", "4", "--seq", "all_ones",
                 "--T", "50", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "bounds_rd1d_all_ones_T50_seed0.csv")
    assert all("[precondition_failed]" in r["bound_name"] for r in rows)


def test_dump_spec(capsys):
    assert main(["simulate", "--alg", "guess", "--eps", "0.5", "--seq", "rademacher", "--T", "10",
                 "--seed", "4", "--dump-spec"]) == 0
    out = capsys.readouterr().out
    assert "alg=guess\neps=0.5\nseq=rademacher\nT=10\nseq_seed=4\n" in out
    assert "rng=numpy.PCG64(SeedSequence(seed))" in out


def test_verify_lemma_p_text(tmp_path, capsys):
    assert main(["verify", "lemma-p", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "P[G_6 >= sqrt(6)] = 7/64 exact: PASS" in out
    assert (tmp_path / "verify_lemma-p.txt").read_text() == out


def test_lower_bound_found_and_not_found(tmp_path, capsys):
    assert main(["lower-bound", "--out", str(tmp_path)]) == 0
    summary = (tmp_path / "witness_summary.txt").read_text()
    assert summary.startswith("G=") and "k=2" in summary
    assert _rows(tmp_path / "witness.csv")[0].keys() == {"index", "g"}
    assert main(["lower-bound", "--budget", "0", "--out", str(tmp_path)]) == 3
    assert main(["lower-bound", "--eps", "100", "--T", "4"]) == 2


def test_sweep_lemmas_small_grid(tmp_path):
    assert main(["sweep-lemmas", "--tau-max", "20", "--G-max", "2", "--step", "0.1",
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "sweep_lemmas.csv")
    assert list(rows[0]) == ["lemma", "tau", "G", "g", "lhs", "rhs", "margin"]
    assert {r["lemma"] for r in rows} == {"rinv", "od"}


def test_table1_structure_for_scalar_and_vector_runs(tmp_path):
    rows, checks = ex.table1(R=1.0, T=1000, n=1, eps=1.0, ladder=2)
    rows3, _ = ex.table1(R=1.0, T=1000, n=3, eps=1.0, ladder=2)
    assert {r.regime for r in rows} == {"origin", "ball", "beyond"}
    assert {r.algorithm for r in rows} == {"reward_doubling", "projected_gd", "eg_unnormalized"}
    assert all(r.measured <= 1.0 + 1e-9 for r in rows
               if r.regime == "origin" and r.algorithm == "reward_doubling")
    assert len(rows) == len(rows3)
    assert main(["table1", "--T", "1000", "--out", str(tmp_path)]) in (0, 1)
    assert list(_rows(tmp_path / "table1.csv")[0])[:3] == ["regime", "algorithm", "sequence"]


def test_trace_csv_roundtrip(tmp_path):
    tr = run(GradientDescent(0.3), [0.1, -0.7, 1.0, 0.333])
    write_trace(tr, tmp_path / "t.csv", seed=1)
    back = read_trace(tmp_path / "t.csv")
    assert back.plays.tolist() == tr.plays.tolist()
    assert back.gradients.tolist() == tr.gradients.tolist()
    vec = Trace.from_arrays(np.arange(6.0).reshape(3, 2), np.full((3, 2), 0.5))
    write_trace(vec, tmp_path / "v.csv")
    assert read_trace(tmp_path / "v.csv").plays.tolist() == vec.plays.tolist()


def test_console_script_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "rewarddoubling.cli", "verify", "lemma-p",
                          "--out", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0 and "PASS" in out.stdout


def test_experiment_spec_rejects_unknown_alg():
    from rewarddoubling.adversaries import SequenceSpec
    with pytest.raises(ValueError):
        ex.ExperimentSpec("nope", SequenceSpec("all_ones", 3))
