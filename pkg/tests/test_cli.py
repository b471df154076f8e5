import os

import pytest

from zdim.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestEstimate:
    def test_digit_set_summary(self, capsys, tmp_path):
        out = tmp_path / "est.csv"
        rc, stdout, _ = run(capsys, "estimate", "--set", "digits:k=3,allow=02",
                            "--nmax", "40", "--window", "8",
                            "--out", str(out))
        assert rc == 0
        assert stdout.startswith("upper=0.62")
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "n,block_exponent,cumulative_exponent"
        assert lines[-1].startswith("summary,upper=")

    def test_deterministic_output(self, capsys, tmp_path):
        texts = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            rc, _, _ = run(capsys, "estimate", "--set", "squares",
                           "--nmax", "20", "--out", str(out))
            assert rc == 0
            texts.append(out.read_bytes())
        assert texts[0] == texts[1]

    def test_plot_writes_figure_and_data(self, capsys, tmp_path):
        out = tmp_path / "sq.csv"
        rc, _, _ = run(capsys, "estimate", "--set", "squares", "--nmax", "24",
                       "--out", str(out), "--plot")
        assert rc == 0
        png = tmp_path / "sq.png"
        dat = tmp_path / "sq.dat"
        assert png.exists() and png.stat().st_size > 0
        lines = dat.read_text().strip().split("\n")
        assert lines[0] == "scale,exponent"
        assert len(lines) == 25
        assert lines[-1].startswith("24,0.5")


class TestCount:
    def test_profile_csv(self, capsys, tmp_path):
        out = tmp_path / "c.csv"
        rc, _, _ = run(capsys, "count", "--set", "powers:b=2",
                       "--nmax", "6", "--out", str(out))
        assert rc == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "n,block_count,cumulative_count"
        assert lines[1] == "0,1,1"
        assert lines[-1] == "6,1,7"

    def test_lattice_l1(self, capsys, tmp_path):
        out = tmp_path / "p.csv"
        rc, _, _ = run(capsys, "count", "--set", "pascal:depth=8",
                       "--nmax", "8", "--norm", "l1", "--out", str(out))
        assert rc == 0
        last = out.read_text().strip().split("\n")[-1]
        n, block, cum = last.split(",")
        assert n == "8" and int(cum) == 3 ** 8 + 1


class TestGenAndRoundtrip:
    def test_gen_then_estimate_from_file(self, capsys, tmp_path):
        setfile = tmp_path / "sq.txt"
        rc, _, _ = run(capsys, "gen", "--set", "squares", "--nmax", "20",
                       "--out", str(setfile))
        assert rc == 0
        rc, stdout, _ = run(capsys, "estimate", "--set", f"@{setfile}",
                            "--nmax", "20", "--window", "6")
        assert rc == 0
        assert stdout.splitlines()[-1].startswith("upper=0.5")


class TestSolve:
    def test_code_root(self, capsys):
        rc, stdout, _ = run(capsys, "solve", "--code", "k=3,delta=2,B=0|2")
        assert rc == 0
        assert "s_star=0.630930" in stdout

    def test_digit_formula(self, capsys):
        rc, stdout, _ = run(capsys, "solve", "--digits", "k=10,allow=012345689")
        assert rc == 0
        assert "s_star=0.954243" in stdout

    def test_rule(self, capsys):
        rc, stdout, _ = run(capsys, "solve", "--rule", "c=2,d=2,rule=000n")
        assert rc == 0
        assert "s_star=1.584963" in stdout

    def test_vectors(self, capsys):
        rc, stdout, _ = run(capsys, "solve", "--vectors", "1 2|2 4")
        assert rc == 0
        assert "rank=1" in stdout

    def test_needs_exactly_one_mode(self, capsys):
        rc, _, _ = run(capsys, "solve")
        assert rc == 2
        rc, _, _ = run(capsys, "solve", "--code", "k=2,delta=1,B=0",
                       "--digits", "k=2,allow=1")
        assert rc == 2


class TestFractal:
    def test_stage_sizes(self, capsys, tmp_path):
        out = tmp_path / "f.csv"
        rc, stdout, _ = run(capsys, "fractal", "--rule", "c=2,d=2,rule=000n",
                            "--depth", "5", "--out", str(out))
        assert rc == 0
        assert "dimension=1.584963" in stdout
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "k,stage_size"
        assert lines[-1] == "5,243"

    def test_invalid_rule_is_domain_error(self, capsys):
        rc, _, err = run(capsys, "fractal", "--rule", "c=2,d=2,rule=n000",
                         "--depth", "3")
        assert rc == 1


class TestGale:
    def test_dump_and_summary(self, capsys, tmp_path):
        out = tmp_path / "g.csv"
        rc, stdout, _ = run(capsys, "gale", "--set", "squares", "--s", "0.7",
                            "--depth", "10", "--nmax", "3", "--out", str(out))
        assert rc == 0
        assert "kraft=ok" in stdout
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "w,log2_value"
        assert len(lines) == 1 + 15

    def test_s_below_dimension_is_domain_error(self, capsys):
        rc, _, err = run(capsys, "gale", "--set", "squares", "--s", "0.3",
                         "--depth", "10")
        assert rc == 1
        assert "error" in err


class TestAlgebra:
    def test_components(self, capsys, tmp_path):
        out = tmp_path / "c.csv"
        rc, stdout, _ = run(capsys, "algebra", "--set", "squares",
                            "--op", "components", "--r", "3", "--nmax", "6",
                            "--out", str(out))
        assert rc == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "component_id,size,min_element,max_element"
        assert lines[1] == "0,2,1,4"  # 1 and 4 chain at r=3

    def test_sum(self, capsys, tmp_path):
        out = tmp_path / "s.txt"
        rc, _, _ = run(capsys, "algebra", "--set", "finite:1|2",
                       "--op", "sum", "--set2", "finite:10", "--nmax", "4",
                       "--out", str(out))
        assert rc == 0
        assert out.read_text().split() == ["11", "12"]

    def test_missing_flags_usage_error(self, capsys):
        rc, _, _ = run(capsys, "algebra", "--set", "squares", "--op", "sum")
        assert rc == 2


class TestVerify:
    def test_known_suite_passes(self, capsys):
        rc, stdout, _ = run(capsys, "verify", "thm3.w")
        assert rc == 0
        assert "PASS" in stdout and "FAIL" not in stdout

    def test_unknown_theorem(self, capsys):
        rc, _, err = run(capsys, "verify", "thm9.9")
        assert rc == 2
        assert "thm9.9" in err


class TestExitCodes:
    def test_unknown_spec_is_usage_error(self, capsys):
        rc, _, err = run(capsys, "estimate", "--set", "nonsense",
                         "--nmax", "10")
        assert rc == 2

    def test_unknown_subcommand(self, capsys):
        rc, _, _ = run(capsys, "frobnicate")
        assert rc == 2

    def test_unwritable_path_is_io_error(self, capsys, tmp_path):
        rc, _, _ = run(capsys, "count", "--set", "squares", "--nmax", "5",
                       "--out", str(tmp_path / "no" / "dir" / "x.csv"))
        assert rc == 1

    def test_env_budget_respected(self, capsys, monkeypatch):
        monkeypatch.setenv("ZDIM_BUDGET", "10")
        rc, _, err = run(capsys, "gen", "--set", "all", "--nmax", "10")
        assert rc == 1  # budget exhausted mid-enumeration

    def test_env_budget_must_be_integer(self, capsys, monkeypatch):
        monkeypatch.setenv("ZDIM_BUDGET", "lots")
        rc, _, _ = run(capsys, "gen", "--set", "all", "--nmax", "4")
        assert rc == 2
