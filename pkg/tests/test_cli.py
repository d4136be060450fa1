"""Tests for the command-line interface."""

import json
import math

import pytest
from click.testing import CliRunner

from specsum.cli import main
from specsum.reporting import CSV_COLUMNS


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def matrix_prefix(tmp_path, runner):
    prefix = str(tmp_path / "a")
    res = runner.invoke(main, ["gen", "--n", "16", "--kappa", "10",
                               "--seed", "1", "--out", prefix])
    assert res.exit_code == 0, res.output
    return prefix


class TestGen:
    def test_sidecar_ground_truth_consistent(self, matrix_prefix):
        with open(matrix_prefix + ".json") as fh:
            doc = json.load(fh)
        assert doc["n"] == 16
        assert doc["exact"]["logdet"] == pytest.approx(
            sum(math.log(x) for x in doc["eigenvalues"])
        )
        assert doc["kappa"] == pytest.approx(10.0)

    def test_rejects_bad_kappa(self, tmp_path, runner):
        res = runner.invoke(main, ["gen", "--n", "8", "--kappa", "0.5",
                                   "--out", str(tmp_path / "b")])
        assert res.exit_code == 2

    def test_rejects_tiny_dimension(self, tmp_path, runner):
        res = runner.invoke(main, ["gen", "--n", "1", "--kappa", "2",
                                   "--out", str(tmp_path / "b")])
        assert res.exit_code == 2


class TestEstimate:
    def test_json_report_on_stdout(self, matrix_prefix, runner):
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "logdet_svt", "--eps", "0.1"])
        assert res.exit_code == 0, res.output
        doc = json.loads(res.output)
        assert doc["algorithm"] == "logdet_svt"
        assert doc["passed"] is True

    def test_csv_format(self, matrix_prefix, runner):
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "trace_inverse",
                                   "--format", "csv"])
        assert res.exit_code == 0, res.output
        header, row = res.output.strip().split("\n")
        assert header.split(",") == CSV_COLUMNS
        assert len(row.split(",")) == len(CSV_COLUMNS)

    def test_repeat_runs_byte_identical(self, matrix_prefix, runner):
        args = ["estimate", "--matrix", matrix_prefix + ".mtx",
                "--algorithm", "logdet_sve", "--mode", "stochastic", "--seed", "5"]
        out1 = runner.invoke(main, args).output
        out2 = runner.invoke(main, args).output
        assert out1 == out2

    def test_schatten_with_exponent(self, matrix_prefix, runner):
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "schatten_p", "--p", "3"])
        assert res.exit_code == 0, res.output
        assert json.loads(res.output)["algorithm"] == "schatten_3"

    def test_precondition_error_exits_two(self, matrix_prefix, runner):
        # vn_entropy requires unit trace; a generated SPD matrix has not.
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "vn_entropy"])
        assert res.exit_code == 2

    def test_invalid_eps_exits_two(self, matrix_prefix, runner):
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "logdet_svt", "--eps", "2.0"])
        assert res.exit_code == 2

    def test_exact_cap_drops_oracle(self, matrix_prefix, runner):
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "logdet_svt", "--exact-cap", "8"])
        doc = json.loads(res.output)
        assert doc["exact"] is None
        assert doc["passed"] is None

    def test_writes_to_file(self, matrix_prefix, tmp_path, runner):
        out = tmp_path / "rep.json"
        res = runner.invoke(main, ["estimate", "--matrix", matrix_prefix + ".mtx",
                                   "--algorithm", "logdet_svt", "--out", str(out)])
        assert res.exit_code == 0
        assert json.loads(out.read_text())["algorithm"] == "logdet_svt"


class TestSweep:
    def test_eps_sweep_emits_csv_and_fit(self, tmp_path, runner):
        out = tmp_path / "sweep.csv"
        res = runner.invoke(main, ["sweep", "--n", "16", "--algorithm", "logdet_svt",
                                   "--axis", "eps", "--values", "0.1,0.05,0.025",
                                   "--out", str(out)])
        assert res.exit_code == 0, res.output
        assert "fit: slope=" in res.output
        lines = out.read_text().strip().split("\n")
        assert lines[0].split(",")[0] == "sweep_eps"
        assert len(lines) == 1 + 3

    def test_single_point_reports_insufficient(self, tmp_path, runner):
        res = runner.invoke(main, ["sweep", "--n", "16", "--algorithm", "logdet_svt",
                                   "--axis", "eps", "--values", "0.1",
                                   "--out", str(tmp_path / "s.csv")])
        assert res.exit_code == 0, res.output
        assert "insufficient points" in res.output

    def test_empty_values_usage_error(self, tmp_path, runner):
        res = runner.invoke(main, ["sweep", "--algorithm", "logdet_svt",
                                   "--axis", "eps", "--values", ",",
                                   "--out", str(tmp_path / "s.csv")])
        assert res.exit_code == 2

    def test_malformed_values_usage_error(self, tmp_path, runner):
        res = runner.invoke(main, ["sweep", "--algorithm", "logdet_svt",
                                   "--axis", "eps", "--values", "0.1,zebra",
                                   "--out", str(tmp_path / "s.csv")])
        assert res.exit_code == 2

    def test_seeds_multiply_rows(self, tmp_path, runner):
        out = tmp_path / "s.csv"
        res = runner.invoke(main, ["sweep", "--n", "16", "--algorithm", "logdet_svt",
                                   "--axis", "kappa", "--values", "5,10",
                                   "--seeds", "3", "--mode", "stochastic",
                                   "--out", str(out)])
        assert res.exit_code == 0, res.output
        assert len(out.read_text().strip().split("\n")) == 1 + 6


class TestVerify:
    def test_unknown_suite_usage_error(self, runner):
        res = runner.invoke(main, ["verify", "bogus"])
        assert res.exit_code == 2

    def test_lemmas_suite_passes(self, runner):
        res = runner.invoke(main, ["verify", "lemmas"])
        assert res.exit_code == 0, res.output
        for line in res.output.strip().split("\n"):
            assert ": PASS" in line
