"""Tests for report serialization and schema validation."""

import json

import numpy as np
import pytest

from specsum.baselines import ProbeConfig, classical_logdet_taylor
from specsum.matrix_core import generate_spd
from specsum.reporting import (
    CSV_COLUMNS,
    canonical_json,
    csv_header,
    csv_row,
    report_json,
    report_schema,
    report_to_dict,
    validate_report,
)
from specsum.spectral_sums import AlgoConfig, logdet_svt


@pytest.fixture(scope="module")
def report():
    A = generate_spd(16, 10.0, "log_uniform", 0.5, 1)
    return logdet_svt(A, AlgoConfig(eps=0.1, mode="stochastic", seed=3))


class TestCanonicalJson:
    def test_keys_sorted(self):
        doc = canonical_json({"b": 1, "a": 2})
        assert doc.index('"a"') < doc.index('"b"')

    def test_float_formatting_shortest_roundtrip(self):
        doc = canonical_json({"x": 0.1})
        assert json.loads(doc)["x"] == 0.1

    def test_seventeen_digit_floats(self):
        val = 1.0 / 3.0
        doc = canonical_json({"x": val})
        assert json.loads(doc)["x"] == val

    def test_numpy_arrays_become_lists(self):
        doc = json.loads(canonical_json({"v": np.array([1.0, 2.0])}))
        assert doc["v"] == [1.0, 2.0]

    def test_byte_identical_repeats(self):
        payload = {"z": [1, 2.5, True, None], "a": {"nested": 0.25}}
        assert canonical_json(payload) == canonical_json(payload)


class TestReportSerialization:
    def test_round_trips_through_json(self, report):
        doc = json.loads(report_json(report))
        assert doc["algorithm"] == "logdet_svt"
        assert doc["estimate"]["value"] == report.estimate.value
        assert doc["passed"] == report.passed

    def test_validates_against_schema(self, report):
        validate_report(json.loads(report_json(report)))

    def test_schema_lists_required_fields(self):
        schema = report_schema()
        assert "algorithm" in schema["required"]
        assert "ledger" in schema["required"]

    def test_schema_rejects_missing_estimate(self, report):
        doc = report_to_dict(report)
        del doc["estimate"]
        with pytest.raises(Exception):
            validate_report(doc)

    def test_serialization_deterministic(self, report):
        assert report_json(report) == report_json(report)


class TestCsv:
    def test_header_matches_columns(self):
        assert csv_header().rstrip("\n").split(",") == CSV_COLUMNS

    def test_header_with_extras(self):
        head = csv_header(["sweep_eps", "n"]).rstrip("\n").split(",")
        assert head == ["sweep_eps", "n"] + CSV_COLUMNS

    def test_row_field_count(self, report):
        row = csv_row(report).rstrip("\n").split(",")
        assert len(row) == len(CSV_COLUMNS)

    def test_row_carries_estimate(self, report):
        row = dict(zip(CSV_COLUMNS, csv_row(report).rstrip("\n").split(",")))
        assert float(row["estimate"]) == report.estimate.value
        assert row["algorithm"] == "logdet_svt"
        assert row["passed"] in ("true", "false")

    def test_baseline_reports_serialize_too(self):
        A = generate_spd(16, 10.0, "log_uniform", 0.5, 2)
        rep = classical_logdet_taylor(A, 0.2, ProbeConfig(num_probes=64, seed=1))
        validate_report(json.loads(report_json(rep)))
        assert len(csv_row(rep).rstrip("\n").split(",")) == len(CSV_COLUMNS)
