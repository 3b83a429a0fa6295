import json
import subprocess
import sys

import pytest

from satake.datasets import bundled_path, load_dataset
from satake.pipeline import (csv_header, exit_status, match_parameters,
                             row_to_csv, row_to_dict, run_compute)


@pytest.fixture(scope="module")
def genus2():
    return load_dataset(bundled_path("skoruppa_genus2"))


@pytest.fixture(scope="module")
def genus4():
    return load_dataset(bundled_path("schottky_genus4"))


class TestRunCompute:
    def test_y20_p2_matches_published(self, genus2):
        rows = run_compute(genus2, form="Y20", primes=[2])
        assert len(rows) == 1
        row = rows[0]
        assert row.error is None
        match_parameters(row.satake.parameters,
                         [complex(0.6480, 0.7616), complex(-0.2194, 0.9756)], tol=5e-4)
        assert row.verdict == "unimodular"
        assert row.satake.residual < 1e-10

    def test_schottky_p2_matches_published(self, genus4):
        rows = run_compute(genus4, primes=[2])
        row = rows[0]
        assert row.error is None
        printed = [complex(-0.1875, 0.6817), complex(-0.1875, -0.6817),
                   complex(-0.7500, 2.7271), complex(-0.7500, -2.7271)]
        match_parameters(row.satake.parameters, printed, tol=5e-4)
        assert row.verdict == "violated"
        assert "synthesized-lambda-tn" in row.flags

    def test_empty_selection(self, genus2):
        rows = run_compute(genus2, form="NoSuchForm")
        assert rows == []
        assert exit_status(rows) == 0

    def test_excluded_row_passthrough(self, genus2):
        rows = run_compute(genus2, form="Y24a", primes=[5])
        assert len(rows) == 1
        assert rows[0].excluded and rows[0].satake is None
        assert exit_status(rows) == 0

    def test_exit_status_failure_on_error_row(self, genus2):
        rows = run_compute(genus2, form="Y22", primes=[2])
        assert exit_status(rows) == 0
        import dataclasses

        broken = dataclasses.replace(rows[0], error="boom", satake=None)
        assert exit_status([broken]) == 1

    def test_deterministic_rerun(self, genus2):
        rows1 = run_compute(genus2, form="Y2*", primes=[3])
        rows2 = run_compute(genus2, form="Y2*", primes=[3])
        assert [row_to_dict(r) for r in rows1] == [row_to_dict(r) for r in rows2]

    def test_order_follows_dataset(self, genus2):
        rows = run_compute(genus2, primes=[2])
        assert [r.label for r in rows] == ["Y20", "Y22", "Y24a", "Y24b", "Y26a", "Y26b"]


class TestSerialization:
    def test_json_rows_shape(self, genus2):
        rows = run_compute(genus2, form="Y20", primes=[2])
        data = row_to_dict(rows[0])
        assert set(data) >= {"label", "p", "genus", "weight", "alpha", "moduli",
                             "residual", "verdict", "flags", "excluded"}
        assert len(data["alpha"]) == 3  # alpha_0..alpha_2
        text = json.dumps(data)
        assert json.loads(text) == data

    def test_csv_fixed_columns(self, genus2):
        rows = run_compute(genus2, form="Y20", primes=[2, 3])
        header = csv_header(2)
        assert header.split(",")[:5] == ["label", "p", "genus", "weight", "verdict"]
        for row in rows:
            cells = row_to_csv(row, 2).split(",")
            assert len(cells) == len(header.split(","))

    def test_ten_significant_digits(self, genus2):
        rows = run_compute(genus2, form="Y20", primes=[2])
        re0 = row_to_dict(rows[0])["alpha"][1][0]
        assert re0 == float(f"{re0:.10g}")


class TestMatchParameters:
    def test_accepts_orbit_members(self):
        computed = [2.0 + 0j, 1j]
        expected = [0.5 + 0j, -1j]  # inverses of the computed values
        assert match_parameters(computed, expected, tol=1e-9) < 1e-12

    def test_rejects_beyond_tolerance(self):
        with pytest.raises(AssertionError):
            match_parameters([2.0 + 0j], [2.1 + 0j], tol=1e-3)

    def test_best_bijection_chosen(self):
        computed = [1.0 + 1.0j, 1.02 + 1.0j]
        expected = [1.02 + 1.0j, 1.0 + 1.0j]
        assert match_parameters(computed, expected, tol=1e-6) < 1e-12


class TestConventionSwitch:
    def test_published_vs_spherical_differ_on_tables(self, genus2):
        pub = run_compute(genus2, form="Y20", primes=[2])[0]
        sph = run_compute(genus2, form="Y20", primes=[2],
                          genus2_convention="spherical-map")[0]
        assert pub.error is None and sph.error is None
        # both certified, but they disagree beyond table tolerance
        delta = max(abs(a - b) for a, b in zip(pub.satake.parameters, sph.satake.parameters))
        assert delta > 1e-3
        assert sph.satake.residual < 1e-10


class TestCLI:
    def run_cli(self, *args):
        return subprocess.run([sys.executable, "-m", "satake.cli", *args],
                              capture_output=True, text=True)

    def test_compute_json(self):
        proc = self.run_cli("compute", "--dataset", "skoruppa_genus2",
                            "--form", "Y20", "--prime", "2", "--json")
        assert proc.returncode == 0, proc.stderr
        data = json.loads(proc.stdout)
        assert data["rows"][0]["label"] == "Y20"
        assert data["rows"][0]["verdict"] == "unimodular"

    def test_compute_csv(self):
        proc = self.run_cli("compute", "--dataset", "schottky_genus4",
                            "--prime", "2", "--csv")
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().splitlines()
        assert lines[0].startswith("label,p,genus,weight,verdict")
        assert len(lines) == 2

    def test_krieg_matrix_output(self):
        proc = self.run_cli("krieg", "--n", "2", "--k", "20", "--p", "2")
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        assert len(lines) == 3
        assert lines[0].split() == ["1", "1/2", "1"]
        assert lines[1].split() == ["0", "1/2", "3/8"]
        assert lines[2].split() == ["0", "0", "1/8"]

    def test_verify_rp(self):
        proc = self.run_cli("verify-rp", "--dataset", "schottky_genus4")
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.count("violated") == 4

    def test_selftest(self):
        proc = self.run_cli("selftest")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert "FAIL" not in proc.stdout

    def test_dataset_error_exit_code(self):
        proc = self.run_cli("compute", "--dataset", "missing_file_xyz")
        assert proc.returncode == 2

    def test_parse_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        proc = self.run_cli("compute", "--dataset", str(bad))
        assert proc.returncode == 2

    def test_precision_env_round_trip(self):
        import os
        import subprocess

        env = dict(os.environ, SATAKE_PRECISION_BITS="100")
        proc = subprocess.run([sys.executable, "-m", "satake.cli", "compute",
                               "--dataset", "skoruppa_genus2", "--form", "Y20",
                               "--prime", "2", "--json"],
                              capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        data = json.loads(proc.stdout)
        row = data["rows"][0]
        assert row["verdict"] == "unimodular"
        assert abs(row["alpha"][1][0] - 0.6480) < 5e-4
