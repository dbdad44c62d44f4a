"""Experiment drivers, CSV round-trip, and the command-line interface."""
import json
import math

import pytest

from fdadm.cli import main
from fdadm.records import SweepRecord, read_records, write_records
from fdadm.scenario_io import bundled_scenario_path, scenario_from_dict
from fdadm.sweeps import (
    run_ber_sweep,
    run_bench,
    run_memratio_sweep,
    run_secrecy_sweep,
    run_validate,
)


def small_doc():
    """Cut-down scenario so Monte Carlo sweeps stay fast."""
    with open(bundled_scenario_path(), encoding="utf-8") as fh:
        doc = json.load(fh)
    doc["array"]["n_half"] = 3
    doc["array"]["n_carriers"] = 3
    doc["desired"] = [{"range_km": 150.0, "angle_deg": 50.0},
                      {"range_km": 260.0, "angle_deg": 0.0}]
    return doc


class TestRunValidate:
    def test_reference_scenario_passes(self, sec4):
        ok, lines, records = run_validate(sec4, tol=1e-9)
        assert ok
        assert all(line.passed for line in lines)
        assert {r.metric_name for r in records} >= {
            "beam_gain_identity", "an_orthogonality", "projector_idempotent",
            "basis_orthonormal", "basis_inside_zf_nullspace"}

    def test_tight_tolerance_reports_without_raising(self, sec4):
        ok, lines, _ = run_validate(sec4, tol=1e-15)
        assert not ok
        assert any(not line.passed for line in lines)


class TestSecrecySweep:
    def test_record_layout_and_monotone_endpoints(self):
        loaded = scenario_from_dict(small_doc())
        records = run_secrecy_sweep(loaded, 0.0, 12.0, 4.0, n_eves=2, n_trials=8)
        assert len(records) == 4 * 2  # four SNR points, two methods
        by_method = {}
        for r in records:
            assert r.sweep_name == "secrecy_vs_snr"
            assert r.metric_name == "secrecy_rate_bits"
            assert r.trials == 8
            by_method.setdefault(r.method, []).append((r.coordinate, r.value))
        for pts in by_method.values():
            pts.sort()
            assert pts[-1][1] > pts[0][1]

    def test_paired_draws_across_methods(self):
        # both methods face identical eavesdropper sets: rerunning zf-only
        # and svd-only gives the same coordinates and pairable values
        doc = small_doc()
        loaded = scenario_from_dict(doc)
        both = run_secrecy_sweep(loaded, 10.0, 10.0, 1.0, 2, 5)
        doc_zf = dict(doc, method="zf")
        only_zf = run_secrecy_sweep(scenario_from_dict(doc_zf), 10.0, 10.0, 1.0, 2, 5)
        zf_both = [r for r in both if r.method == "zf"]
        assert [r.value for r in zf_both] == [r.value for r in only_zf]


class TestBerSweep:
    def test_angle_mode_hits_receivers_exactly(self):
        loaded = scenario_from_dict(small_doc())
        records = run_ber_sweep(loaded, mode="angle", n_symbols=400,
                                angle_step_deg=30.0)
        at_rx0 = [r for r in records
                  if r.metric_name == "ber_rx0" and r.coordinate == 50.0]
        assert len(at_rx0) == 2  # one per method
        for r in at_rx0:
            assert r.value < 0.05
        coords = sorted({r.coordinate for r in records})
        assert coords[0] >= -90.0 + 1e-9 and coords[-1] <= 90.0 - 1e-9

    def test_range_mode_layout(self):
        loaded = scenario_from_dict(small_doc())
        records = run_ber_sweep(loaded, mode="range", n_symbols=200,
                                range_step_km=100.0)
        assert {r.sweep_name for r in records} == {"ber_vs_range"}
        rx0 = [r for r in records if r.metric_name == "ber_rx0"
               and r.method == "zf"]
        assert [r.coordinate for r in rx0] == sorted(r.coordinate for r in rx0)
        assert any(r.coordinate == 150.0 for r in rx0)

    def test_grid_mode_metric_names(self):
        loaded = scenario_from_dict(small_doc())
        records = run_ber_sweep(loaded, mode="grid", n_symbols=50,
                                grid_angle_step_deg=60.0, grid_range_step_km=200.0)
        names = {r.metric_name for r in records}
        assert any(n.startswith("ber_rx0_range_km_") for n in names)

    def test_rejects_bad_mode(self, sec4):
        with pytest.raises(ValueError, match="mode"):
            run_ber_sweep(sec4, mode="volume")


class TestMemratioSweep:
    def test_carrier_sweep_decreases(self, sec4):
        records = run_memratio_sweep(sec4, "l", 1, 12)
        zetas = [(r.coordinate, r.value) for r in records
                 if r.metric_name == "zeta_percent"]
        zetas.sort()
        assert len(zetas) == 12
        assert all(b < a for (_, a), (_, b) in zip(zetas, zetas[1:]))

    def test_element_sweep_skips_degenerate_widths(self, sec4):
        records = run_memratio_sweep(sec4, "n", 1, 30)
        coords = sorted({r.coordinate for r in records})
        assert coords[0] == 2.0  # width 2N+1-K <= 0 at N=1 for K=3
        zeta = {r.coordinate: r.value for r in records
                if r.metric_name == "zeta_percent"}
        assert max(zeta.values()) < 14.3

    def test_footprint_metrics_emitted(self, sec4):
        records = run_memratio_sweep(sec4, "k", 1, 16)
        names = {r.metric_name for r in records}
        assert names == {"p2z_elements_zf", "p2z_elements_svd", "zeta_percent"}

    def test_empty_domain_raises(self, sec4):
        with pytest.raises(ValueError, match="domain"):
            run_memratio_sweep(sec4, "n", 1, 1)


class TestRecordsCsv:
    def test_round_trip_exact(self, tmp_path):
        records = [
            SweepRecord("s", 0.1 + 0.2, "zf", "metric", math.pi, 7, 2**63 + 11),
            SweepRecord("s", 1.0, "svd", "metric", -1.2345678901234567e-300, 1, 0),
        ]
        path = tmp_path / "out.csv"
        write_records(str(path), records)
        assert read_records(str(path)) == records

    def test_header_and_line_endings(self, tmp_path):
        path = tmp_path / "out.csv"
        write_records(str(path), [SweepRecord("s", 1.0, "zf", "m", 2.0, 1, 0)])
        raw = path.read_bytes()
        assert raw.startswith(b"sweep_name,coordinate,method,metric_name,value,")
        assert b"\r" not in raw

    def test_rejects_foreign_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            read_records(str(path))


class TestBenchDriver:
    def test_tiny_ladder_emits_exponents(self):
        sizes = [(2, 3, 2), (2, 7, 2), (5, 5, 2), (8, 7, 2), (12, 9, 2)]
        records = run_bench(sizes=sizes, reps=5, seed=1)
        times = [r for r in records if r.metric_name == "p2_build_seconds_median"]
        expos = [r for r in records if r.metric_name == "time_scaling_exponent"]
        assert len(times) == 10 and len(expos) == 2


class TestCli:
    def test_validate_ok_and_csv(self, tmp_path, capsys):
        out = tmp_path / "val.csv"
        code = main(["validate", "--scenario", bundled_scenario_path(),
                     "--out", str(out)])
        assert code == 0
        assert "validation passed" in capsys.readouterr().out
        assert len(read_records(str(out))) > 0

    def test_validate_tight_tolerance_fails(self, capsys):
        code = main(["validate", "--scenario", bundled_scenario_path(),
                     "--tol", "1e-15"])
        assert code == 1
        assert "FAILED" in capsys.readouterr().out

    def test_input_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        code = main(["validate", "--scenario", str(bad)])
        assert code == 2
        assert "missing key" in capsys.readouterr().err

    def test_near_duplicate_receivers_surface_conditioning(self, tmp_path, capsys):
        doc = small_doc()
        doc["desired"] = [
            {"range_km": 150.0, "angle_deg": 50.0},
            {"range_km": 150.0, "angle_deg": 50.0 + math.degrees(1e-9)},
        ]
        path = tmp_path / "near.json"
        path.write_text(json.dumps(doc))
        code = main(["validate", "--scenario", str(path)])
        assert code == 2
        assert "condition number" in capsys.readouterr().err

    def test_memratio_csv(self, tmp_path):
        out = tmp_path / "mem.csv"
        code = main(["memratio", "--scenario", bundled_scenario_path(),
                     "--vary", "l", "--from", "1", "--to", "12",
                     "--out", str(out)])
        assert code == 0
        assert len(read_records(str(out))) == 36

    def test_method_override(self, tmp_path):
        out = tmp_path / "mem.csv"
        doc_path = tmp_path / "scn.json"
        doc_path.write_text(json.dumps(small_doc()))
        code = main(["ber", "--scenario", str(doc_path), "--method", "zf",
                     "--mode", "range", "--symbols", "50", "--out", str(out)])
        assert code == 0
        assert {r.method for r in read_records(str(out))} == {"zf"}

    def test_stdout_emission(self, tmp_path, capsys):
        code = main(["memratio", "--scenario", bundled_scenario_path(),
                     "--vary", "k", "--from", "1", "--to", "4"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("sweep_name,")

    def test_seed_override_changes_eve_draws(self, tmp_path):
        doc_path = tmp_path / "scn.json"
        doc_path.write_text(json.dumps(small_doc()))
        outs = []
        for seed in ("1", "2"):
            out = tmp_path / f"sec{seed}.csv"
            code = main(["secrecy", "--scenario", str(doc_path), "--seed", seed,
                         "--snr-min", "10", "--snr-max", "10", "--snr-step", "1",
                         "--eves", "1", "--trials", "3", "--out", str(out)])
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] != outs[1]

    def test_repeated_runs_bit_identical(self, tmp_path):
        doc_path = tmp_path / "scn.json"
        doc_path.write_text(json.dumps(small_doc()))
        blobs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            code = main(["ber", "--scenario", str(doc_path), "--mode", "angle",
                         "--symbols", "100", "--out", str(out)])
            assert code == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]
