"""Command-line interface: exit codes, report schema, determinism."""

import json

import numpy as np
import pytest

from fftlasso.cli import EXIT_INPUT_ERROR, EXIT_MAX_ITERS, EXIT_OK, main
from fftlasso.dataio import read_volume


def read_report(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def strip_timings(records):
    cleaned = []
    for rec in records:
        rec = {k: v for k, v in rec.items() if k != "wall_time"}
        cleaned.append(json.dumps(rec, sort_keys=True))
    return "\n".join(cleaned)


@pytest.fixture
def problem_files(tmp_path):
    signal = str(tmp_path / "signal.f64")
    mask = str(tmp_path / "mask.idx")
    code = main([
        "generate", "--dims", "8,8,8", "--noise-seed", "3", "--missing-seed", "4",
        "--signal", signal, "--mask", mask,
    ])
    assert code == EXIT_OK
    return signal, mask, tmp_path


class TestGenerate:
    def test_writes_files(self, problem_files):
        signal, mask, _ = problem_files
        values, dims = read_volume(signal)
        assert dims == (8, 8, 8)
        assert values.size == 512

    def test_truth_output(self, tmp_path):
        truth = str(tmp_path / "truth.f64")
        code = main([
            "generate", "--dims", "4,4", "--signal", str(tmp_path / "s.f64"),
            "--mask", str(tmp_path / "m"), "--truth", truth,
        ])
        assert code == EXIT_OK
        values, _ = read_volume(truth)
        assert values[0] == pytest.approx(1.0)

    def test_bad_dims(self, tmp_path, capsys):
        code = main([
            "generate", "--dims", "banana", "--signal", str(tmp_path / "s"),
            "--mask", str(tmp_path / "m"),
        ])
        assert code == EXIT_INPUT_ERROR
        assert "error" in capsys.readouterr().err


class TestSolve:
    def test_end_to_end(self, problem_files):
        signal, mask, tmp = problem_files
        out = str(tmp / "beta.f64")
        report = str(tmp / "report.jsonl")
        impute = str(tmp / "imputed.f64")
        code = main([
            "solve", "--input", signal, "--mask", mask,
            "--output", out, "--report", report, "--impute", impute,
        ])
        assert code == EXIT_OK

        records = read_report(report)
        meta = records[0]
        summary = records[-1]
        iteration_records = [r for r in records if r["record"] == "iteration"]
        assert meta["record"] == "meta"
        assert meta["unknowns"] == 512 and meta["ipm_variables"] == 1024
        assert meta["lambda_source"] == "default"
        assert meta["lambda"] == pytest.approx(summary["lambda"])
        assert summary["record"] == "summary"
        assert summary["status"] == "converged"
        # exactly one record per IPM iteration
        assert len(iteration_records) == summary["iterations"]
        assert [r["iteration"] for r in iteration_records] == \
            list(range(1, summary["iterations"] + 1))
        for r in iteration_records:
            for key in ("mu", "primal_inf", "dual_inf", "complementarity",
                        "krylov_iters", "alpha_primal", "alpha_dual", "wall_time"):
                assert key in r

        beta, dims = read_volume(out)
        imputed, _ = read_volume(impute)
        assert dims == (8, 8, 8)
        assert np.all(np.isfinite(beta)) and np.all(np.isfinite(imputed))

    def test_explicit_lambda_recorded(self, problem_files):
        signal, mask, tmp = problem_files
        report = str(tmp / "r.jsonl")
        code = main([
            "solve", "--input", signal, "--mask", mask, "--lambda", "5.0",
            "--output", str(tmp / "b.f64"), "--report", report,
        ])
        assert code == EXIT_OK
        meta = read_report(report)[0]
        assert meta["lambda"] == 5.0 and meta["lambda_source"] == "flag"

    def test_max_iters_exit_code(self, problem_files):
        signal, mask, tmp = problem_files
        code = main([
            "solve", "--input", signal, "--mask", mask, "--max-iters", "2",
            "--output", str(tmp / "b.f64"),
        ])
        assert code == EXIT_MAX_ITERS

    def test_missing_input_is_input_error(self, tmp_path, capsys):
        code = main([
            "solve", "--input", str(tmp_path / "nope.f64"),
            "--mask", str(tmp_path / "nope.mask"),
            "--output", str(tmp_path / "out.f64"),
        ])
        assert code == EXIT_INPUT_ERROR
        assert "error" in capsys.readouterr().err

    def test_malformed_header_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.f64"
        np.zeros(4).tofile(bad)
        (tmp_path / "bad.f64.json").write_text("{oops")
        code = main([
            "solve", "--input", str(bad), "--mask", str(bad),
            "--output", str(tmp_path / "out.f64"),
        ])
        assert code == EXIT_INPUT_ERROR
        assert "error" in capsys.readouterr().err

    def test_odd_dims_rejected(self, tmp_path, capsys):
        # solver input requires even grid extents; caught at mask load
        vol = tmp_path / "odd.f64"
        np.zeros(5).tofile(vol)
        (tmp_path / "odd.f64.json").write_text(
            json.dumps({"dims": [5], "order": "row-major", "dtype": "f64-le"})
        )
        msk = tmp_path / "odd.mask"
        np.array([1], dtype="<u8").tofile(msk)
        (tmp_path / "odd.mask.json").write_text(
            json.dumps({"format": "indices", "dims": [5]})
        )
        code = main([
            "solve", "--input", str(vol), "--mask", str(msk),
            "--output", str(tmp_path / "b.f64"),
        ])
        assert code == EXIT_INPUT_ERROR
        assert "even" in capsys.readouterr().err

    def test_dims_mismatch(self, problem_files, tmp_path, capsys):
        signal, _, tmp = problem_files
        other_mask = str(tmp_path / "other.mask")
        code = main([
            "generate", "--dims", "4,4", "--signal", str(tmp_path / "s2.f64"),
            "--mask", other_mask,
        ])
        assert code == EXIT_OK
        code = main([
            "solve", "--input", signal, "--mask", other_mask,
            "--output", str(tmp_path / "b.f64"),
        ])
        assert code == EXIT_INPUT_ERROR
        assert "dims" in capsys.readouterr().err

    def test_deterministic_reports(self, problem_files):
        signal, mask, tmp = problem_files
        outs = []
        for tag in ("a", "b"):
            report = str(tmp / f"report_{tag}.jsonl")
            code = main([
                "solve", "--input", signal, "--mask", mask,
                "--output", str(tmp / f"beta_{tag}.f64"), "--report", report,
            ])
            assert code == EXIT_OK
            outs.append(strip_timings(read_report(report)))
        assert outs[0] == outs[1]


class TestBench:
    def test_rows_and_determinism(self, tmp_path):
        reports = []
        for tag in ("a", "b"):
            path = str(tmp_path / f"bench_{tag}.jsonl")
            code = main(["bench", "--sizes", "4,8", "--seed", "7", "--report", path])
            assert code == EXIT_OK
            reports.append(read_report(path))
        rows = reports[0]
        assert [r["unknowns"] for r in rows] == [64, 512]
        assert [r["ipm_variables"] for r in rows] == [128, 1024]
        assert all(r["status"] == "converged" for r in rows)
        kry_a = [r["krylov_per_iteration"] for r in reports[0]]
        kry_b = [r["krylov_per_iteration"] for r in reports[1]]
        assert kry_a == kry_b
