import json

import pytest

from giskard.fbiharmonic.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, parse_hyperplane, parse_parameters
from giskard.fbiharmonic.cli import UsageError

POINT_KEYS = {"x", "H", "normA2", "ric_nn", "r1_f", "r2_f_norm", "r1_bi", "r2_bi_norm", "n1", "n2", "f"}


def test_family_verification_as_json(run_cli):
    code, out, _ = run_cli(
        "verify", "--family", "pqe1_ii", "--m", "5", "--samples", "100", "--seed", "7", "--format", "json"
    )
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["summary"]["verdict"] == "f_biharmonic_proper"
    assert report["summary"]["passed"] is True
    assert report["summary"]["max_norm_residual"] < 1e-8
    assert "counterexample" not in report["summary"]
    assert len(report["points"]) == 100
    assert set(report["points"][0]) == POINT_KEYS
    assert report["config"]["seed"] == 7
    assert "jobs" not in report["config"]


def test_flat_plane_passes(run_cli):
    code, out, _ = run_cli("verify", "--family", "flat_plane", "--m", "3")
    assert code == EXIT_OK
    assert "verdict: totally_geodesic" in out
    assert "status: PASS" in out


def test_custom_critical_hyperplane_is_biharmonic(run_cli):
    code, out, _ = run_cli(
        "verify", "--sigma", "z^(2/5)", "--hyperplane", "1,1,1,1;0", "--m", "4", "--f", "1", "--format", "json"
    )
    assert code == EXIT_OK
    assert json.loads(out)["summary"]["verdict"] == "biharmonic_proper"


def test_perturbed_family_fails_and_names_the_counterexample(run_cli):
    code, out, err = run_cli(
        "verify", "--family", "pqe1_ii", "--m", "5", "--exponent-shift", "0.05", "--samples", "20"
    )
    assert code == EXIT_VIOLATED
    assert "status: FAIL" in out
    assert "first failure at sample" in err


def test_falsify_threshold_separates_clear_from_inconclusive_failures(run_cli):
    argv = ("verify", "--family", "pqe1_ii", "--m", "5", "--exponent-shift", "0.05", "--samples", "20")
    code, out, _ = run_cli(*argv, "--format", "json", "--tol-falsify", "1e-8")
    clear = json.loads(out)["summary"]
    loose_code, loose_out, _ = run_cli(*argv, "--format", "json", "--tol-falsify", "1e6")
    loose = json.loads(loose_out)["summary"]

    assert code == loose_code == EXIT_VIOLATED
    assert clear["falsified_points"] > 0
    assert not clear["inconclusive"]
    assert loose["falsified_points"] == 0
    assert loose["inconclusive_points"] > 0
    assert loose["inconclusive"]

    _, text, _ = run_cli(*argv, "--tol-falsify", "1e6")
    assert "margin: inconclusive" in text


def test_explicit_verify_tolerance_overrides_the_family_default(run_cli):
    argv = ("verify", "--family", "pqe1_ii", "--m", "5", "--samples", "10", "--format", "json")
    code, out, _ = run_cli(*argv)
    assert code == EXIT_OK
    strict_code, strict_out, _ = run_cli(*argv, "--tol-verify", "1e-30")
    assert strict_code == EXIT_VIOLATED
    assert json.loads(strict_out)["summary"]["verdict"] == "not_f_biharmonic"
    assert json.loads(strict_out)["config"]["tolerances"]["verify"] == 1e-30


def test_verify_tolerance_above_falsify_is_a_usage_error(run_cli):
    code, _, err = run_cli("verify", "--family", "tr1", "--tol-verify", "1e-2")
    assert code == EXIT_USAGE
    assert "falsify" in err


def test_identical_runs_are_byte_identical(run_cli):
    argv = ("verify", "--family", "tr1", "--samples", "25", "--seed", "123", "--format", "json")
    first = run_cli(*argv)
    second = run_cli(*argv[:-2], "--format", "json", "--jobs", "4")
    assert first == second


def test_seed_from_the_environment(run_cli, monkeypatch):
    argv = ("verify", "--family", "tr1", "--samples", "5", "--format", "csv")
    _, default_seed, _ = run_cli(*argv)
    monkeypatch.setenv("FBH_SEED", "7")
    _, from_env, _ = run_cli(*argv)
    _, explicit, _ = run_cli(*argv, "--seed", "7")
    assert from_env == explicit
    assert from_env != default_seed


def test_csv_has_one_row_per_sample(run_cli):
    code, out, _ = run_cli("verify", "--family", "tr4", "--samples", "12", "--format", "csv")
    assert code == EXIT_OK
    header, *rows = out.strip().splitlines()
    assert header.startswith("x1,x2,H,normA2")
    assert len(rows) == 12


def test_report_written_to_a_file(run_cli, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli("ansatz", "--m", "3", "--format", "json", "--output", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["roots"] == ["-1", "3/13"]


def test_negative_curvature_claim(run_cli):
    code, out, _ = run_cli(
        "curvature", "--sigma", "z^(3/13)", "--n", "4", "--expect", "negative", "--samples", "1000"
    )
    assert code == EXIT_OK
    assert "status: PASS" in out


def test_flat_space_is_flat(run_cli):
    code, out, _ = run_cli("curvature", "--sigma", "1", "--n", "3", "--expect", "zero", "--format", "json")
    assert code == EXIT_OK
    summary = json.loads(out)["summary"]
    assert max(abs(summary["min_K"]), abs(summary["max_K"])) < 1e-10


def test_indefinite_curvature_violates_the_claim(run_cli):
    code, out, _ = run_cli("curvature", "--sigma", "z^(-1)", "--n", "4", "--expect", "negative")
    assert code == EXIT_VIOLATED
    assert "status: FAIL" in out


def test_curvature_of_a_family_space(run_cli):
    code, _, _ = run_cli("curvature", "--family", "pc2_ii", "--m", "3", "--box", "0.5,2", "--samples", "50")
    assert code == EXIT_OK


@pytest.mark.parametrize(
    "equation, m, text",
    [
        ("pq1", "3", "13t^2+10t-3=0; t=-1, t=3/13"),
        ("pc1", "8", "68t^2+20t-48=0; t=-1, t=12/17"),
        ("pq1", "4", "20t^2+12t-8=0; t=-1, t=2/5"),
    ],
)
def test_ansatz(run_cli, equation, m, text):
    code, out, _ = run_cli("ansatz", "--equation", equation, "--m", m)
    assert code == EXIT_OK
    assert out.strip() == text


@pytest.mark.parametrize(
    "argv",
    [
        ("ansatz", "--equation", "pq1", "--m", "1"),
        ("ansatz",),
        ("verify", "--family", "torus"),
        ("verify", "--family", "pqe1_ii", "--m", "4"),
        ("verify", "--sigma", "z^(", "--hyperplane", "1,1;1"),
        ("verify", "--sigma", "z", "--hyperplane", "1,1"),
        ("verify", "--sigma", "z"),
        ("verify", "--sigma", "z", "--hyperplane", "1,1;1", "--m", "3"),
        ("verify", "--family", "tr1", "--param", "c"),
        ("verify", "--family", "tr1", "--box", "2,1"),
        ("curvature", "--sigma", "z"),
        ("curvature", "--sigma", "k*z", "--n", "3"),
        ("frobnicate",),
        (),
    ],
)
def test_usage_errors(run_cli, argv):
    code, _, _ = run_cli(*argv)
    assert code == EXIT_USAGE


def test_usage_error_names_the_problem(run_cli):
    code, _, err = run_cli("verify", "--sigma", "z^(", "--hyperplane", "1,1;1")
    assert code == EXIT_USAGE
    assert "position" in err


def test_selftest(run_cli):
    code, out, _ = run_cli("selftest", "--seed", "99", "--samples", "10", "--jobs", "2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert all("PASS" in line for line in lines)


def test_hyperplane_syntax():
    assert parse_hyperplane("1, 2,3;0.5") == (1.0, 2.0, 3.0, 0.5)
    with pytest.raises(UsageError):
        parse_hyperplane("1,2")
    assert parse_parameters(["c=2", " R = 0.5"]) == {"c": 2.0, "R": 0.5}
