import json

import jsonschema
import pytest

from crossfield.output import load_output_schema

SCHEMA = load_output_schema()


def _validate(doc_text):
    doc = json.loads(doc_text)
    jsonschema.validate(doc, SCHEMA)
    return doc


# ---------------------------------------------------------------------------
# rate
# ---------------------------------------------------------------------------

def test_rate_hydrogen(run_cli):
    proc = run_cli(["rate", "--z", "1", "--field", "2e-8"])
    assert proc.returncode == 0
    assert "0.004213178" in proc.stdout  # xi
    for key in ("Exp", "P", "Q", "C_lambda^2", "w_reduced", "w_si", "flags"):
        assert key in proc.stdout


def test_rate_json_validates(run_cli):
    proc = run_cli(["rate", "--z", "1", "--field", "2e-8", "--format", "json"])
    assert proc.returncode == 0
    doc = _validate(proc.stdout)
    assert doc["rate"]["state"] == "Z1"
    assert doc["rate"]["xi"] == pytest.approx(0.004213178330631997, rel=1e-12)
    assert doc["meta"]["constants_version"] == "codata2018.1"


def test_rate_csv(run_cli):
    proc = run_cli(["rate", "--z", "1", "--field", "0.05", "--format", "csv"])
    assert proc.returncode == 0
    lines = [l for l in proc.stdout.splitlines() if not l.startswith("#")]
    assert lines[0] == "state,zalpha,epsilon,f,xi,ln_w_reduced,w_reduced,w_si,flags"
    assert len(lines) == 2


def test_rate_custom_state(run_cli):
    proc = run_cli(["rate", "--epsilon", "0.8", "--clambda2", "1.2", "--eta", "0.9",
                    "--field", "0.05", "--format", "json"])
    assert proc.returncode == 0
    doc = _validate(proc.stdout)
    assert doc["rate"]["epsilon"] == 0.8
    assert doc["rate"]["eta"] == 0.9


def test_rate_conflicting_state_flags(run_cli):
    proc = run_cli(["rate", "--z", "1", "--epsilon", "0.9", "--field", "0.1"])
    assert proc.returncode == 64
    assert "conflicting state flags" in proc.stderr


def test_rate_incomplete_custom_state(run_cli):
    proc = run_cli(["rate", "--epsilon", "0.9", "--field", "0.1"])
    assert proc.returncode == 64


def test_rate_missing_field_is_usage_error(run_cli):
    proc = run_cli(["rate", "--z", "1"])
    assert proc.returncode == 64


def test_rate_unknown_flag_is_usage_error(run_cli):
    proc = run_cli(["rate", "--z", "1", "--field", "0.1", "--nope"])
    assert proc.returncode == 64


def test_rate_supercritical_z_is_domain_error(run_cli):
    proc = run_cli(["rate", "--z", "200", "--field", "0.1"])
    assert proc.returncode == 2
    assert proc.stderr.strip().count("\n") == 0  # one-line reason


def test_rate_strict_flags_underflow(run_cli):
    args = ["rate", "--z", "92", "--field", "1e-6"]
    assert run_cli(args).returncode == 0
    proc = run_cli(args + ["--strict"])
    assert proc.returncode == 3


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def test_scan_csv_row_count(run_cli):
    proc = run_cli(["scan", "--z-range", "1:3", "--field-range", "1e-3:0.1",
                    "--points", "5", "--format", "csv"])
    assert proc.returncode == 0
    lines = [l for l in proc.stdout.splitlines() if not l.startswith("#")]
    assert len(lines) == 16  # header + 15 rows
    assert "rows=15" in proc.stderr


def test_scan_deterministic_bytes(run_cli, tmp_path):
    args = ["scan", "--z-range", "1:3", "--field-range", "1e-3:0.1",
            "--points", "5", "--format", "csv"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]).returncode == 0
    assert run_cli(args + ["--out", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_scan_json_validates(run_cli):
    proc = run_cli(["scan", "--z-range", "90:92", "--field-range", "0.01:0.05",
                    "--points", "3", "--format", "json"])
    assert proc.returncode == 0
    doc = _validate(proc.stdout)
    assert len(doc["rows"]) == 9
    assert doc["rows"][0]["state"] == "Z90"


def test_scan_config_equals_flags(run_cli, tmp_path):
    flags_out = tmp_path / "flags.csv"
    cfg_out = tmp_path / "cfg.csv"
    args = ["scan", "--z-range", "1:2", "--field-range", "1e-3:0.01",
            "--points", "4", "--spacing", "linear", "--format", "csv"]
    assert run_cli(args + ["--out", str(flags_out)]).returncode == 0
    cfg = tmp_path / "scan.toml"
    cfg.write_text(
        'z_range = "1:2"\nfield_range = "1e-3:0.01"\npoints = 4\n'
        'spacing = "linear"\nformat = "csv"\nout = "%s"\n' % cfg_out
    )
    assert run_cli(["scan", "--config", str(cfg)]).returncode == 0
    assert flags_out.read_bytes() == cfg_out.read_bytes()


def test_scan_flags_override_config(run_cli, tmp_path):
    cfg = tmp_path / "scan.toml"
    cfg.write_text('z_range = "1:1"\nfield_range = "1e-3:0.01"\npoints = 2\nformat = "csv"\n')
    proc = run_cli(["scan", "--config", str(cfg), "--points", "6"])
    assert proc.returncode == 0
    assert "rows=6" in proc.stderr


def test_scan_unknown_config_key(run_cli, tmp_path):
    cfg = tmp_path / "scan.toml"
    cfg.write_text('z_range = "1:1"\nfield_range = "1e-3:0.01"\npoints = 2\nbogus = 1\n')
    assert run_cli(["scan", "--config", str(cfg)]).returncode == 2


def test_scan_incomplete_spec(run_cli):
    proc = run_cli(["scan", "--z-range", "1:3"])
    assert proc.returncode == 2


def test_scan_malformed_range(run_cli):
    proc = run_cli(["scan", "--z-range", "1:3:5", "--field-range", "1e-3:0.1",
                    "--points", "5"])
    assert proc.returncode == 2


def test_scan_unwritable_out(run_cli, tmp_path):
    proc = run_cli(["scan", "--z-range", "1:1", "--field-range", "1e-3:0.01",
                    "--points", "2", "--out", str(tmp_path / "missing" / "x.csv")])
    assert proc.returncode == 73


def test_scan_flagged_rows_still_exit_zero(run_cli):
    # Z=1 at these fields is deep in the weak-suppression regime
    proc = run_cli(["scan", "--z-range", "1:1", "--field-range", "0.01:0.1",
                    "--points", "3", "--format", "csv"])
    assert proc.returncode == 0
    assert "flagged=3" in proc.stderr


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def test_compare_default_grid_extended(run_cli):
    proc = run_cli(["compare"])
    assert proc.returncode == 0
    assert "PASS" in proc.stdout


def test_compare_double(run_cli):
    proc = run_cli(["compare", "--precision", "double"])
    assert proc.returncode == 0


def test_compare_json_validates(run_cli):
    proc = run_cli(["compare", "--precision", "double", "--format", "json"])
    assert proc.returncode == 0
    doc = _validate(proc.stdout)
    assert doc["report"]["passed"] is True
    assert doc["report"]["max_dev"] <= 1e-10
    assert len(doc["report"]["rel_dev"]) == 40


def test_compare_injected_fault_fails(run_cli):
    proc = run_cli(["compare", "--precision", "double", "--inject-fault", "clambda"])
    assert proc.returncode == 1
    assert "FAIL" in proc.stdout


def test_compare_fault_flag_is_hidden(run_cli):
    proc = run_cli(["compare", "--help"])
    assert proc.returncode == 0
    assert "inject-fault" not in proc.stdout


def test_compare_grid_overrides(run_cli):
    proc = run_cli(["compare", "--zalpha-grid", "0.3,0.6", "--f-grid", "0.01,0.05",
                    "--format", "json"])
    assert proc.returncode == 0
    doc = _validate(proc.stdout)
    assert len(doc["report"]["grid"]) == 4


def test_compare_invalid_grid(run_cli):
    assert run_cli(["compare", "--zalpha-grid", "2.0"]).returncode == 2
    assert run_cli(["compare", "--f-grid", "0,0.1"]).returncode == 2


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------

def test_limits_default(run_cli):
    proc = run_cli(["limits"])
    assert proc.returncode == 0
    assert "residual" in proc.stdout


def test_limits_json_validates(run_cli):
    proc = run_cli(["limits", "--format", "json"])
    assert proc.returncode == 0
    doc = _validate(proc.stdout)
    assert len(doc["limits"]) == 7
    residuals = [row["residual"] for row in doc["limits"]]
    assert residuals == sorted(residuals, reverse=True)


def test_limits_single_far_point(run_cli):
    proc = run_cli(["limits", "--delta-seq", "0.5"])
    assert proc.returncode == 0


def test_limits_negative_delta(run_cli):
    assert run_cli(["limits", "--delta-seq", "-1"]).returncode == 2


def test_limits_out_of_window_delta(run_cli):
    assert run_cli(["limits", "--delta-seq", "0.7"]).returncode == 2


# ---------------------------------------------------------------------------
# shared surface
# ---------------------------------------------------------------------------

def test_results_go_to_stdout_diagnostics_to_stderr(run_cli):
    proc = run_cli(["scan", "--z-range", "1:1", "--field-range", "1e-3:0.01",
                    "--points", "2", "--format", "csv"])
    assert "rows=" in proc.stderr
    assert "rows=" not in proc.stdout
    assert proc.stdout.startswith("#")


def test_missing_subcommand_is_usage_error(run_cli):
    assert run_cli([]).returncode == 64


def test_every_document_embeds_versions(run_cli):
    for args in (["scan", "--z-range", "1:1", "--field-range", "1e-3:0.01",
                  "--points", "2", "--format", "json"],
                 ["compare", "--zalpha-grid", "0.3", "--f-grid", "0.05",
                  "--format", "json"],
                 ["limits", "--delta-seq", "0.01", "--format", "json"]):
        doc = json.loads(run_cli(args).stdout)
        assert doc["meta"]["constants_version"] == "codata2018.1"
        assert doc["meta"]["grid_version"] == "1"
        assert doc["meta"]["tool"] == "crossfield"
