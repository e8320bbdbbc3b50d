"""End-to-end command coverage, driven in-process through main()."""

import shutil
import subprocess

import pytest

from opalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out + captured.err


# -- nf / compare / instantiate ----------------------------------------------


def test_nf_insertion_catalog(capsys):
    code, out = run(capsys, "nf", "--catalog", "nijenhuis", "[z1]*[z2]")
    assert code == 0
    assert "normal form: [[z1]*z2] + [z1*[z2]] - [[z1*z2]]" in out


def test_nf_trace_lists_steps(capsys):
    code, out = run(capsys, "nf", "--catalog", "rb:1", "--trace", "[z1]*[z2]")
    assert code == 0
    assert "step 0: rule rb:1" in out


def test_nf_fuel_exhaustion_exits_nonzero(capsys):
    code, out = run(capsys, "nf", "--catalog", "nijenhuis", "--fuel", "0", "[z1]*[z2]")
    assert code == 1
    assert "fuel 0 exhausted" in out


def test_nf_with_concrete_generator(capsys):
    code, out = run(capsys, "nf", "--gens", "z2*z1 - z1*z2", "--order", "db", "z2*z1")
    assert code == 0
    assert "normal form: z1*z2" in out


def test_compare_breadth_direction(capsys):
    code, out = run(capsys, "compare", "[z1*z2]", "z1*[z2]")
    assert code == 0
    assert "[z1*z2] < z1*[z2]" in out
    code, out = run(capsys, "compare", "--order", "dt", "[z1*z2]", "z1*[z2]")
    assert "[z1*z2] > z1*[z2]" in out


def test_instantiate_weighted_insertion(capsys):
    code, out = run(
        capsys, "instantiate", "--catalog", "rb:6?lambda=1", "x1=z1", "x2=1"
    )
    assert code == 0
    assert "instance: [z1]*[1] - [z1*[1]] - [[z1]] - [z1]" in out
    assert "leading monomial: [z1]*[1]" in out


def test_instantiate_requires_catalog(capsys):
    code, out = run(capsys, "instantiate", "x1=z1", "x2=z2")
    assert code == 2
    assert "error:" in out


def test_instantiate_bundle_needs_name(capsys):
    code, out = run(capsys, "instantiate", "--catalog", "averaging", "x1=z1", "x2=z2")
    assert code == 2
    assert "--name" in out
    code, out = run(
        capsys,
        "instantiate",
        "--catalog",
        "averaging",
        "--name",
        "averaging:A",
        "x1=z1",
        "x2=z2",
    )
    assert code == 0
    assert "instance: [[z1]*z2] - [z1]*[z2]" in out


def test_instantiate_rejects_malformed_assignment(capsys):
    code, out = run(capsys, "instantiate", "--catalog", "rb:1", "x1")
    assert code == 2
    assert "error:" in out


# -- compositions / check-gs --------------------------------------------------


def test_compositions_splitting_config(capsys):
    code, out = run(
        capsys,
        "compositions",
        "--catalog",
        "diff:1",
        "--gens",
        "z1*z2 - 1",
        "--bounds",
        "2,1",
    )
    assert code == 1
    assert "5 record(s)" in out
    assert "NOT trivial" in out


def test_compositions_single_source_self_pairs(capsys):
    code, out = run(
        capsys, "compositions", "--gens", "z1*z1 - 1", "--bounds", "3,0", "--order", "db"
    )
    assert code == 0
    assert "1 record(s)" in out
    assert "overlap k=1" in out


def test_check_gs_passing_config(capsys):
    code, out = run(
        capsys,
        "check-gs",
        "--catalog",
        "rb:6?lambda=1",
        "--gens",
        "z2*z1 - z1*z2",
        "--bounds",
        "3,2",
    )
    assert code == 0
    assert "result: PASS" in out
    assert "route: hypothesis" in out


def test_check_gs_failing_config(capsys):
    code, out = run(
        capsys,
        "check-gs",
        "--catalog",
        "diff:1",
        "--gens",
        "z1*z2 - 1",
        "--bounds",
        "2,1",
    )
    assert code == 1
    assert "result: FAIL" in out


def test_check_gs_raw_route_on_averaging(capsys):
    code, out = run(capsys, "check-gs", "--catalog", "averaging", "--route", "raw")
    assert code == 1
    assert "route: raw" in out
    code, out = run(capsys, "check-gs", "--catalog", "averaging")
    assert code == 0
    assert "skipped" in out


def test_check_gs_report_bytes_stable(tmp_path, capsys):
    args = [
        "check-gs",
        "--catalog",
        "diff:1",
        "--gens",
        "z1*z2 - 1",
        "--bounds",
        "2,1",
    ]
    paths = [tmp_path / n for n in ("a.json", "b.json", "c.json")]
    run(capsys, *args, "--report", str(paths[0]))
    run(capsys, *args, "--report", str(paths[1]))
    run(capsys, *args, "--jobs", "3", "--report", str(paths[2]))
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]
    assert blobs[0].endswith(b"\n")


# -- check-type / basis / quotient-eval ---------------------------------------


def test_check_type_insertion_family(capsys, tmp_path):
    report = tmp_path / "rb1.json"
    code, out = run(
        capsys,
        "check-type",
        "--catalog",
        "rb:1",
        "--bounds",
        "2,1",
        "--report",
        str(report),
    )
    assert code == 0
    assert "PASSED" in out
    assert b'"passed": true' in report.read_bytes()


def test_check_type_has_no_template_for_averaging(capsys):
    code, out = run(capsys, "check-type", "--catalog", "averaging")
    assert code == 2
    assert "no structural template" in out


def test_basis_for_erasure_family(capsys):
    code, out = run(
        capsys, "basis", "--catalog", "diffprime?c=1", "--alphabet", "z", "--bounds", "2,1"
    )
    assert code == 0
    assert "3 irreducible word(s)" in out
    assert out.index("  1\n") < out.index("  z\n") < out.index("  z*z\n")


def test_quotient_eval_refuses_unverified_set(capsys):
    code, out = run(
        capsys,
        "quotient-eval",
        "--catalog",
        "diff:1",
        "--gens",
        "z1*z2 - 1",
        "--bounds",
        "2,1",
        "1 + z1",
    )
    assert code == 1
    assert out.startswith("refused:")


def test_quotient_eval_bracket_pair(capsys):
    code, out = run(
        capsys,
        "quotient-eval",
        "--catalog",
        "rb:6?lambda=0",
        "--alphabet",
        "z",
        "[z]*[z]",
    )
    assert code == 0
    assert "normal form: [[z]*z] + [z*[z]]" in out


def test_quotient_eval_out_of_bounds_is_refused(capsys):
    code, out = run(
        capsys,
        "quotient-eval",
        "--catalog",
        "rb:6?lambda=0",
        "--alphabet",
        "z",
        "z*z*z",
    )
    assert code == 1
    assert out.startswith("refused:")


# -- demo / catalog / plumbing ------------------------------------------------


def test_demo_splitting_unit(capsys):
    code, out = run(capsys, "demo", "splitting-unit")
    assert code == 1
    assert "verdict: NOT TRIVIAL" in out
    assert "-[z1]*z2" in out and "z1*[z2]" in out
    assert "5 record(s), 1 surviving" in out


def test_demo_list(capsys):
    code, out = run(capsys, "demo", "--list")
    assert code == 0
    for name in ("splitting-unit", "rb-commutator", "averaging", "reynolds"):
        assert name in out


def test_demo_averaging_passes(capsys):
    code, out = run(capsys, "demo", "averaging")
    assert code == 0
    assert "result: PASS" in out


def test_catalog_listing(capsys):
    code, out = run(capsys, "catalog")
    assert code == 0
    assert "rb" in out and "averaging" in out and "reynolds" in out


def test_config_file_defaults_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "session.cfg"
    cfg.write_text("order = dt\nalphabet = z1,z2\nbounds = 2,1\n")
    code, out = run(capsys, "compare", "--config", str(cfg), "[z1*z2]", "z1*[z2]")
    assert code == 0
    assert ">" in out  # dt flips the breadth direction
    code, out = run(
        capsys, "compare", "--config", str(cfg), "--order", "db", "[z1*z2]", "z1*[z2]"
    )
    assert "<" in out


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("fuel = 10\nshiny = yes\n")
    code, out = run(capsys, "compare", "--config", str(cfg), "z1", "z2")
    assert code == 2
    assert "shiny" in out


def test_parse_error_exits_two(capsys):
    code, out = run(capsys, "nf", "--catalog", "rb:1", "[z1")
    assert code == 2
    assert "error:" in out


def test_unknown_catalog_selector_exits_two(capsys):
    code, out = run(capsys, "nf", "--catalog", "rb:99", "z1")
    assert code == 2
    assert "error:" in out


def test_order_preset_conflict_with_catalog(capsys):
    # rb wants db; forcing deglex on a bracketed stratum must be refused
    code, out = run(capsys, "check-gs", "--catalog", "rb:1", "--order", "dt")
    assert code == 2
    assert "error:" in out


def test_unknown_flag_exits_two(capsys):
    code = main(["compare", "--sideways", "z1", "z2"])
    capsys.readouterr()
    assert code == 2


def test_missing_command_exits_two(capsys):
    code = main([])
    capsys.readouterr()
    assert code == 2


def test_installed_script_runs():
    exe = shutil.which("opalg")
    if exe is None:
        pytest.skip("console script not on PATH in this environment")
    proc = subprocess.run(
        [exe, "compare", "z1", "z2"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert "z1 < z2" in proc.stdout
