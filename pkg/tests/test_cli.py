"""Command-line interface: subcommands, exit codes, output formats."""

import pytest
from click.testing import CliRunner

from nccalc.cli import main
from nccalc.presets import load_preset


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, **kw):
    return runner.invoke(main, list(args), catch_exceptions=False, **kw)


def test_normalize(runner):
    res = invoke(runner, "--preset", "quantum_plane_a", "normalize", "y*x")
    assert res.exit_code == 0
    assert "x*y" in res.output


def test_d_z3_cube_is_zero(runner):
    res = invoke(runner, "--preset", "z3_root_of_unity", "d", "--expr", "x^3")
    assert res.exit_code == 0
    assert res.output.strip() == "d = 0"


def test_torsion_conditions_output(runner):
    res = invoke(runner, "--preset", "quantum_plane_a", "torsion-conditions")
    assert res.exit_code == 0
    assert "V[1,2,1] = V[1,1,2] + 1" in res.output
    assert "V[2,2,1] = V[2,1,2] - 1" in res.output


def test_verify_inner_passes(runner):
    res = invoke(runner, "--preset", "quantum_plane_a", "verify", "--suite", "inner")
    assert res.exit_code == 0


def test_verify_all_suites_on_presets(runner):
    for pid in ["heisenberg", "twisted_heisenberg_2", "glpq2"]:
        res = invoke(runner, "--preset", pid, "verify", "--samples", "5")
        assert res.exit_code == 0, res.output


def test_unknown_preset_exit_2(runner):
    res = invoke(runner, "--preset", "bogus", "normalize", "x")
    assert res.exit_code == 2


def test_parse_error_exit_2(runner):
    res = invoke(runner, "--preset", "quantum_plane_a", "normalize", "x +* y")
    assert res.exit_code == 2


def test_commute(runner):
    res = invoke(runner, "--preset", "h_plane", "commute",
                 "--expr", "x", "--thetas", "1")
    assert res.exit_code == 0
    assert "p*y" in res.output.replace(" ", "").replace("(", "").replace(")", "") \
        or "p*y" in res.output


def test_relations_round_trip(runner):
    res = invoke(runner, "--preset", "heisenberg", "relations")
    assert res.exit_code == 0
    pres = load_preset("heisenberg").presentation
    for line in res.output.splitlines():
        lhs, rhs = line.split(" = ")
        # the printed coefficient re-parses to an equal canonical value
        coeff = rhs.rsplit("*theta", 1)[0]
        assert pres.parse(coeff) == pres.parse(coeff)


def test_normalize_round_trip(runner):
    pres = load_preset("glpq2").presentation
    res = invoke(runner, "--preset", "glpq2", "normalize", "d*a*b^-1")
    assert res.exit_code == 0
    printed = res.output.split("=", 1)[1].strip()
    assert pres.parse(printed) == pres.parse("d*a*b^-1")


def test_two_forms_listing(runner):
    res = invoke(runner, "--preset", "poly_shift_S12", "two-forms")
    assert res.exit_code == 0
    assert "Delta(theta[2]) = theta[1]*theta[1]" in res.output


def test_theta_solve(runner):
    res = invoke(runner, "--preset", "poly_shift_S12", "theta-solve",
                 "--coords", "x, x^2")
    assert res.exit_code == 0
    assert "det = 2" in res.output
    assert "theta[1] =" in res.output


def test_theta_solve_failure_exit_1(runner):
    res = invoke(runner, "--preset", "poly_shift_S12", "theta-solve",
                 "--coords", "x, x")
    assert res.exit_code == 1
    assert "failed" in res.output


def test_torsion_command(runner, tmp_path):
    conn = tmp_path / "conn.txt"
    conn.write_text("V[1,2,1] = 1\nV[2,2,1] = -1\n")
    res = invoke(runner, "--preset", "quantum_plane_a", "torsion",
                 "--connection", str(conn))
    assert res.exit_code == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("V[1,2,1] = 5\n")
    res = invoke(runner, "--preset", "quantum_plane_a", "torsion",
                 "--connection", str(bad))
    assert res.exit_code == 1


def test_curvature_command(runner, tmp_path):
    conn = tmp_path / "conn.txt"
    conn.write_text("")  # V = 0
    res = invoke(runner, "--preset", "quantum_plane_a", "curvature",
                 "--connection", str(conn), "--theta", "1")
    assert res.exit_code == 0
    assert "R(theta[1]) = 0" in res.output


def test_metric_check_and_levi_civita(runner, tmp_path):
    metric = tmp_path / "g.txt"
    metric.write_text("g[1,2] = 1\ng[2,1] = 1\n")
    conn = tmp_path / "v.txt"
    conn.write_text("V[1,1,2] = -1\nV[2,1,1] = -1\nV[1,2,2] = -1\nV[2,2,1] = -1\n")
    res = invoke(runner, "--preset", "quantum_plane_a", "metric-check",
                 "--metric", str(metric), "--connection", str(conn))
    assert res.exit_code == 0, res.output
    res = invoke(runner, "--preset", "quantum_plane_a", "levi-civita",
                 "--metric", str(metric), "--connection", str(conn))
    assert res.exit_code == 0, res.output


def test_preset_list_show_run(runner):
    res = invoke(runner, "preset", "list")
    assert res.exit_code == 0
    assert "quantum_plane_a" in res.output
    res = invoke(runner, "preset", "show", "heisenberg")
    assert res.exit_code == 0
    assert "fixtures:" in res.output
    res = invoke(runner, "preset", "run", "poly_shift_sym")
    assert res.exit_code == 0


def test_preset_show_serialized_reloads(runner, tmp_path):
    res = invoke(runner, "preset", "show", "quantum_plane_a", "--serialize")
    assert res.exit_code == 0
    calc = tmp_path / "qp.calc"
    calc.write_text(res.output)
    res = invoke(runner, "--file", str(calc), "normalize", "y*x")
    assert res.exit_code == 0
    assert "x*y" in res.output


def test_structured_format_stable(runner):
    r1 = invoke(runner, "--preset", "heisenberg", "--format", "structured",
                "verify", "--suite", "inner")
    r2 = invoke(runner, "--preset", "heisenberg", "--format", "structured",
                "verify", "--suite", "inner")
    assert r1.exit_code == 0 and r1.output == r2.output
    assert all(" = " in line for line in r1.output.splitlines() if line)


def test_verify_all_presets_deterministic_and_parallel(runner):
    args = ["verify", "--suite", "inner", "--suite", "twisted-2forms", "--all-presets"]
    seq = invoke(runner, "--format", "structured", *args)
    par = invoke(runner, "--format", "structured", "--jobs", "4", *args)
    assert seq.exit_code == 0
    assert seq.output == par.output


def test_jobs_preset_run_deterministic(runner):
    seq = invoke(runner, "preset", "run", "quantum_plane_b")
    par = invoke(runner, "--jobs", "3", "preset", "run", "quantum_plane_b")
    assert seq.exit_code == 0 and par.exit_code == 0


def test_env_side_conditions(runner):
    res = invoke(runner, "--preset", "quantum_plane_a", "normalize", "x",
                 env={"NCCALC_SIDE_CONDITIONS": "q != 1; p != 0"})
    assert res.exit_code == 0


def test_file_session_missing_exit_2(runner):
    res = invoke(runner, "--file", "/nonexistent/path.calc", "normalize", "x")
    assert res.exit_code == 2


def test_nonconfluent_file_exit_3(runner, tmp_path):
    calc = tmp_path / "bad.calc"
    calc.write_text("""
[generators]
x
y

[relations]
y*x = x*y
y*x = 2*x*y

[directions]
labels = 1

[automorphisms]
1: x -> 2*x, y -> y
1 inverse: x -> (1/2)*x, y -> y

[weights]
1 = 1
""")
    res = invoke(runner, "--file", str(calc), "normalize", "y*x")
    assert res.exit_code == 3
