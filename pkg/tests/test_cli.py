"""CLI integration: exit codes, exact text output, and JSON payloads.

Every test drives main(argv) directly so the exit-code contract is pinned:
0 success or predicate true, 1 predicate false or empty answer, 2 usage and
validation errors, 3 mathematical failures.
"""

import io
import json

import pytest

from mvcurl.cli import main

PLANAR = """\
chart x y
volume V = 1
func h = x^2 + y^2 + 1
func m = 1/h
mv P = h e1^^e2
mv X = y e1 + x e2
"""

SO3 = """\
chart x y z
volume V = 1
lie g = z e1^^e2 + x e2^^e3 + y e3^^e1
func f = x
"""

NONPOISSON = """\
chart x y z
mv Q = e1^^e2 + (-x) e1^^e3
func f = x
"""

TWO_VOLUMES = """\
chart x y
volume V = 1
volume W = x^2 + 1
mv P = e1^^e2
mv X = x e1
"""


@pytest.fixture
def planar(tmp_path):
    path = tmp_path / "planar.mv"
    path.write_text(PLANAR)
    return str(path)


@pytest.fixture
def so3(tmp_path):
    path = tmp_path / "so3.mv"
    path.write_text(SO3)
    return str(path)


@pytest.fixture
def nonpoisson(tmp_path):
    path = tmp_path / "nonpoisson.mv"
    path.write_text(NONPOISSON)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- exit code 0

def test_curl_of_hamiltonian_pair_is_printed(planar, capsys):
    code, out, _ = run(capsys, "curl", "P", "--input", planar)
    assert code == 0
    assert out == "(2*y) e1 + (-2*x) e2\n"


def test_div_prints_scalar(planar, capsys):
    code, out, _ = run(capsys, "div", "X", "--input", planar)
    assert code == 0
    assert out == "0\n"


def test_schouten_of_field_with_itself(planar, capsys):
    code, out, _ = run(capsys, "schouten", "X", "X", "--input", planar)
    assert code == 0
    assert out == "0\n"


def test_lm_check_true_exact_line(planar, capsys):
    code, out, _ = run(capsys, "lm-check", "m", "P", "--input", planar)
    assert code == 0
    assert out == "last multiplier: true (3/3 routes)\n"


def test_lm_solve_finds_reciprocal(planar, capsys):
    code, out, _ = run(capsys, "lm-solve", "P", "--input", planar,
                       "--max-degree", "0", "--denominator", "h")
    assert code == 0
    assert out == "(1)/(x^2 + y^2 + 1)\n"


def test_jacobi_zero_residual(planar, capsys):
    code, out, _ = run(capsys, "jacobi", "P", "--input", planar)
    assert code == 0
    assert out == "0\n"


def test_modular_of_planar_bivector(planar, capsys):
    code, out, _ = run(capsys, "modular", "P", "--input", planar)
    assert code == 0
    assert out == "(2*y) e1 + (-2*x) e2\n"


def test_hamiltonian_field_orientation(planar, capsys):
    code, out, _ = run(capsys, "hamiltonian", "P", "h", "--input", planar)
    assert code == 0
    # A_h = i_{dh} P with P = h e1^^e2, coefficients expanded
    assert out == "(-2*x^2*y - 2*y^3 - 2*y) e1 + (2*x^3 + 2*x*y^2 + 2*x) e2\n"


def test_casimir_battery_for_so3(so3, capsys):
    code, out, _ = run(capsys, "casimir", "g", "--input", so3,
                       "--max-degree", "2")
    assert code == 0
    assert out == "1\nx^2 + y^2 + z^2\n"


def test_unimodular_witness_for_so3(so3, capsys):
    code, out, _ = run(capsys, "unimodular", "g", "--input", so3,
                       "--max-degree", "2")
    assert code == 0
    assert out == "unimodular witness: 0\n"


def test_lie_poisson_expands_constants(so3, capsys):
    code, out, _ = run(capsys, "lie-poisson", "g", "--input", so3)
    assert code == 0
    assert out == "(z) e1^^e2 + (-y) e1^^e3 + (x) e2^^e3\n"


def test_cohomology_report_lines(so3, capsys):
    code, out, _ = run(capsys, "cohomology", "g", "--input", so3,
                       "--k", "0", "--max-degree", "2")
    assert code == 0
    assert out == (
        "k: 0\n"
        "degree bound: 2\n"
        "dim exact: 10\n"
        "dim kernel: 2\n"
        "dim image from below: 0\n"
        "truncated H dim: 2\n"
        "caveat: dimensions are for the truncated complex only\n"
    )


def test_identities_all_pass(capsys):
    code, out, _ = run(capsys, "identities", "--seed", "7", "--cases", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) >= 6
    assert all(line.endswith(": pass") for line in lines)


def test_print_canonicalizes(planar, capsys):
    code, out, _ = run(capsys, "print", "--input", planar)
    assert code == 0
    assert out.startswith("chart x y\nvolume V = 1\n")
    assert "mv P = (x^2 + y^2 + 1) e1^^e2\n" in out


def test_casimir_only_constants_for_symplectic(tmp_path, capsys):
    # constants are always Casimirs, so the answer is never empty; a
    # symplectic structure admits nothing beyond them
    path = tmp_path / "symp.mv"
    path.write_text("chart x y\nmv P = e1^^e2\n")
    code, out, _ = run(capsys, "casimir", "P", "--input", str(path),
                       "--max-degree", "3")
    assert code == 0
    assert out == "1\n"


def test_reads_document_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("chart x y\nmv P = e1^^e2\n"))
    code, out, _ = run(capsys, "jacobi", "P")
    assert code == 0
    assert out == "0\n"


# ---------------------------------------------------------------- exit code 1

def test_lm_check_false_exact_line(planar, capsys):
    code, out, _ = run(capsys, "lm-check", "h", "P", "--input", planar)
    assert code == 1
    assert out == "last multiplier: false (3/3 routes)\n"


def test_jacobi_nonzero_residual(nonpoisson, capsys):
    code, out, _ = run(capsys, "jacobi", "Q", "--input", nonpoisson)
    assert code == 1
    assert out == "(-2) e1^^e2^^e3\n"


def test_lm_solve_empty_ansatz(planar, capsys):
    # polynomial multipliers of degree <= 2 for h e1^^e2: none exist
    code, out, _ = run(capsys, "lm-solve", "P", "--input", planar,
                       "--max-degree", "2")
    assert code == 1
    assert out == "no multipliers in ansatz\n"


def test_unimodular_no_witness(tmp_path, capsys):
    # affine bivector x e1^^e2 has modular field outside every Hamiltonian image
    path = tmp_path / "affine.mv"
    path.write_text("chart x y\nvolume V = 1\nmv P = x e1^^e2\n")
    code, out, _ = run(capsys, "unimodular", "P", "--input", str(path),
                       "--max-degree", "3")
    assert code == 1
    assert out == "no witness in ansatz (degree <= 3)\n"


def test_identities_report_failures(capsys, monkeypatch):
    import mvcurl.cli as cli_mod
    from mvcurl.identities import IdentityResult

    def fake_run(seed, cases):
        return [IdentityResult(name="demo", cases=cases, failures=1)]

    monkeypatch.setattr(cli_mod, "run_identity_suite", fake_run)
    code, out, _ = run(capsys, "identities", "--seed", "1", "--cases", "4")
    assert code == 1
    assert out == "demo: FAIL (1/4)\n"


# ---------------------------------------------------------------- exit code 2

def test_syntax_error_in_document(tmp_path, capsys):
    path = tmp_path / "bad.mv"
    path.write_text("chart x y\nmv P = e1 ^^\n")
    code, _, err = run(capsys, "jacobi", "P", "--input", str(path))
    assert code == 2
    assert err.startswith("error: line 2")


def test_unknown_binding_name(planar, capsys):
    code, _, err = run(capsys, "curl", "nosuch", "--input", planar)
    assert code == 2
    assert "nosuch" in err


def test_missing_input_file(capsys):
    code, _, err = run(capsys, "curl", "P", "--input", "/nonexistent/doc.mv")
    assert code == 2
    assert err.startswith("error:")


def test_argparse_error_is_exit_2(planar, capsys):
    # --max-degree is required for lm-solve
    code, _, err = run(capsys, "lm-solve", "P", "--input", planar)
    assert code == 2


def test_unknown_subcommand_is_exit_2(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_lm_solve_rejects_rational_denominator(planar, capsys):
    code, _, err = run(capsys, "lm-solve", "P", "--input", planar,
                       "--max-degree", "0", "--denominator", "m")
    assert code == 2
    assert "polynomial" in err


def test_ambiguous_volume_needs_flag(tmp_path, capsys):
    path = tmp_path / "two.mv"
    path.write_text(TWO_VOLUMES)
    code, _, err = run(capsys, "div", "X", "--input", str(path))
    assert code == 2
    assert "--volume" in err


def test_volume_flag_selects_binding(tmp_path, capsys):
    path = tmp_path / "two.mv"
    path.write_text(TWO_VOLUMES)
    code, out, _ = run(capsys, "div", "X", "--input", str(path),
                       "--volume", "V")
    assert (code, out) == (0, "1\n")
    code, out, _ = run(capsys, "div", "X", "--input", str(path),
                       "--volume", "W")
    assert code == 0
    # div_W(x d/dx) = 1 + x * d/dx log(x^2+1)
    assert out == "(3*x^2 + 1)/(x^2 + 1)\n"


# ---------------------------------------------------------------- exit code 3

def test_modular_requires_poisson(nonpoisson, capsys):
    code, _, err = run(capsys, "modular", "Q", "--input", nonpoisson)
    assert code == 3
    assert "Jacobi" in err or "Poisson" in err


def test_hamiltonian_requires_poisson(nonpoisson, capsys):
    code, _, err = run(capsys, "hamiltonian", "Q", "f", "--input", nonpoisson)
    assert code == 3


def test_casimir_requires_poisson(nonpoisson, capsys):
    code, _, err = run(capsys, "casimir", "Q", "--input", nonpoisson,
                       "--max-degree", "1")
    assert code == 3


def test_cohomology_rejects_nonexact_bivector(tmp_path, capsys):
    # affine bivector is Poisson but has non-zero curl
    path = tmp_path / "affine.mv"
    path.write_text("chart x y\nmv P = x e1^^e2\n")
    code, _, err = run(capsys, "cohomology", "P", "--input", str(path),
                       "--k", "0", "--max-degree", "2")
    assert code == 3
    assert "curl" in err


def test_computed_zero_division_is_exit_3(tmp_path, capsys):
    path = tmp_path / "zero.mv"
    path.write_text("chart x y\nfunc g = 1/(x - x)\n")
    code, _, err = run(capsys, "print", "--input", str(path))
    assert code == 3
    assert "zero" in err


# ---------------------------------------------------------------- JSON output

def test_lm_check_json(planar, capsys):
    code, out, _ = run(capsys, "lm-check", "m", "P", "--input", planar,
                       "--json")
    assert code == 0
    assert json.loads(out) == {"last_multiplier": True, "routes": 3}


def test_jacobi_json(nonpoisson, capsys):
    code, out, _ = run(capsys, "jacobi", "Q", "--input", nonpoisson, "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["poisson"] is False
    assert payload["residual"]["kind"] == "mv"
    assert payload["residual"]["grade"] == 3


def test_curl_json_is_kind_tagged(planar, capsys):
    code, out, _ = run(capsys, "curl", "P", "--input", planar, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "mv"
    assert [t["blade"] for t in payload["terms"]] == [[1], [2]]


def test_unimodular_json(so3, capsys):
    code, out, _ = run(capsys, "unimodular", "g", "--input", so3, "--json",
                       "--max-degree", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["max_degree"] == 2
    assert payload["witness"]["kind"] == "func"


def test_lm_solve_json(planar, capsys):
    code, out, _ = run(capsys, "lm-solve", "P", "--input", planar, "--json",
                       "--max-degree", "0", "--denominator", "h")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["solutions"]) == 1
    assert payload["solutions"][0]["kind"] == "func"


def test_cohomology_json(so3, capsys):
    code, out, _ = run(capsys, "cohomology", "g", "--input", so3, "--json",
                       "--k", "0", "--max-degree", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["dim_kernel"] == 2
    assert payload["truncated_h_dim"] == 2
    assert payload["caveat"] is True


def test_identities_json(capsys):
    code, out, _ = run(capsys, "identities", "--seed", "3", "--cases", "2",
                       "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["seed"] == 3
    assert all(r["passed"] for r in payload["results"])


def test_print_json_round_trip(planar, capsys):
    from mvcurl.dsl import document_from_json, parse

    code, out, _ = run(capsys, "print", "--input", planar, "--json")
    assert code == 0
    assert document_from_json(json.loads(out)) == parse(PLANAR)
