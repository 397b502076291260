"""
End-to-end tests of the command-line interface: the verification batteries
for all three groups, table export against frozen values, overlap reports,
configuration precedence, determinism of the emitted reports, and the exit
code contract (0 pass, 1 tolerance failure, 2 usage/schema errors).
"""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from groupwigner import cli

SU2_FAST = ["--grid", "10x5x20", "--jmax", "1", "--jsum", "4"]


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def uniform_state_payload():
    return {
        "group": "su2",
        "jmax_twice": 0,
        "blocks": [{"two_j": 0, "re": [[1.0]], "im": [[0.0]]}],
    }


def basis_state_payload(two_j, two_m, two_n):
    dim = two_j + 1
    re = [[0.0] * dim for _ in range(dim)]
    re[(two_j - two_m) // 2][(two_j - two_n) // 2] = 1.0
    return {
        "group": "su2",
        "jmax_twice": two_j,
        "blocks": [
            {
                "two_j": t,
                "re": re if t == two_j else [[0.0] * (t + 1)] * (t + 1),
                "im": [[0.0] * (t + 1)] * (t + 1),
            }
            for t in range(two_j + 1)
        ],
    }


# ---------------------------------------------------------------------------
# verify


def test_verify_su2_passes(capsys):
    code, out, _ = run_cli(["verify"] + SU2_FAST, capsys)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    names = [c["name"] for c in report["checks"]]
    assert names == [
        "orthogonality",
        "parseval",
        "momentum-marginal",
        "hermiticity",
        "covariance",
        "position-marginal",
        "overlap-symmetry",
        "reconstruction-variants",
        "traced-consistency",
    ]
    for check in report["checks"]:
        assert check["passed"] is True
        assert check["error"] <= check["tolerance"]
    assert report["metadata"]["command"] == "verify"
    assert report["metadata"]["config"]["group"] == "su2"
    assert report["metadata"]["config"]["grid_shape"] == [10, 5, 20]


def test_verify_so2_passes(capsys):
    code, out, _ = run_cli(["verify", "--group", "so2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    names = {c["name"] for c in report["checks"]}
    assert names == {
        "so2-pure-mode",
        "so2-weyl-duality",
        "so2-general-recovery",
        "so2-midpoint-covariance",
        "so2-marginals",
    }


def test_verify_cartesian_passes(capsys):
    code, out, _ = run_cli(["verify", "--group", "cartesian"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    names = {c["name"] for c in report["checks"]}
    assert names == {
        "cartesian-oscillator",
        "cartesian-hudson",
        "cartesian-marginals",
        "cartesian-eigenstate-limits",
    }


def test_verify_negative_control_coarse_grid(capsys):
    # a grid too coarse for the requested band must fail loudly with the
    # exception class recorded as provenance, never silently degrade
    code, out, _ = run_cli(["verify", "--grid", "4x2x4", "--jmax", "2"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["passed"] is False
    by_name = {c["name"]: c for c in report["checks"]}
    ortho = by_name["orthogonality"]
    assert ortho["passed"] is False
    assert ortho["provenance"] == "GridTooCoarse"
    assert ortho["error"] is None
    assert "exact" in ortho["detail"]


def test_verify_deterministic_output(capsys):
    argv = ["verify", "--group", "so2", "--seed", "11"]
    _, out1, _ = run_cli(argv, capsys)
    _, out2, _ = run_cli(argv, capsys)
    assert out1 == out2
    _, out3, _ = run_cli(["verify", "--group", "so2", "--seed", "12"], capsys)
    assert out3 != out1


def test_verify_csv_format(capsys):
    code, out, _ = run_cli(
        ["verify", "--group", "cartesian", "--format", "csv"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    meta = [ln for ln in lines if ln.startswith("# ")]
    assert any(ln.startswith("# command=") for ln in meta)
    header_idx = next(i for i, ln in enumerate(lines) if not ln.startswith("# "))
    assert lines[header_idx] == "name,error,tolerance,passed,provenance,detail"
    rows = lines[header_idx + 1 :]
    assert len(rows) == 4
    assert all(row.endswith("true,,") for row in rows)


def test_verify_out_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        ["verify", "--group", "so2", "--out", str(out_path)], capsys
    )
    assert code == 0
    assert out == ""
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["passed"] is True
    assert report["metadata"]["config"]["out"] == str(out_path)


def test_config_file_with_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps({"group": "so2", "seed": 3, "format": "json"}),
        encoding="utf-8",
    )
    code, out, _ = run_cli(
        ["verify", "--config", str(cfg), "--seed", "5"], capsys
    )
    assert code == 0
    report = json.loads(out)
    assert report["metadata"]["config"]["group"] == "so2"
    assert report["metadata"]["config"]["seed"] == 5


def test_config_errors_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"no_such_key": 1}), encoding="utf-8")
    code, _, err = run_cli(["verify", "--config", str(cfg)], capsys)
    assert code == 2
    assert "no_such_key" in err
    code, _, err = run_cli(["verify", "--grid", "axbxc"], capsys)
    assert code == 2
    code, _, err = run_cli(["verify", "--group", "su2", "--tol", "-1"], capsys)
    assert code == 2
    code, _, err = run_cli(["verify", "--config", str(tmp_path / "none")], capsys)
    assert code == 2


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--frobnicate"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# wigner tables


def test_wigner_so2_pure_mode_table(tmp_path, capsys):
    state = write_json(
        tmp_path / "m1.json",
        {
            "group": "so2",
            "m_min": -2,
            "re": [0.0, 0.0, 0.0, 1.0, 0.0],
            "im": [0.0, 0.0, 0.0, 0.0, 0.0],
        },
    )
    nodes = write_json(
        tmp_path / "nodes.json", {"theta": [0.0, 1.0], "m": [0, 1, 2]}
    )
    code, out, _ = run_cli(
        ["wigner", "--group", "so2", state, nodes], capsys
    )
    assert code == 0
    report = json.loads(out)
    assert report["metadata"]["columns"] == ["theta", "m", "re", "im"]
    for theta, m, re, im in report["rows"]:
        want = 1.0 / (2.0 * np.pi) if m == 1 else 0.0
        assert_allclose(re, want, atol=1e-14)
        assert im == 0.0
    assert len(report["rows"]) == 6


def test_wigner_cartesian_nodes(tmp_path, capsys):
    n, half_width = 128, 8.0
    q = -half_width + (2 * half_width / n) * np.arange(n)
    psi = np.pi**-0.25 * np.exp(-(q**2) / 2.0)
    state = write_json(
        tmp_path / "osc.json",
        {
            "group": "cartesian",
            "half_width": half_width,
            "periodic": False,
            "re": psi.tolist(),
            "im": [0.0] * n,
        },
    )
    nodes = write_json(tmp_path / "qp.json", {"q": [0.0], "p": [0.0, 0.5]})
    code, out, _ = run_cli(["wigner", "--group", "cartesian", state, nodes], capsys)
    assert code == 0
    report = json.loads(out)
    for q_val, p_val, re, im in report["rows"]:
        assert_allclose(re, np.exp(-(q_val**2) - p_val**2) / np.pi, atol=1e-8)


def test_wigner_su2_uniform_state_frozen(tmp_path, capsys):
    state = write_json(tmp_path / "uniform.json", uniform_state_payload())
    nodes = write_json(tmp_path / "g.json", {"euler": [[0.3, 0.7, 1.1]]})
    code, out, _ = run_cli(["wigner", "--jsum", "0", state, nodes], capsys)
    assert code == 0
    report = json.loads(out)
    assert len(report["rows"]) == 1
    row = report["rows"][0]
    # columns: alpha, beta, gamma, two_j, two_m, two_n, two_mp, two_np, re, im
    assert row[:4] == [0.3, 0.7, 1.1, 0]
    assert_allclose(row[8], 1.0, atol=1e-12)
    assert_allclose(row[9], 0.0, atol=1e-12)


def test_wigner_su2_zero_rows_for_zero_block(tmp_path, capsys):
    payload = {
        "group": "su2",
        "jmax_twice": 1,
        "blocks": [
            {"two_j": 1, "re": [[0.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}
        ],
    }
    state = write_json(tmp_path / "zero.json", payload)
    nodes = write_json(tmp_path / "g.json", {"euler": [[0.0, 0.5, 0.0]]})
    code, out, _ = run_cli(["wigner", "--jsum", "2", state, nodes], capsys)
    assert code == 0
    report = json.loads(out)
    # row count: sum over two_j <= 2 of (two_j + 1)^4 block entries
    assert len(report["rows"]) == 1 + 16 + 81
    vals = np.array([row[8:] for row in report["rows"]])
    assert np.max(np.abs(vals)) < 1e-12


def test_wigner_schema_errors_exit_2(tmp_path, capsys):
    state = write_json(tmp_path / "bad.json", {"group": "su2"})
    code, _, err = run_cli(["wigner", state], capsys)
    assert code == 2
    assert "jmax_twice" in err
    code, _, err = run_cli(["wigner", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    good = write_json(tmp_path / "uniform.json", uniform_state_payload())
    bad_nodes = write_json(tmp_path / "nodes.json", {"euler": [0.1, 0.2, 0.3]})
    code, _, err = run_cli(["wigner", good, bad_nodes], capsys)
    assert code == 2


# ---------------------------------------------------------------------------
# overlap


def test_overlap_identical_uniform_states(tmp_path, capsys):
    a = write_json(tmp_path / "a.json", uniform_state_payload())
    b = write_json(tmp_path / "b.json", uniform_state_payload())
    code, out, _ = run_cli(
        ["overlap", "--grid", "8x4x16", "--jsum", "4", a, b], capsys
    )
    assert code == 0
    report = json.loads(out)
    assert_allclose(report["coefficient_trace"], 1.0, atol=1e-13)
    assert_allclose(report["wigner_sum"], 1.0, atol=1e-12)
    assert report["gap"] < 1e-12
    assert_allclose(report["increments"][0], 1.0, atol=1e-12)
    assert np.max(np.abs(report["increments"][1:])) < 1e-12
    assert report["passed"] is True


def test_overlap_orthogonal_states(tmp_path, capsys):
    a = write_json(tmp_path / "a.json", basis_state_payload(1, 1, 1))
    b = write_json(tmp_path / "b.json", basis_state_payload(1, 1, -1))
    code, out, _ = run_cli(
        [
            "overlap",
            "--grid",
            "8x4x16",
            "--jsum",
            "8",
            "--tol",
            "5e-3",
            a,
            b,
        ],
        capsys,
    )
    assert code == 0
    report = json.loads(out)
    assert_allclose(report["coefficient_trace"], 0.0, atol=1e-13)
    assert report["gap"] < 5e-3
    assert len(report["partial_sums"]) == 9


def test_overlap_fails_beyond_tolerance(tmp_path, capsys):
    a = write_json(tmp_path / "a.json", basis_state_payload(1, 1, 1))
    b = write_json(tmp_path / "b.json", basis_state_payload(1, 1, 1))
    code, out, _ = run_cli(
        ["overlap", "--grid", "8x4x16", "--jsum", "2", "--tol", "1e-12", a, b],
        capsys,
    )
    assert code == 1
    report = json.loads(out)
    assert report["passed"] is False
    assert report["gap"] > 1e-12


def test_overlap_requires_su2(tmp_path, capsys):
    a = write_json(tmp_path / "a.json", uniform_state_payload())
    code, _, err = run_cli(["overlap", "--group", "so2", a, a], capsys)
    assert code == 2
    assert "su2" in err


def test_overlap_csv_format(tmp_path, capsys):
    a = write_json(tmp_path / "a.json", uniform_state_payload())
    code, out, _ = run_cli(
        ["overlap", "--grid", "8x4x16", "--jsum", "2", "--format", "csv", a, a],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    header = next(ln for ln in lines if not ln.startswith("# "))
    assert header == "two_jsum,partial_sum,increment"
    assert lines[-1].startswith("# coefficient_trace=")
