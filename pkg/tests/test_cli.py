"""End-to-end command-line behavior: output contracts, exit codes,
determinism, and the rendered figures."""

import json

import pytest

from qkq import cli

GRID4_BARE = "-0.02:0.02:2,-0.02:0.02:2,-0.02:0.02:2,-0.02:0.02:2"
GRID4 = "--grid=" + GRID4_BARE


def run(*argv):
    return cli.main(list(argv))


class TestClassify:
    def test_diagonal_form_literal(self, capsys):
        assert run("classify", "--form", "T0Diag(1,2,3)") == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "T0Diag(1,2,3), height 0, Bryant Case 4"
        assert "Pc roots:" in out and "Pm roots:" in out

    def test_matrix_literal(self, capsys):
        mat = ("[[[0,1,0,0],[0,0,0,0],[0,0,0,0]],"
               "[[0,0,0,0],[0,2,0,0],[0,0,0,0]],"
               "[[0,0,0,0],[0,0,0,0],[0,3,0,0]]]")
        assert run("classify", "--matrix", mat) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "T0Diag(1,2,3), height 0, Bryant Case 4"

    def test_height_two_literal(self, capsys):
        assert run("classify", "--form", "T2(1,0)") == 0
        line = capsys.readouterr().out.splitlines()[0]
        assert line == "T2(1,0), height 2, Exceptional"

    def test_malformed_json_is_input_error(self, capsys):
        assert run("classify", "--matrix", "[[not json") == 2
        assert "malformed JSON" in capsys.readouterr().err

    def test_non_stabilizer_matrix_rejected(self, capsys):
        mat = json.dumps([[[1, 0, 0, 0]] + [[0] * 4] * 2,
                          [[0] * 4] * 3, [[0] * 4] * 3])
        assert run("classify", "--matrix", mat) == 2

    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        assert run("classify", "--form", "T1(1,0.5,2)",
                   "--out", str(out)) == 0
        capsys.readouterr()
        data = json.loads(out.read_text())
        assert data["family"] == "T1"
        assert data["height"] == 1
        assert data["bryantCase"] == "Case3"

    def test_needs_matrix_or_form(self, capsys):
        assert run("classify") == 2


class TestVerifySde:
    def test_analytically_empty_exits_3(self, capsys):
        assert run("verify-sde", "--family", "PL", "--weights", "1,1,1",
                   GRID4) == 3
        assert "zero set empty" in capsys.readouterr().err

    def test_non_free_weights_exit_3(self, capsys):
        assert run("verify-sde", "--family", "PL", "--weights", "1,2,3",
                   GRID4) == 3
        assert "not free" in capsys.readouterr().err

    def test_empty_height_one_exits_3(self, capsys):
        assert run("verify-sde", "--family", "HeightOne",
                   "--params", "2,1", GRID4) == 3
        assert "p >= |q|" in capsys.readouterr().err

    def test_sde_pass_with_report(self, tmp_path, capsys):
        out = tmp_path / "pl.json"
        code = run("verify-sde", "--family", "PL", "--weights", "2,3,3",
                   GRID4, "--out", str(out), "--no-plot")
        assert code == 0
        capsys.readouterr()
        data = json.loads(out.read_text())
        assert data["summary"]["verdicts"] == ["SDE_Negative"]
        assert data["summary"]["maxEinsteinResidual"] < 1e-4
        lo, hi = data["summary"]["scalarRange"]
        assert lo < hi < 0
        assert len(data["points"]) == 16

    def test_conformally_flat_counts_as_pass(self, capsys):
        code = run("verify-sde", "--family", "HeightTwo", "--params", "0",
                   "--grid=-0.5:-0.4:2,-0.02:0.02:2,-0.02:0.02:2,"
                   "-0.02:0.02:2")
        assert code == 0
        assert "ConformallyFlat" in capsys.readouterr().out

    def test_deterministic_output(self, tmp_path, capsys, monkeypatch):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ("verify-sde", "--family", "GenPedersen", "--params", "1,1",
                GRID4, "--no-plot")
        monkeypatch.setenv("QKQ_THREADS", "1")
        assert run(*args, "--out", str(a)) == 0
        monkeypatch.setenv("QKQ_THREADS", "4")
        assert run(*args, "--out", str(b)) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_plot_rendered_next_to_report(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert run("verify-sde", "--family", "PL", "--weights", "2,3,3",
                   GRID4, "--out", str(out)) == 0
        assert (tmp_path / "r_report.png").exists()

    def test_csv_format(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        assert run("verify-sde", "--family", "PL", "--weights", "2,3,3",
                   GRID4, "--out", str(out), "--format", "csv",
                   "--no-plot") == 0
        header = out.read_text().splitlines()[0]
        assert header == ("xi0,xi1,xi2,xi3,scalar,einsteinResidual,"
                          "weylSDnorm,weylASDnorm")

    def test_grid_required(self, capsys):
        assert run("verify-sde", "--family", "PL", "--weights", "2,3,3") == 2

    def test_bad_grid_literal(self, capsys):
        assert run("verify-sde", "--family", "PL", "--weights", "2,3,3",
                   "--grid=0:1") == 2


class TestEigen:
    def test_monopole_grid(self, capsys):
        code = run("eigen", "--poles", '{"realPoles": [[1,0,1]]}',
                   "--grid=0.1:2:6,-1:1:6")
        assert code == 0
        assert "max residual" in capsys.readouterr().out

    def test_family_route(self, tmp_path, capsys):
        out = tmp_path / "e.csv"
        code = run("eigen", "--family", "Diagonal", "--weights", "1,2,2",
                   "--grid=0.2:1.5:5,-0.5:0.5:5", "--out", str(out),
                   "--no-plot")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "rho,eta,F,laplace_residual"
        assert len(lines) == 26

    def test_generalized_family_is_input_error(self, capsys):
        assert run("eigen", "--family", "GenPedersen", "--params", "1,1",
                   "--grid=0.5:1:2,0:1:2") == 2

    def test_rho_axis_must_be_positive(self, capsys):
        assert run("eigen", "--poles", '{"dipoleCoeff": 1}',
                   "--grid=-0.5:1:4,0:1:4") == 2

    def test_branch_points_skipped(self, capsys):
        # the eta = 0 row hugs the branch cut of the square root and is
        # dropped; the off-axis rows still verify
        code = run("eigen", "--poles", '{"complexPair": [0.5,1,0.3]}',
                   "--grid=0.2:0.9:4,-1:1:3")
        out = capsys.readouterr().out
        assert "skipped 4" in out
        assert code == 0

    def test_all_points_singular_exits_3(self, capsys):
        code = run("eigen", "--poles", '{"complexPair": [0.5,1,0.3]}',
                   "--grid=0.2:0.9:4,-0.004:0.004:3")
        assert code == 3
        assert "singular locus" in capsys.readouterr().err


class TestPullback:
    def test_diagonal_pass(self, tmp_path, capsys):
        out = tmp_path / "p.json"
        code = run("pullback", "--family", "Diagonal", "--weights", "1,2,2",
                   "--samples", "10", "--out", str(out), "--no-plot")
        assert code == 0
        capsys.readouterr()
        data = json.loads(out.read_text())
        assert abs(data["constant"] - 1.0) < 1e-9
        assert data["maxRelDev"] < 1e-6
        assert data["nUsed"] == len(data["ratios"]) > 0

    def test_empty_case_exits_3(self, capsys):
        assert run("pullback", "--family", "HeightOne",
                   "--params", "2,1") == 3

    def test_unknown_family(self, capsys):
        assert run("pullback", "--family", "GenPedersen",
                   "--params", "1,1") == 2


class TestMomentAndBergman:
    def test_moment_report(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        assert run("moment", "--family", "Diagonal", "--weights", "1,2,2",
                   "--samples", "3", "--out", str(out)) == 0
        capsys.readouterr()
        data = json.loads(out.read_text())
        assert data["report"]["zerosetNonempty"] is True
        assert data["report"]["actionFree"] is True
        assert len(data["report"]["samples"]) == 3
        for row in data["report"]["samples"]:
            assert row["residual"] < 1e-10

    def test_moment_empty_family(self, capsys):
        assert run("moment", "--family", "Diagonal",
                   "--weights", "1,1,1") == 0
        assert "nonempty=False" in capsys.readouterr().out

    def test_bergman_sweep(self, tmp_path, capsys):
        out = tmp_path / "b.json"
        assert run("bergman", "--pmax", "4", "--out", str(out)) == 0
        capsys.readouterr()
        data = json.loads(out.read_text())
        assert data["smoothTriples"] == [[1, 1, 1]]

    def test_slice_grid(self, capsys):
        assert run("slice", "--family", "GenPedersen", "--params", "1,1",
                   GRID4) == 0
        assert "max residual" in capsys.readouterr().out


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, tmp_path,
                                                         capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "family": "PL", "weights": "1,1,1", "grid": GRID4_BARE}))
        # config alone: empty case
        assert run("verify-sde", "--config", str(cfg)) == 3
        capsys.readouterr()
        # flag wins over the config value
        assert run("verify-sde", "--config", str(cfg),
                   "--weights", "2,3,3") == 0

    def test_config_must_hold_an_object(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2]")
        assert run("verify-sde", "--config", str(cfg)) == 2


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run("fly")
    assert exc.value.code == 2
