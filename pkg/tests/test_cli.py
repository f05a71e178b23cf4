import json
import math

import pytest

from kazhdan_lab.cli import main
from kazhdan_lab.subspaces import orthonormalize, subspace_to_dict


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, "--json", *argv)
    return code, json.loads(out)


def write_subspaces(path, bases):
    subs = [subspace_to_dict(orthonormalize(b)) for b in bases]
    path.write_text(json.dumps({"subspaces": subs}))


class TestCodistanceCommand:
    def test_orthogonal_lines(self, tmp_path, capsys):
        f = tmp_path / "subs.json"
        write_subspaces(f, [[[1, 0]], [[0, 1]]])
        code, report = run_json(capsys, "codistance", "--subspaces", str(f))
        assert code == 0
        assert report["bound"] == pytest.approx(0.5, abs=1e-12)
        assert "achieving_vector" in report["intermediates"]

    def test_identical_subspaces(self, tmp_path, capsys):
        f = tmp_path / "subs.json"
        write_subspaces(f, [[[1, 1]], [[1, 1]]])
        code, report = run_json(capsys, "codistance", "--subspaces", str(f))
        assert report["bound"] == pytest.approx(1.0, abs=1e-12)

    def test_weighted_matches_plain_for_unit_weights(self, tmp_path, capsys):
        f = tmp_path / "subs.json"
        write_subspaces(f, [[[1, 0, 0]], [[1, 1, 0]]])
        code, plain = run_json(capsys, "codistance", "--subspaces", str(f))
        code, weighted = run_json(
            capsys, "codistance", "--subspaces", str(f), "--alpha", "1,1"
        )
        assert weighted["bound"] == pytest.approx(plain["bound"], abs=1e-12)

    def test_malformed_file_exit_code(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text("{not json")
        code = main(["codistance", "--subspaces", str(f)])
        assert code == 2


class TestGraphCommand:
    def test_complete_graph(self, capsys):
        code, report = run_json(capsys, "graph", "lambda1", "--graph", "K5")
        assert code == 0
        assert report["bound"] == pytest.approx(5.0, abs=1e-9)
        assert report["intermediates"]["exact_spectrum"] == [0, 5, 5, 5, 5]

    def test_magic_graph(self, capsys):
        code, report = run_json(capsys, "graph", "lambda1", "--graph", "magic")
        assert report["bound"] == pytest.approx(4.0, abs=1e-9)

    def test_two_vertex_path(self, capsys):
        code, report = run_json(capsys, "graph", "lambda1", "--graph", "P2")
        assert report["bound"] == pytest.approx(2.0, abs=1e-12)

    def test_weighted_file(self, tmp_path, capsys):
        f = tmp_path / "graph.json"
        f.write_text(
            json.dumps(
                {
                    "vertices": 3,
                    "edges": [[0, 1], [1, 2], [0, 2]],
                    "c": {
                        "0,1": 1.3, "1,0": 1.3,
                        "1,2": 1.3, "2,1": 1.3,
                        "0,2": 1.3, "2,0": 1.3,
                    },
                }
            )
        )
        code, report = run_json(capsys, "graph", "lambda1", "--graph", str(f), "--weighted")
        assert report["bound"] == pytest.approx(3 / 2.6, abs=1e-9)

    def test_unknown_graph(self, capsys):
        assert main(["graph", "lambda1", "--graph", "nope"]) == 2


class TestVerifyCommands:
    def test_heisenberg_pass(self, capsys):
        code, report = run_json(capsys, "verify", "heisenberg", "--p", "3")
        assert code == 0
        assert report["satisfied"]
        assert report["intermediates"]["one_dim_count"] == 9
        assert report["intermediates"]["p_dim_count"] == 2
        assert report["intermediates"]["group_epsilon"] == pytest.approx(
            3**-0.5, abs=1e-9
        )

    def test_heisenberg_p5_epsilon(self, capsys):
        code, report = run_json(capsys, "verify", "heisenberg", "--p", "5")
        assert report["intermediates"]["group_epsilon"] == pytest.approx(0.4472, abs=1e-4)

    def test_heisenberg_rejects_composite(self, capsys):
        assert main(["verify", "heisenberg", "--p", "4"]) == 2

    def test_heisenberg_jobs_flag(self, capsys):
        code, report = run_json(capsys, "--jobs", "2", "verify", "heisenberg", "--p", "3")
        assert code == 0 and report["satisfied"]

    def test_six_points_skips_over_cap(self, capsys):
        code, report = run_json(capsys, "verify", "six-points", "--n", "3", "--mod", "5")
        assert code == 1
        assert not report["satisfied"]
        assert any("skipped" in note for note in report["notes"])


class TestBoundCommands:
    def test_eln_golden(self, capsys):
        code, report = run_json(capsys, "bound", "eln", "--n", "3", "--d", "0")
        assert code == 0
        assert report["bound"] == pytest.approx(2.1964e-3, abs=1e-7)

    def test_t3graph(self, capsys):
        code, report = run_json(capsys, "bound", "t3graph", "--eps", "0.3,0.3,0.3")
        assert report["intermediates"]["u0"] == pytest.approx(0.6, abs=1e-12)

    def test_kms(self, capsys):
        code, report = run_json(capsys, "bound", "kms", "--d", "6", "--m", "29")
        assert code == 0 and report["satisfied"]

    def test_kms_boundary_exit(self, capsys):
        code, report = run_json(capsys, "bound", "kms", "--d", "3", "--m", "4")
        assert code == 1 and not report["satisfied"]

    def test_gg1(self, capsys):
        code, report = run_json(
            capsys, "bound", "gg1", "--rho", "0.45", "--k", "4", "--lambda1", "4"
        )
        assert report["bound"] == pytest.approx(9 / 11, abs=1e-12)

    def test_tn(self, capsys):
        code, report = run_json(capsys, "bound", "tn", "--n", "3", "--eps", "0.0")
        assert report["bound"] == pytest.approx(math.sqrt(2 / 3), abs=1e-12)

    def test_t3(self, capsys):
        code, report = run_json(capsys, "bound", "t3", "--eps", "0.3,0.3,0.3")
        assert report["intermediates"]["eps0"] == pytest.approx(0.50709, abs=1e-4)

    def test_posdef_uniform(self, capsys):
        code, report = run_json(capsys, "bound", "posdef", "--n", "3", "--eps", "0.4")
        assert code == 0 and report["satisfied"]
        code, report = run_json(capsys, "bound", "posdef", "--n", "3", "--eps", "0.6")
        assert code == 1

    def test_posdef_file(self, tmp_path, capsys):
        f = tmp_path / "eps.json"
        f.write_text(json.dumps({"eps": [[0, 0.2], [0.2, 0]]}))
        code, report = run_json(capsys, "bound", "posdef", "--file", str(f))
        assert code == 0

    def test_gamma_field(self, capsys):
        code, report = run_json(
            capsys, "bound", "gamma", "--n", "3", "--d", "1", "--r0", "field", "--p", "5"
        )
        assert report["bound"] == pytest.approx(0.0894, abs=1e-4)

    def test_gamma_z_small_n(self, capsys):
        code, report = run_json(capsys, "bound", "gamma", "--n", "6", "--d", "0", "--r0", "Z")
        assert code == 1

    def test_alpha(self, capsys):
        code, report = run_json(capsys, "bound", "alpha", "--s", "10")
        assert report["bound"] == pytest.approx(26.832, abs=1e-3)
        code, report = run_json(capsys, "bound", "alpha", "--d", "1", "--s", "3")
        assert report["bound"] == pytest.approx(36.941, abs=1e-3)

    def test_bad_eps_exit(self, capsys):
        assert main(["bound", "t3", "--eps", "0.3,0.3"]) == 2


class TestPresentCommands:
    def test_kms_text(self, capsys):
        code, out = run_cli(capsys, "present", "kms", "--graph", "K6", "--ring", "F5")
        assert code == 0
        assert out.startswith("gens: x1 x2 x3 x4 x5 x6\n")
        assert "[x1,x2,x1]" in out

    def test_eln_cover_has_braid_relation_over_z(self, capsys):
        code, out = run_cli(
            capsys, "present", "eln-cover", "--n", "7", "--d", "0", "--ring", "Z"
        )
        assert "(e1_2(a1x0) e2_1(a1x0)^-1 e1_2(a1x0))^4" in out

    def test_kms_mixed_json(self, capsys):
        code, report = run_json(capsys, "present", "kms-mixed", "--n", "99", "--p", "67")
        assert report["generators"] == 99
        assert report["degree_multiset"]["3"] == 72 * 11**3

    def test_output_file(self, tmp_path, capsys):
        f = tmp_path / "pres.txt"
        code, _ = run_cli(
            capsys, "--out", str(f), "present", "kms", "--graph", "K3", "--ring", "F5"
        )
        assert f.read_text().startswith("gens: x1 x2 x3")

    def test_bad_ring(self, capsys):
        assert main(["present", "kms", "--graph", "K3", "--ring", "F4"]) == 2


class TestGsCommand:
    def test_file_input(self, tmp_path, capsys):
        f = tmp_path / "gs1_d6_p5.json"
        f.write_text(json.dumps({"gens": 6, "relations": {"3": 30, "p": 6}, "p": 5}))
        code, report = run_json(capsys, "gs", "check", "--file", str(f))
        assert code == 0 and report["satisfied"]

    def test_inline_with_hint(self, capsys):
        code, report = run_json(
            capsys,
            "gs", "check", "--gens", "6", "--r3", "30", "--rp", "6", "--p", "5",
            "--t", str(1 / math.sqrt(15)),
        )
        assert report["intermediates"]["h_hint"] == pytest.approx(-0.02591, abs=1e-5)

    def test_unsatisfied_exit(self, capsys):
        code, report = run_json(
            capsys, "gs", "check", "--gens", "2", "--r3", "2", "--rp", "2", "--p", "2"
        )
        assert code == 1 and not report["satisfied"]

    def test_missing_args(self, capsys):
        assert main(["gs", "check"]) == 2


def test_reports_are_byte_stable(tmp_path, capsys):
    runs = []
    for _ in range(2):
        code, out = run_cli(capsys, "--json", "bound", "eln", "--n", "4", "--d", "1")
        runs.append(out)
    assert runs[0] == runs[1]


def test_six_points_full_run_fields(capsys):
    code, report = run_json(capsys, "verify", "six-points", "--n", "3", "--mod", "2")
    assert code == 0
    inter = report["intermediates"]
    assert inter["group_order"] == 168
    assert inter["vertex_union_kappa"] >= 3 / 8
    assert inter["spectral_lower_bound"] >= 1 / 8


def test_six_points_n4_skips_on_cap(capsys):
    code, report = run_json(capsys, "verify", "six-points", "--n", "4", "--mod", "2")
    assert code == 1
    assert any("skipped" in note for note in report["notes"])
