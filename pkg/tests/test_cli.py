import json

import pytest

from crosscap3.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestStats:
    def test_radius_three(self, capsys):
        code, out, _ = run(capsys, "stats", "--radius", "3")
        assert code == 0
        assert "tets 53 ok" in out
        assert "one_sided 56 ok" in out
        assert "d_edges 162 ok" in out
        assert "two_sided 162 ok" in out


class TestGenerate:
    def test_json_artifact(self, capsys, tmp_path):
        path = tmp_path / "ball.json"
        code, _, _ = run(capsys, "generate", "--radius", "1", "--out", str(path))
        assert code == 0
        data = json.loads(path.read_text())
        assert data["ball"]["radius"] == 1
        assert len(data["ball"]["tets"]) == 5
        assert len(data["curve_graph"]["two_sided"]) == 18

    def test_dot_output(self, capsys):
        code, out, _ = run(capsys, "generate", "--radius", "0", "--format", "dot")
        assert code == 0
        assert out.startswith("graph curvegraph_0")
        assert "[shape=box];" in out

    def test_byte_identical_runs(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "generate", "--radius", "2", "--out", str(a))
        run(capsys, "generate", "--radius", "2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestVerify:
    def test_passes_and_reports(self, capsys, tmp_path):
        path = tmp_path / "verify.json"
        code, _, _ = run(capsys, "verify", "--radius", "2", "--out", str(path))
        assert code == 0
        report = json.loads(path.read_text())
        assert report["ok"] is True
        assert report["radius"] == 2
        names = {c["name"] for c in report["checks"]}
        assert "four_cliques_are_tets" in names
        assert "determined_vertex_unique" in names
        assert "link_labelings" in names


class TestHyperbolicity:
    def test_csv_rows(self, capsys):
        code, out, _ = run(capsys, "hyperbolicity", "--radius", "2", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "name,radius,examined,worst,witness,bound,ok"
        names = {line.split(",")[0] for line in lines[1:]}
        assert {"thinness_tet_graph", "thinness_curve_graph", "subdivision_isometry"} <= names

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "hyperbolicity", "--radius", "1")
        assert code == 0
        rows = json.loads(out)
        assert all(row["ok"] for row in rows)


class TestRigidity:
    def test_level_two(self, capsys):
        code, out, _ = run(capsys, "rigidity", "--level", "2")
        assert code == 0
        reports = json.loads(out)
        by_check = {r["check"]: r for r in reports}
        assert by_check["rigidity_level_1"]["count_found"] == 408
        assert by_check["rigidity_level_2"]["count_found"] == 120
        assert by_check["pointwise_stabilizer_level_1"]["count_found"] == 0


class TestFarey:
    def test_queries(self, capsys):
        assert run(capsys, "farey", "adjacent", "1/2", "2/3") == (0, "true\n", "")
        assert run(capsys, "farey", "adjacent", "1/3", "2/3") == (0, "false\n", "")
        assert run(capsys, "farey", "mediant", "0/1", "1/1") == (0, "1/2\n", "")
        code, out, _ = run(capsys, "farey", "neighbors", "0/1", "1/0")
        assert code == 0 and set(out.split()) == {"1/1", "-1/1"}

    def test_ball_query(self, capsys):
        code, out, _ = run(capsys, "farey", "ball", "1")
        assert code == 0
        assert len(json.loads(out)["triangles"]) == 4

    def test_invalid_slope(self, capsys):
        code, _, err = run(capsys, "farey", "mediant", "x/y", "1/1")
        assert code == 2 and "error:" in err

    def test_non_adjacent_mediant(self, capsys):
        code, _, err = run(capsys, "farey", "mediant", "1/3", "2/3")
        assert code == 2 and "error:" in err


class TestErrors:
    def test_radius_cap(self, capsys):
        code, _, err = run(capsys, "stats", "--radius", "99")
        assert code == 2 and "exceeds cap" in err

    def test_bad_subcommand(self, capsys):
        with pytest.raises(SystemExit):
            main(["frobnicate"])

    def test_bad_sample_cap(self, capsys):
        code, _, err = run(capsys, "hyperbolicity", "--radius", "1", "--sample-cap", "0")
        assert code == 2
