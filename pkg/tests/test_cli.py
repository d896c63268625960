"""End-to-end tests of the command-line interface."""

import json

from npoly import cli


def write_doc(tmp_path, doc, name="input.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


KLOOSTERMAN = {"n": 2, "support": [[1, 0], [0, 1], [-1, -1]]}
FIVE_DIM = {"family": {"name": "five_dim", "parameters": {}}}
MONOMIAL_3 = {"family": {"name": "monomial", "parameters": {"d": 3}}}
MONOMIAL_4 = {"family": {"name": "monomial", "parameters": {"d": 4}}}


class TestHodge:
    def test_monomial_slopes(self, tmp_path, capsys):
        path = write_doc(tmp_path, MONOMIAL_3)
        code, out, _ = run_cli(capsys, ["hodge", path, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["hodge_polygon"]["slopes"] == ["0", "1/3", "2/3"]

    def test_five_dim_vertices(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, out, _ = run_cli(capsys, ["hodge", path, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["hodge_polygon"]["vertices"] == [
            ["0", "0"],
            ["1", "0"],
            ["2", "2"],
            ["3", "5"],
        ]

    def test_unit_simplex(self, tmp_path, capsys):
        doc = {"n": 2, "support": [[1, 0], [0, 1]]}
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["hodge", path, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["hodge_polygon"]["vertices"] == [["0", "0"], ["1", "0"]]

    def test_geometry_error_exit_code(self, tmp_path, capsys):
        doc = {"n": 2, "support": [[1, 0], [2, 0]]}
        path = write_doc(tmp_path, doc)
        code, _, err = run_cli(capsys, ["hodge", path])
        assert code == 2
        assert "error" in err


class TestDiagonal:
    def test_five_dim_non_ordinary(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, out, _ = run_cli(capsys, ["diagonal", path, "-p", "5", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["ordinary"] is False
        assert report["newton_polygon"]["slopes"] == ["0", "5/2", "5/2"]

    def test_five_dim_ordinary(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, out, _ = run_cli(capsys, ["diagonal", path, "-p", "7", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["ordinary"] is True
        assert report["newton_polygon"] == report["hodge_polygon"]

    def test_monomial_fixed_slopes(self, tmp_path, capsys):
        path = write_doc(tmp_path, MONOMIAL_4)
        code, out, _ = run_cli(capsys, ["diagonal", path, "-p", "5", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["ordinary"] is True
        assert report["newton_polygon"]["slopes"] == ["0", "1/4", "1/2", "3/4"]

    def test_shape_error(self, tmp_path, capsys):
        path = write_doc(tmp_path, KLOOSTERMAN)
        code, _, err = run_cli(capsys, ["diagonal", path, "-p", "5"])
        assert code == 3

    def test_not_coprime(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, _, err = run_cli(capsys, ["diagonal", path, "-p", "3"])
        assert code == 4

    def test_non_prime(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, _, _ = run_cli(capsys, ["diagonal", path, "-p", "4"])
        assert code == 4


class TestOrdinaryClasses:
    def test_monomial_six(self, tmp_path, capsys):
        doc = {"family": {"name": "monomial", "parameters": {"d": 6}}}
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["ordinary-classes", path, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["classes"] == ["1"]
        assert report["density"] == "1/2"

    def test_five_dim(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, out, _ = run_cli(capsys, ["ordinary-classes", path, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["classes"] == ["1"]
        assert report["density"] == "1/2"

    def test_unimodular_density_one(self, tmp_path, capsys):
        doc = {"n": 2, "support": [[1, 0], [0, 1]]}
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["ordinary-classes", path, "--format", "json"])
        assert code == 0
        assert json.loads(out)["density"] == "1"


class TestDecompose:
    def test_gen_kloosterman(self, tmp_path, capsys):
        doc = {
            "family": {
                "name": "generalized_kloosterman",
                "parameters": {"n": 2, "v": [2, 3]},
            }
        }
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["decompose", path, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        factors = sorted(tuple(r["invariant_factors"]) for r in report["faces"])
        assert factors == [("1", "1"), ("1", "2"), ("1", "3")]
        assert report["dstar"] == "6"

    def test_certificate(self, tmp_path, capsys):
        doc = {
            "family": {
                "name": "generalized_kloosterman",
                "parameters": {"n": 2, "v": [2, 3]},
            }
        }
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(
            capsys, ["decompose", path, "-p", "7", "--format", "json"]
        )
        assert code == 0
        report = json.loads(out)
        assert report["certificate"]["certified"] is True

    def test_five_dim_no_certificate(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, out, _ = run_cli(
            capsys, ["decompose", path, "-p", "5", "--format", "json"]
        )
        assert code == 0
        report = json.loads(out)
        assert report["certificate"]["certified"] is False
        assert report["certificate"]["dstar"] == "3"

    def test_unit_box_dstar(self, tmp_path, capsys):
        doc = {"family": {"name": "box", "parameters": {"dims": [1, 1]}}}
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["decompose", path, "--format", "json"])
        assert code == 0
        assert json.loads(out)["dstar"] == "1"

    def test_deformed_support_ignores_low_weight_terms(self, tmp_path, capsys):
        # the deformation term (1,0) sits below the single away-face and
        # does not occur in any face piece
        doc = {"n": 2, "support": [[3, 0], [0, 3], [1, 0]]}
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(
            capsys, ["decompose", path, "-p", "7", "--format", "json"]
        )
        assert code == 0
        report = json.loads(out)
        assert len(report["faces"]) == 1
        assert report["faces"][0]["support_points"] == [["3", "0"], ["0", "3"]]
        assert report["certificate"]["certified"] is True
        assert report["certificate"]["dstar"] == "3"


class TestScan:
    def test_monomial_criterion(self, tmp_path, capsys):
        path = write_doc(tmp_path, MONOMIAL_3)
        code, out, _ = run_cli(capsys, ["scan", path, "--bound", "100", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        for row in report["rows"]:
            p = int(row["p"])
            if row["verdict"] == "excluded":
                assert p == 3
            else:
                assert (row["verdict"] == "ordinary") == (p % 3 == 1)

    def test_five_dim_splits_by_residue(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        code, out, _ = run_cli(capsys, ["scan", path, "--bound", "200", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        for row in report["rows"]:
            if row["verdict"] == "excluded":
                continue
            assert (row["verdict"] == "ordinary") == (row["residue"] == "1")
        assert report["summary"]["predicted_density"] == "1/2"

    def test_csv_output(self, tmp_path, capsys):
        path = write_doc(tmp_path, MONOMIAL_3)
        code, out, _ = run_cli(capsys, ["scan", path, "--bound", "20", "--format", "csv"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "p,residue,verdict"
        assert lines[1].startswith("2,")


class TestInputHandling:
    def test_reports_are_reproducible(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        _, out1, _ = run_cli(capsys, ["diagonal", path, "-p", "7", "--format", "json"])
        _, out2, _ = run_cli(capsys, ["diagonal", path, "-p", "7", "--format", "json"])
        assert out1 == out2

    def test_json_round_trip(self, tmp_path, capsys):
        path = write_doc(tmp_path, FIVE_DIM)
        _, out, _ = run_cli(capsys, ["diagonal", path, "-p", "7", "--format", "json"])
        report = json.loads(out)
        assert json.loads(json.dumps(report)) == report

    def test_string_integers_accepted(self, tmp_path, capsys):
        doc = {"n": 1, "support": [["12"]]}
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["hodge", path, "--format", "json"])
        assert code == 0
        assert json.loads(out)["denominator"] == "12"

    def test_huge_integers_parse_but_refuse_enumeration(self, tmp_path, capsys):
        doc = {"n": 1, "support": [["100000000000000000000003"]]}
        path = write_doc(tmp_path, doc)
        code, _, err = run_cli(capsys, ["hodge", path, "--format", "json"])
        assert code == 2
        assert "too large" in err

    def test_family_and_support_exclusive(self, tmp_path, capsys):
        doc = dict(KLOOSTERMAN)
        doc["family"] = {"name": "monomial", "parameters": {"d": 3}}
        path = write_doc(tmp_path, doc)
        code, _, _ = run_cli(capsys, ["hodge", path])
        assert code == 5

    def test_missing_file(self, capsys):
        code, _, _ = run_cli(capsys, ["hodge", "/nonexistent/input.json"])
        assert code == 5

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        code, _, _ = run_cli(capsys, ["hodge", str(path)])
        assert code == 5

    def test_coefficients_echoed(self, tmp_path, capsys):
        doc = dict(MONOMIAL_3)
        doc["coefficients"] = [1]
        path = write_doc(tmp_path, doc)
        code, out, _ = run_cli(capsys, ["hodge", path, "--format", "json"])
        assert code == 0
        assert json.loads(out)["input"]["coefficients"] == ["1"]

    def test_text_format_default(self, tmp_path, capsys):
        path = write_doc(tmp_path, MONOMIAL_3)
        code, out, _ = run_cli(capsys, ["hodge", path])
        assert code == 0
        assert out.startswith("command: hodge")
