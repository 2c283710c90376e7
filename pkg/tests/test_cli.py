import csv
import io

import pytest

from invlimit.cli import EXIT_DISAGREE, EXIT_ERROR, EXIT_OK, headline, main
from invlimit.errors import CaseError
from invlimit.family import reference
from invlimit.figures import FIGURE_IDS, build_figure, check_compatible, compatible, to_csv


def test_classify_reference(capsys):
    assert main(["classify", "--preset", "case3a", "--samples", "512"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("Case 3a (n=1): ω0=0.2 repelling")
    assert "agreement: yes" in out


def test_classify_preset_file(capsys):
    assert main(["classify", "--preset", "presets/case2.txt", "--samples", "512"]) == EXIT_OK
    assert "interval of period-2 points" in capsys.readouterr().out


def test_invalid_parameters(capsys):
    assert main(["classify", "--rho", "1.5", "--delta", "1", "--gamma", "0", "--alpha", "-1"]) == EXIT_ERROR
    assert "invalid parameters" in capsys.readouterr().err
    assert main(["classify", "--rho", "0.5"]) == EXIT_ERROR
    assert main(["classify", "--preset", "case1", "--rho", "0.5"]) == EXIT_ERROR


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--bogus"])
    assert exc.value.code == EXIT_ERROR


def test_disagreement_exit_code(monkeypatch, capsys):
    import invlimit.cli as cli

    monkeypatch.setattr(cli, "census_agrees", lambda label, census: False)
    assert main(["classify", "--preset", "case1", "--samples", "256"]) == EXIT_DISAGREE


def test_census_csv(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["census", "--preset", "case3b", "--samples", "512", "--out", str(out)]) == EXIT_OK
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["kind", "lo", "hi", "period"]
    assert any(r[3] == "4" for r in rows[1:])


def test_embed_csv(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["embed", "--preset", "case2", "--samples", "10", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    assert all(r["sheet"] == "Line" and float(r["value"]) <= 1.0 for r in rows)


def test_embed_range(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["embed", "--preset", "case3b", "--sheet", "ArcMinusInf", "--samples", "5",
                 "--range", "0", "0.1", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert [float(r["value"]) for r in rows] == pytest.approx([0, 0.025, 0.05, 0.075, 0.1])


def test_figure_incompatible(capsys):
    assert main(["figure", "--preset", "case1", "--figure", "7"]) == EXIT_ERROR
    assert "Fig. 7" in capsys.readouterr().err


def test_figure_report(tmp_path):
    assert main(["figure", "--preset", "case2", "--all", "--out", str(tmp_path)]) == EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig1.csv", "fig1.svg", "fig2.csv", "fig2.svg", "fig3.csv", "fig3.svg"]


def test_compatibility_table():
    got = {name: [f for f in FIGURE_IDS if compatible(reference(name), f)] for name in
           ("case1", "case2", "case3a", "case3b")}
    assert got == {"case1": [1, 2], "case2": [1, 2, 3], "case3a": [1, 4, 5, 6, 7], "case3b": [1, 4, 5, 6, 8, 9]}
    with pytest.raises(CaseError):
        check_compatible(reference("case1"), 9)


def test_figure_csv_header_and_labels():
    fs = build_figure(reference("case3a"), 5)
    assert fs.labels[:6] == ["1", "0", "-d_0", "-2d_0", "-2d_0-d_1", "-2d_0-2d_1"]
    rows = list(csv.reader(io.StringIO(to_csv(fs))))
    assert rows[0] == ["figure", "kind", "label", "index", "x", "y", "z"]


def test_fig6_order():
    fs = build_figure(reference("case3a"), 6)
    xs = [pt[0] for lab, pt in fs.markers if not lab.endswith("∞")]
    assert xs == sorted(xs)


def test_headline_outside():
    from invlimit.family import UnimodalMap

    assert headline(UnimodalMap(0.3, 1.0, -2.0, -1.5)).startswith("OutsideF2n")
