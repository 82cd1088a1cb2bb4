import json

import pytest

from dufloindex.cli import Settings, _parse_scalar, load_config, main
from dufloindex.scalar import Scalar


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_parse_scalar_forms():
    assert _parse_scalar("3") == Scalar.of(3)
    assert _parse_scalar("-1/2") == Scalar.of(-0.5)
    assert _parse_scalar("1+2i") == Scalar.of(1, 2)
    assert _parse_scalar("-i") == Scalar.of(0, -1)
    assert _parse_scalar("3/4i") == Scalar.of(0, 0.75)
    with pytest.raises(ValueError):
        _parse_scalar("")


def test_config_file(tmp_path):
    (tmp_path / "g.lie").write_text("dim 1\n")
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\norder = 6\ntwists = -1, 1\nphi = 0 1\nphi = 1/2 i\nlie = g.lie\nt_grid = 0.2 0.1\n")
    s = load_config(cfg, Settings())
    assert s.order == 6 and s.twists == [-1, 1] and s.t_grid == [0.2, 0.1]
    assert s.phis == [["0", "1"], ["1/2", "i"]]
    assert s.lie_files == [str((tmp_path / "g.lie").resolve())]
    assert len(s.phi_series()) == 2


def test_config_errors_carry_line_numbers(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("order = 4\nspeed = 3\n")
    with pytest.raises(ValueError, match="bad.cfg:2: unknown key"):
        load_config(cfg, Settings())
    cfg.write_text("order\n")
    with pytest.raises(ValueError, match=":1: expected key = value"):
        load_config(cfg, Settings())


def test_bad_config_exits_two(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("cutoff = many\n")
    with pytest.raises(SystemExit) as exc:
        main(["index", "--config", str(cfg)])
    assert exc.value.code == 2


def test_unknown_suite_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_negative_cutoff_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["index", "--cutoff", "-1"])
    assert exc.value.code == 2


def test_algebra_suite_passes(capsys):
    code, out = run(capsys, "verify-algebra")
    assert code == 0
    assert "PASS    verify-algebra: su2_so3_isomorphism" in out
    assert out.strip().endswith("0 failed")


def test_broken_lie_file_is_a_failure(tmp_path, capsys):
    (tmp_path / "bad.lie").write_text("dim 3\n1 2 3 1\n2 3 1 1\n3 1 2 -1\n")
    cfg = tmp_path / "c.cfg"
    cfg.write_text("lie = bad.lie\n")
    code, out = run(capsys, "verify-algebra", "--config", str(cfg))
    assert code == 1
    assert "FAIL    verify-algebra: validate[bad.lie]" in out


def test_index_prints_table(capsys):
    code, out = run(capsys, "index", "--cutoff", "8", "--twist", "1")
    assert code == 0
    assert "twist w=1, cutoff 8" in out
    assert "Ind(D_m)" in out
    assert "    3         2" in out


def test_json_report_schema_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify-theorem", "--cutoff", "6", "--twist", "0,2", "--json", str(path), "--quiet"]) == 0
    capsys.readouterr()
    assert a.read_text() == b.read_text()
    rep = json.loads(a.read_text())
    assert rep["schema"] == 1 and rep["suite"] == "verify-theorem" and rep["status"] == "pass"
    assert rep["settings"]["twists"] == [0, 2]
    assert [c["id"] for c in rep["checks"]] == ["index_formula[w=0]", "index_formula[w=2]"]
    for c in rep["checks"]:
        assert set(c) == {"id", "status", "detail", "values", "numeric", "suite"}
    assert rep["checks"][1]["values"]["phi0.lhs"] == str(Scalar.of(-2))


def test_heat_suite_reports_raw_t_dependence(tmp_path, capsys):
    out = tmp_path / "h.json"
    code = main(["heat", "--twist", "0", "--json", str(out), "--quiet"])
    capsys.readouterr()
    rep = json.loads(out.read_text())
    numeric = rep["checks"][0]["numeric"]
    assert "m=2.t=0.05" in numeric and "m=2.decay_rate" in numeric
    # |m| = 4 misses the tolerance; see the README
    assert code == 1
    assert rep["checks"][0]["status"] == "fail"
