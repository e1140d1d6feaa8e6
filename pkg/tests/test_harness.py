import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellhyp import cli, harness as H
from ellhyp.report import VerificationReport, make_report, untestable_report

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite, finite)
def test_complex_literal_round_trip(re, im):
    z = complex(re, im)
    assert H.parse_complex(H.format_complex(z)) == z


@pytest.mark.parametrize("text,value", [
    ("1+2i", 1 + 2j), ("-0.5i", -0.5j), ("3", 3), (" 1e-3-2e-4i ", 1e-3 - 2e-4j),
    ("i", 1j), ("-i", -1j), ("2.5j", 2.5j), ("-1.5e+2+1E-1i", -150 + 0.1j), ("4-i", 4 - 1j),
])
def test_parse_complex(text, value):
    assert H.parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1+2k", "1++2i"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        H.parse_complex(text)


def test_format_complex_shape():
    assert H.format_complex(1.5 - 0.25j) == "1.5-0.25i"
    assert H.format_complex(2) == "2.0+0.0i"


def _rows():
    good = make_report("a.pass", 1 + 1j, 1 + 1j, tol=1e-12, meta={"nodes": 64, "arr": (1, 2.5)})
    bad = make_report("a.fail", 1.0, 2.0, tol=1e-12)
    unt = untestable_report("a.untestable", "outside the disc", 1e-9)
    inf = VerificationReport("a.inf", 1.0, 0.0, math.inf, math.inf, "fail", 1e-9)
    return [("s", i, r) for i, r in enumerate([good, bad, unt, inf])]


def test_json_round_trip():
    cfg = H.SuiteConfig(seed=5)
    text = H.render_json(_rows(), cfg)
    meta, rows = H.parse_json(text)
    assert meta == {"seed": 5, "version": H.__version__, "started": None}
    assert H.render_json(rows, cfg) == text
    for (_, _, a), (_, _, b) in zip(_rows(), rows):
        assert a.id == b.id and a.verdict == b.verdict
        assert a.lhs == b.lhs or (math.isnan(a.lhs.real) and math.isnan(b.lhs.real))


def test_json_schema():
    doc = json.loads(H.render_json(_rows(), H.SuiteConfig()))
    assert set(doc) == {"meta", "results"}
    rec = doc["results"][0]
    assert rec["lhs"] == {"re": 1.0, "im": 1.0}
    assert rec["verdict"] == "pass" and rec["meta"]["arr"] == [1, 2.5]
    assert rec["wall_time"] is None


def test_csv_header_and_complex_strings():
    text = H.render_csv(_rows(), H.SuiteConfig(format="csv"))
    lines = text.splitlines()
    assert lines[0] == ",".join(H.CSV_FIELDS)
    assert lines[0] == "suite,instance,id,verdict,lhs,rhs,abs_residual,rel_residual,tolerance,wall_time,meta"
    assert "1.0+1.0i" in lines[1]


def test_emit_writes_file(tmp_path):
    path = tmp_path / "r.json"
    text = H.emit_report(_rows(), H.SuiteConfig(), str(path))
    assert path.read_text() == text


def test_exit_status():
    rows = _rows()
    assert H.exit_status(rows) == 1
    assert H.exit_status([r for r in rows if r[2].verdict != "fail"]) == 0
    assert H.exit_status([]) == 0


def test_empty_suite_list():
    rows = H.run_suites(H.SuiteConfig(suites=[]))
    assert rows == []
    assert json.loads(H.render_json(rows, H.SuiteConfig()))["results"] == []


def test_unknown_suite_rejected_before_running(monkeypatch):
    ran = []
    monkeypatch.setitem(H.SUITES, "spy", H.Suite("spy", "records calls", lambda ctx: ran.append(1) or []))
    with pytest.raises(H.ConfigError):
        H.run_suites(H.SuiteConfig(suites=["spy", "no-such-suite"]))
    assert ran == []


@pytest.mark.parametrize("cfg", [
    H.SuiteConfig(tolerances={"*": 1e-16}),
    H.SuiteConfig(nodes={"*": 24}),
    H.SuiteConfig(format="xml"),
    H.SuiteConfig(workers=0),
])
def test_config_validation(cfg):
    with pytest.raises(H.ConfigError):
        cfg.validate()


def test_override_lookup_precedence():
    cfg = H.SuiteConfig(tolerances={"*": 1e-3, "beta": 1e-4, "beta.E7_i": 1e-5, "beta-univariate": 1e-6})
    ctx = H.make_context("beta-univariate", cfg)
    assert ctx.tol("beta.E7_i.3", 1.0) == 1e-5
    assert ctx.tol("beta.V_reduction", 1.0) == 1e-4
    assert ctx.tol("multi.x", 1.0) == 1e-6
    assert H.make_context("series", cfg).tol("multi.x", 1.0) == 1e-3
    assert H.make_context("series").tol("anything", 0.5) == 0.5
    spec = H.make_context("series", H.SuiteConfig(nodes={"series": 128})).spec("series.x")
    assert spec.nodes == 128


def test_rng_depends_on_seed_and_suite():
    a = H.make_context("series", H.SuiteConfig(seed=1)).rng.random()
    b = H.make_context("series", H.SuiteConfig(seed=1)).rng.random()
    c = H.make_context("series", H.SuiteConfig(seed=2)).rng.random()
    d = H.make_context("bailey", H.SuiteConfig(seed=1)).rng.random()
    assert a == b and a != c and a != d


def test_param_file():
    text = """
    # a comment
    suites = core-qseries, series
    seed = 4   # trailing comment
    tol.series.frenkel_turaev = 1e-11
    nodes.beta = 64
    point.beta.elliptic.t = 0.3+0.1i, 0.4, -0.2i, 0.5-0.1i, 0.45
    """
    cfg = H.config_from_params(H.parse_param_file(text))
    assert cfg.suites == ["core-qseries", "series"] and cfg.seed == 4
    assert cfg.tolerances == {"series.frenkel_turaev": 1e-11} and cfg.nodes == {"beta": 64}
    assert cfg.points["beta.elliptic.t"][0] == 0.3 + 0.1j


@pytest.mark.parametrize("text", ["seed 4", "seed = 1\nseed = 2", "bad key = 1", "colour = red", "seed = x"])
def test_param_file_errors(text):
    with pytest.raises(H.ConfigError):
        H.config_from_params(H.parse_param_file(text))


def test_user_point_is_checked():
    cfg = H.SuiteConfig(suites=["series"], points={"series.frenkel_turaev.t": [0.5, 0.4j, 0.6, 0.3 - 0.2j, 3]})
    rows = H.run_suites(cfg)
    user = [r for _, _, r in rows if r.id == "series.frenkel_turaev.user"]
    assert len(user) == 1 and user[0].passed


def test_workers_do_not_change_the_report():
    one = H.render_json(H.run_suites(H.SuiteConfig(suites=["series", "core-qseries"])), H.SuiteConfig())
    two = H.render_json(H.run_suites(H.SuiteConfig(suites=["core-qseries", "series"], workers=2)), H.SuiteConfig())
    assert one == two
    assert [r["suite"] for r in json.loads(one)["results"]][0] == "core-qseries"


def test_cli_list(capsys):
    assert cli.main(["--list"]) == 0
    out = capsys.readouterr().out
    assert all(sid in out for sid in H.SUITES)


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    assert cli.main(["no-such-suite"]) == 2
    assert cli.main(["core-qseries", "--tol", "1e-20"]) == 2
    assert cli.main(["core-qseries", "--config", str(tmp_path / "missing.cfg")]) == 2
    out = tmp_path / "r.csv"
    assert cli.main(["core-qseries", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().startswith("suite,instance,id")
    monkeypatch.setitem(H.SUITES, "broken", H.Suite("broken", "always fails",
                                                    lambda ctx: [make_report("x", 0, 1, tol=1e-9)]))
    assert cli.main(["broken"]) == 1
    monkeypatch.setitem(H.SUITES, "shrug", H.Suite("shrug", "inconclusive only",
                                                   lambda ctx: [make_report("x", 0, 1, tol=1e-9, verdict="inconclusive")]))
    assert cli.main(["shrug"]) == 0


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("suites = core-qseries\nseed = 3\nformat = json\n")
    assert cli.main(["--config", str(cfg)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["seed"] == 3
    assert {r["suite"] for r in doc["results"]} == {"core-qseries"}


def test_cli_timestamps(capsys):
    assert cli.main(["core-qseries", "--timestamps"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["started"] is not None
