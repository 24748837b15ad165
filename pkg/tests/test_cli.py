import json

import pytest

from reesdmod.analysis import RunConfig, effective_jobs, emit_report, report_dict, run_analyze
from reesdmod.cli import corpus_runner, main, parse_oracles, parse_p_range, parse_random_spec
from reesdmod.parser import parse_polynomial

D5_LINES = "(s)(s + 1)(s + 2)\n" * 3 + "(s)(s + 1)(s + 2)(s + 3)\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestArgumentHelpers:
    def test_random_spec(self):
        assert parse_random_spec("mu=1,d=7,seed=3") == {"mu": 1, "d": 7, "seed": 3, "bound": 9}
        assert parse_random_spec("mu=2, d=5, seed=0, bound=3")["bound"] == 3
        for bad in ("mu=1,d=7", "mu=1,d=7,seed=1,colour=2", "mu1,d=7,seed=2"):
            with pytest.raises(ValueError):
                parse_random_spec(bad)

    def test_p_range(self):
        assert parse_p_range("5") == (5, 5)
        assert parse_p_range("2..5") == (2, 5)
        for bad in ("1", "5..3", "2..65"):
            with pytest.raises(ValueError):
                parse_p_range(bad)

    def test_oracles(self):
        assert parse_oracles("thA, thC") == ("thA", "thC")
        with pytest.raises(ValueError):
            parse_oracles("thA,thZ")

    def test_config_guards(self):
        f = [parse_polynomial(s) for s in ("x^2", "x*y", "y^2")]
        with pytest.raises(ValueError):
            RunConfig()
        with pytest.raises(ValueError):
            RunConfig(ideal=f, random={"mu": 1, "d": 2, "seed": 0, "bound": 9})
        with pytest.raises(ValueError):
            RunConfig(ideal=f, p_max=65)
        with pytest.raises(ValueError):
            RunConfig(ideal=f, bcap=0)


class TestBFunctionCommand:
    def test_example_text(self, capsys):
        code, out, _ = run(capsys, "bfunction", "--inline", "x^5; x^2*y^3; y^5", "-p", "2..5")
        assert code == 0 and out == D5_LINES

    def test_example_from_file(self, capsys, tmp_path):
        path = tmp_path / "ex.txt"
        path.write_text("x^5\nx^2*y^3\ny^5\n")
        code, out, _ = run(capsys, "bfunction", "--ideal", str(path), "-p", "5")
        assert out == "(s)(s + 1)(s + 2)(s + 3)\n"

    def test_json(self, capsys):
        code, out, _ = run(capsys, "bfunction", "--inline", "x^2;x*y;y^2", "-p", "3", "--format", "json")
        assert json.loads(out) == {"3": {"factored": "(s)", "coeffs": ["0", "1"]}}

    def test_random(self, capsys):
        code, out, _ = run(capsys, "bfunction", "--random", "mu=1,d=4,seed=2", "-p", "2..4")
        assert out == "(s)\n(s)(s + 1)\n(s)(s + 1)(s + 2)\n"


class TestAnalyzeCommand:
    def test_json_roundtrip(self, capsys):
        code, out, _ = run(capsys, "analyze", "--inline", "x^5;x^2*y^3;y^5")
        assert code == 0
        rep = json.loads(out)
        assert rep["ok"] and all(rep["checks"].values())
        assert rep["table"]["5,0"] == 1 and rep["table"]["2,3"] == 1
        assert [tuple(g) for g in rep["min_gens"]] == [(1, 2), (1, 3), (2, 1), (3, 1), (5, 0)]
        assert rep["bfunctions"]["5"]["factored"] == "(s)(s + 1)(s + 2)(s + 3)"
        assert rep["bfunctions"]["5"]["coeffs"] == ["0", "6", "11", "6", "1"]

    def test_emit_matches_report(self):
        f = [parse_polynomial(s) for s in ("x^3", "x*y^2", "y^3")]
        res = run_analyze(RunConfig(ideal=f))
        again = json.loads(emit_report(res, "json"))
        assert again == json.loads(json.dumps(report_dict(res)))
        assert {tuple(map(int, k.split(","))): v for k, v in again["table"].items()} == res.table.dims

    def test_text_table(self, capsys):
        code, out, _ = run(capsys, "analyze", "--inline", "x^5;x^2*y^3;y^5", "--format", "text")
        assert "  5     1    16    20    10" in out
        assert D5_LINES in out

    def test_invalid_ideal(self, capsys):
        code, out, err = run(capsys, "analyze", "--inline", "x^2;x*y;x*(x+y)")
        assert code == 1
        rep = json.loads(out)
        assert not rep["ok"] and rep["table"] == {} and "height < 2" in rep["errors"][0]
        assert "height < 2" in err

    def test_parse_error_exit(self, capsys):
        code, _, err = run(capsys, "analyze", "--inline", "x^2;x*y;z")
        assert code == 2 and "unknown variable z" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "--ideal", str(tmp_path / "nope.txt"))
        assert code == 2 and err.startswith("error:")

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "r.json"
        code, out, _ = run(capsys, "analyze", "--inline", "x^2;x*y;y^2", "-o", str(target))
        assert out == "" and json.loads(target.read_text())["ok"]

    def test_thc_opt_in(self, capsys):
        code, out, _ = run(capsys, "analyze", "--inline", "x^5;x^2*y^3;y^5", "--pmax", "3",
                           "--oracles", "thC")
        rep = json.loads(out)
        assert code == 0
        thc = rep["oracles"]["thC"]
        assert {p: (v["dim"], v["verified"]) for p, v in thc.items()} == {"2": (4, True), "3": (13, True)}

    def test_parallel_same_report(self, capsys):
        _, a, _ = run(capsys, "analyze", "--inline", "x^4;x*y^3;y^4")
        _, b, _ = run(capsys, "analyze", "--inline", "x^4;x*y^3;y^4", "--jobs", "2")
        strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "timings"}  # noqa: E731
        assert strip(a) == strip(b)


class TestCorpus:
    def test_empty(self):
        with pytest.raises(ValueError, match="empty corpus"):
            corpus_runner([])

    def test_empty_exit(self, capsys, tmp_path):
        spec = tmp_path / "c.json"
        spec.write_text("[]")
        code, _, err = run(capsys, "corpus", "--spec", str(spec))
        assert code == 2 and "empty corpus" in err

    def test_failures_do_not_abort(self):
        out = corpus_runner([{"ideal": ["x^2", "x*y", "x^2+x*y"]}, {"ideal": ["x^2", "x*y", "y^2"]}])
        assert out["summary"]["total"] == 2 and out["summary"]["passed"] == 1
        assert not out["runs"][0]["ok"] and out["runs"][1]["ok"]

    def test_deterministic(self):
        entries = [{"random": "mu=1,d=4,seed=5"}, {"random": {"mu": 2, "d": 4, "seed": 1}}]
        a = corpus_runner(entries)
        b = corpus_runner(entries, jobs=2)
        assert a == b and a["summary"]["passed"] == 2

    def test_bundled_corpus(self, capsys):
        from importlib.resources import files
        spec = files("reesdmod") / "data" / "monomial_corpus.json"
        code, out, _ = run(capsys, "corpus", "--spec", str(spec))
        summary = json.loads(out)["summary"]
        assert code == 0 and summary["total"] == summary["passed"] == 9

    def test_jobs_env(self, monkeypatch):
        monkeypatch.setenv("REES_DMOD_JOBS", "3")
        assert effective_jobs(1) == 3
        monkeypatch.setenv("REES_DMOD_JOBS", "many")
        with pytest.raises(ValueError):
            effective_jobs(1)
        monkeypatch.delenv("REES_DMOD_JOBS")
        assert effective_jobs(0) == 1
