import json

import pytest

from lodaycheck import cli
from lodaycheck.algebra import split_algebra


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def split2(tmp_path):
    return write(tmp_path / "split2.json", split_algebra(2).to_json())


def verify(tmp_path, *extra):
    return cli.main(["verify", "--out", str(tmp_path / "out"), "--quiet", *extra])


def test_small_campaign_passes(tmp_path):
    code = verify(tmp_path, "--max-index", "3", "--max-level", "1", "--samples", "40")
    assert code == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["schema"] == 1 and report["summary"]["gated_ok"]
    assert (tmp_path / "out" / "report.md").read_text().startswith("# Verification report")


def test_axioms_only_reports_informational_refutation(tmp_path):
    assert verify(tmp_path, "--checks", "axioms", "--samples", "100") == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    off = [o for o in report["outcomes"] if "offdiagonal" in o["name"]]
    assert off and all(o["status"] == "refuted" and not o["gated"] for o in off)
    assert "Axiom fidelity (informational)" in (tmp_path / "out" / "report.md").read_text()


@pytest.mark.parametrize("flags", [["--max-level", "9"], ["--max-index", "0"], ["--samples", "0"],
                                   ["--checks", "axioms,bogus"], ["--tolerance", "0"]])
def test_bad_settings_exit_2(tmp_path, flags, capsys):
    assert verify(tmp_path, *flags) == cli.EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_config_file_and_override(tmp_path):
    cfg = write(tmp_path / "cfg.json", {"max_level": 9, "checks": ["axioms"], "samples": 30})
    assert verify(tmp_path, "--config", cfg) == cli.EXIT_USAGE
    assert verify(tmp_path, "--config", cfg, "--max-level", "1") == cli.EXIT_OK
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["config"]["max_level"] == 1 and report["config"]["samples"] == 30
    bad = write(tmp_path / "bad.json", {"colour": "red"})
    assert verify(tmp_path, "--config", bad) == cli.EXIT_USAGE


def test_gated_failure_exits_1(tmp_path, monkeypatch):
    from lodaycheck.report import CheckOutcome

    monkeypatch.setattr(cli, "run_checks", lambda *a, **k: [CheckOutcome("x", {}, "fail", [{"w": 0}])])
    assert verify(tmp_path) == cli.EXIT_FAILED


def test_internal_error_exits_3(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "run_checks", boom)
    assert verify(tmp_path) == cli.EXIT_INTERNAL


def test_timings_flag(tmp_path):
    verify(tmp_path, "--checks", "axioms", "--samples", "20", "--timings")
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert all("elapsed" in o for o in report["outcomes"])


def test_enumerate(capsys):
    assert cli.main(["loday", "enumerate", "--n", "3", "--m", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6
    assert cli.main(["loday", "enumerate", "--n", "9", "--m", "2"]) == cli.EXIT_USAGE


def test_decompose(capsys):
    assert cli.main(["loday", "decompose", "--surjection", "2,1,1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("permutation") and "merges" in out
    assert cli.main(["loday", "decompose", "--surjection", "1,3"]) == cli.EXIT_USAGE


def test_sigma_star_matrix(split2, capsys):
    assert cli.main(["loday", "sigma-star", "--algebra", split2, "--surjection", "1,1"]) == 0
    rows = [line.split() for line in capsys.readouterr().out.splitlines()]
    assert rows == [["1", "0", "0", "0"], ["0", "0", "0", "1"]]


def test_sigma_star_tensor(split2, tmp_path, capsys):
    t = write(tmp_path / "t.json", {"level": 2, "coeffs": ["1", "2", "3", "1/2"]})
    assert cli.main(["loday", "sigma-star", "--algebra", split2, "--surjection", "1,1", "--tensor", t]) == 0
    assert json.loads(capsys.readouterr().out)["coeffs"] == ["1", "1/2"]


def test_naturality_identity(split2, tmp_path, capsys):
    eta = write(tmp_path / "eta.json", {"induced": [[1, 0], [0, 1]], "max_level": 3})
    assert cli.main(["loday", "naturality", "--eta", eta, "--sigma", "1,2,1", "--algebra", split2]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "pass"


def test_naturality_failure_exits_1(split2, tmp_path, capsys):
    # the sum of coordinates is linear but not multiplicative
    levels = {"1": [["1", "1"]], "2": [["1", "1", "1", "1"]]}
    one = {"dim": 1, "c": [[["1"]]]}
    eta = write(tmp_path / "eta.json", {"levels": levels, "target": one})
    assert cli.main(["loday", "naturality", "--eta", eta, "--sigma", "1,1", "--algebra", split2]) == cli.EXIT_FAILED
    assert json.loads(capsys.readouterr().out)["witness_basis_word"]


def test_malformed_algebra_reports_location(tmp_path, capsys):
    bad = write(tmp_path / "bad.json", {"dim": 2, "c": [[["1", "0"], ["0", "0"]], [["0", "0"], ["0", "x"]]]})
    assert cli.main(["loday", "sigma-star", "--algebra", bad, "--surjection", "1"]) == cli.EXIT_USAGE
    assert "c[1][1][1]" in capsys.readouterr().err
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"dim\": 2,\n")
    assert cli.main(["loday", "sigma-star", "--algebra", str(broken), "--surjection", "1"]) == cli.EXIT_USAGE
    assert "line" in capsys.readouterr().err


def test_plot_writes_svg(tmp_path):
    out = tmp_path / "r.svg"
    assert cli.main(["plot", "--max-index", "2", "--word", "clamp:1,flip:1", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("<svg") and text.count("<polygon") == 2
    assert cli.main(["plot", "--word", "twist:1", "--out", str(out)]) == cli.EXIT_USAGE
