import json

import numpy as np
import pytest

import cyclicpd as cp
from cyclicpd.cli import main, _parse_range


def strip_timestamps(doc):
    return {k: v for k, v in doc.items() if k not in ("started", "elapsed_ms")}


def test_parse_range():
    assert _parse_range("3..6") == [3, 4, 5, 6]
    assert _parse_range("5") == [5]
    assert _parse_range("3,5,7") == [3, 5, 7]


def test_reproduce_all(capsys):
    assert main(["reproduce", "--case", "all"]) == 0
    out = capsys.readouterr().out
    assert "2.6393" in out


def test_reproduce_single_cases():
    assert main(["reproduce", "--case", "shapiro4-eig"]) == 0
    assert main(["reproduce", "--case", "shapiro4-trace"]) == 0


def test_sample_eval_roundtrip(tmp_path, capsys):
    out = tmp_path / "fam.json"
    assert main(["sample", "--n", "2", "--p", "3", "--count", "1", "--seed", "9",
                 "--out", str(out)]) == 0
    doc1 = json.loads(out.read_text())
    assert main(["sample", "--n", "2", "--p", "3", "--count", "1", "--seed", "9",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == doc1  # bit-stable resample

    fam = cp.family_from_dict(doc1)
    capsys.readouterr()
    assert main(["eval", "--family", str(out), "--expr", "margin"]) == 0
    val = json.loads(capsys.readouterr().out)
    assert val == pytest.approx(cp.shapiro_margin(fam), abs=0)


def test_eval_identity_family(tmp_path, capsys):
    fam = cp.CyclicFamily(tuple(cp.make_pd(np.eye(2)) for _ in range(4)))
    path = tmp_path / "id.json"
    cp.save_family(fam, path)
    assert main(["eval", "--family", str(path), "--expr", "Fp"]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx(4.0, abs=1e-12)
    assert main(["eval", "--family", str(path), "--expr", "nesbitt_eigs"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["min_real"] == pytest.approx(4.0, abs=1e-10)
    assert main(["eval", "--family", str(path), "--expr", "bidirectional"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["holds"]


def test_eval_fixture_values(tmp_path, capsys):
    path = tmp_path / "fix.json"
    cp.save_family(cp.counterexample_family(), path)
    assert main(["eval", "--family", str(path), "--expr", "Fp"]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx(5.2786, abs=1e-3)
    assert main(["eval", "--family", str(path), "--expr", "margin"]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx(1.2786, abs=1e-3)


def test_eval_bad_file(tmp_path):
    assert main(["eval", "--family", str(tmp_path / "missing.json"), "--expr", "Fp"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 3, "members": []}')
    assert main(["eval", "--family", str(bad), "--expr", "Fp"]) == 2


def test_sample_bad_params():
    assert main(["sample", "--n", "0", "--p", "3"]) == 2


def test_verify_small_run(tmp_path):
    out = tmp_path / "v.json"
    rc = main(["verify", "--suite", "all", "--dims", "1..2", "--p", "3..4",
               "--trials", "3", "--seed", "7", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "verify"
    assert doc["results"]["unconditional"]["unconditional_failures"] == 0
    assert doc["results"]["identities"]["unconditional_failures"] == 0


def test_verify_conditional_counterexamples_do_not_fail_run(tmp_path):
    out = tmp_path / "c.json"
    rc = main(["verify", "--suite", "conditional", "--dims", "1", "--p", "14",
               "--trials", "50", "--seed", "3", "--field", "real", "--out", str(out)])
    assert rc == 0  # events, if any, are reported rather than failing the run


def test_verify_bad_range():
    assert main(["verify", "--dims", "oops", "--trials", "1"]) == 2


def test_manifest_replay_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "unconditional", "--dims", "1..2", "--p", "3",
            "--trials", "2", "--seed", "1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    da = strip_timestamps(json.loads(a.read_text()))
    db = strip_timestamps(json.loads(b.read_text()))
    assert da == db


def test_search_cli_and_replay(tmp_path, capsys):
    out = tmp_path / "s.json"
    rc = main(["search", "--p", "4", "--n", "2", "--restarts", "3",
               "--max-iters", "100", "--seed", "5", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    res = doc["results"]
    fam = cp.family_from_dict(res["best_family"])
    assert cp.shapiro_margin(fam) == pytest.approx(res["best_margin"], abs=1e-9)
    assert res["best_margin"] >= -1e-9  # p=4 is a theorem

    out2 = tmp_path / "s2.json"
    rc = main(["search", "--p", "4", "--n", "2", "--restarts", "3",
               "--max-iters", "100", "--seed", "5", "--out", str(out2)])
    assert rc == 0
    assert strip_timestamps(json.loads(out.read_text())) == strip_timestamps(
        json.loads(out2.read_text()))


def test_search_bad_config():
    assert main(["search", "--p", "2"]) == 2
