import json
import shutil

import pytest

from coxsurf.catalog import data_dir
from coxsurf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hj(capsys):
    assert run(capsys, "hj", "2,1,2")[:2] == (0, "0\n")
    assert run(capsys, "hj", "2,x,2")[:2] == (0, "1\n")
    assert run(capsys, "hj", "2,2")[:2] == (0, "3/2\n")


def test_usage_errors(capsys):
    assert run(capsys, "catalog", "NOPE")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "hj", "2,,1")[0] == 2
    assert run(capsys, "contract", "X_6321", "--set", "T99")[0] == 2


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and len(out.strip().splitlines()) == 16
    code, out, _ = run(capsys, "catalog", "X_411")
    assert code == 0 and "validation: ok" in out


def test_generators_json_schema(capsys):
    code, out, _ = run(capsys, "generators", "X_411", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert set(d) == {"surface", "generators", "matrix", "relations", "dimension", "certificate"}
    assert len(d["matrix"]) == 10 and all(len(r) == 15 for r in d["matrix"])
    assert set(d["generators"][0]) == {"label", "kind", "degree"}


def test_relations_json(capsys):
    code, out, _ = run(capsys, "relations", "X_22", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["dimension"] == 12 and d["certificate"] == "equals I(X)"
    assert len(d["relations"]) == 1


def test_relations_without_sections(capsys):
    assert run(capsys, "relations", "X_9111")[0] == 1


def test_curves_and_conics(capsys):
    code, out, _ = run(capsys, "curves", "X_22")
    assert code == 0 and out.startswith("P0 [-1]: Th0.1")
    code, out, _ = run(capsys, "conics", "X_33")
    assert code == 0 and "[generator]" in out


def test_contract(capsys):
    code, out, _ = run(capsys, "contract", "X_6321", "--set", "T10,T12,T14,T1,T2,T3,T7")
    assert code == 0
    assert out.splitlines()[:2] == ["variables: T4 T5 T6 T9 T11 T13 T15 T16 T17", "grading: Z^3 + Z/2"]
    code, out, _ = run(capsys, "contract", "X_22", "--set", "P0", "--format", "json")
    d = json.loads(out)
    assert d["removed"] == ["T13"] and len(d["relations"]) == 1


def test_output_is_deterministic(capsys):
    a = run(capsys, "generators", "X_9111", "--format", "json")[1]
    b = run(capsys, "generators", "X_9111", "--format", "json")[1]
    assert a == b


def test_verify_fast(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fast", "--only", "1,2,7", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["passed"] and [c["criterion"] for c in d["criteria"]] == [1, 2, 7]


def test_corrupted_catalog_is_reported(tmp_path, capsys, monkeypatch):
    root = tmp_path / "data"
    shutil.copytree(data_dir(), root)
    path = root / "surfaces" / "X_22.txt"
    path.write_text(path.read_text().replace("P0 Th0.1 1\n", ""))
    code, out, _ = run(capsys, "--data-dir", str(root), "verify", "--only", "2")
    assert code == 1 and "X_22" in out
    monkeypatch.setenv("COXSURF_DATA", str(root))
    assert run(capsys, "catalog", "X_22")[0] == 1


def test_data_dir_flag_beats_environment(tmp_path, capsys, monkeypatch):
    bundled = str(data_dir())
    monkeypatch.setenv("COXSURF_DATA", str(tmp_path))
    assert run(capsys, "--data-dir", bundled, "catalog", "X_22")[0] == 0
    assert run(capsys, "catalog", "X_22")[0] == 1
    assert run(capsys, "--data-dir", str(tmp_path / "missing"), "catalog")[0] == 2
