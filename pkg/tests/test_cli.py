import json

import pytest

from classtower.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_ok(capsys):
    code, out, _ = run(capsys, "classify", "--p1", "5", "--p2", "13")
    assert code == 0
    assert "q = 2" in out and "coclass 3" in out
    assert "77 checks passed" in out


def test_classify_rejects_bad_prime(capsys):
    code, _, err = run(capsys, "classify", "--p1", "5", "--p2", "17")
    assert code == 2
    assert "mod 8" in err
    code, _, err = run(capsys, "classify", "--p1", "5", "--p2", "21")
    assert code == 2
    assert "not prime" in err


def test_classify_json_roundtrip(capsys):
    code, out, _ = run(capsys, "classify", "--p1", "5", "--p2", "37", "--json")
    assert code == 0
    payload = json.loads(out)
    # canonical serialization: parse + re-dump is byte-identical
    assert json.dumps(payload, sort_keys=True, separators=(",", ":")) == out.strip()
    assert payload["group"]["cl2_K3"] == [4, 8]
    assert payload["invariants"] == {
        "legendre": -1, "pi": -1, "B": -1, "m": 3, "n": 1, "q": 1,
        "norm_eps_r": -1, "psi": "tau-sigma",
    }
    assert payload["cross_validation"]["passed"] is True
    assert payload["K"]["K4"]["cl2"] == [2, 4]
    assert payload["L"]["L1"]["kernel_size"] == 8


def test_verify_fixtures_table4(capsys):
    code, out, _ = run(capsys, "verify-fixtures", "--table", "4")
    assert code == 0
    assert "8/8 rows pass" in out


def test_verify_fixtures_filter(capsys):
    code, out, _ = run(capsys, "verify-fixtures", "--filter", "130")
    assert code == 0
    assert "3/3 rows pass" in out
    code, out, _ = run(capsys, "verify-fixtures", "--filter", "99")
    assert code == 0
    assert "0 rows" in out


def test_verify_fixtures_mismatch_exit_code(capsys, tmp_path, monkeypatch):
    import importlib.resources as resources

    doc = json.loads(
        resources.files("classtower").joinpath("data/fixtures_v1.json").read_text()
    )
    doc["tables"]["4"]["rows"][0]["m"] = 7
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    monkeypatch.setenv("CLASSTOWER_FIXTURES", str(bad))
    code, out, _ = run(capsys, "verify-fixtures", "--table", "4")
    assert code == 4
    assert "FAIL" in out


def test_verify_fixtures_corrupt_file(capsys, tmp_path, monkeypatch):
    bad = tmp_path / "corrupt.json"
    bad.write_text("{not json")
    monkeypatch.setenv("CLASSTOWER_FIXTURES", str(bad))
    code, _, err = run(capsys, "verify-fixtures")
    assert code == 2
    assert "fixture error" in err


def test_group_command(capsys):
    code, out, _ = run(capsys, "group", "--m", "3", "--n", "1", "--q", "1",
                       "--psi", "tau-sigma")
    assert code == 0
    assert "order 64" in out and "coclass 3" in out
    code, out, _ = run(capsys, "group", "--m", "2", "--n", "1", "--q", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 64
    assert payload["derived_type"] == [2, 4]


def test_group_rejections(capsys):
    code, _, err = run(capsys, "group", "--m", "1", "--n", "1", "--q", "1")
    assert code == 2 and "m >= 2" in err
    # m = 2, n = 1, q = 1 is not an exponent pattern any pair realizes
    code, _, err = run(capsys, "group", "--m", "2", "--n", "1", "--q", "1")
    assert code == 2 and "--force" in err
    code, out, _ = run(capsys, "group", "--m", "2", "--n", "1", "--q", "1", "--force")
    assert code == 0


def test_group_with_symbols(capsys):
    code, out, _ = run(
        capsys, "group", "--m", "2", "--n", "1", "--q", "2",
        "--legendre", "-1", "--pi", "-1", "--b", "1", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["fields"]["L7"] == [4, 4]
    assert payload["fields"]["K5"] == [2, 2, 2]
    # inconsistent symbol tuple for legendre = -1
    code, _, err = run(
        capsys, "group", "--m", "2", "--n", "1", "--q", "2",
        "--legendre", "-1", "--pi", "-1", "--b", "-1",
    )
    assert code == 2


def test_scan_bounds(capsys):
    code, _, err = run(capsys, "scan", "--max", "12")
    assert code == 2
    assert "13" in err


def test_scan_small(capsys):
    code, out, _ = run(capsys, "scan", "--max", "100", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["pairs"] == 15
    assert all(v == 0 for v in payload["property_failures"].values())


def test_scan_jobs_deterministic(capsys):
    code1, out1, _ = run(capsys, "scan", "--max", "80", "--json")
    code2, out2, _ = run(capsys, "scan", "--max", "80", "--jobs", "2", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
