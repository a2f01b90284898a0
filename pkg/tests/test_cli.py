import json

from garsidelab.cli import (
    EXIT_CAP,
    EXIT_CERTIFICATION,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNSUPPORTED,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_nf(capsys):
    code, out, _ = run(capsys, "nf", "A2", "1 2 1 2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "D^1 | 2"
    assert run(capsys, "nf", "A2", "-2")[1].splitlines()[0] == "D^-1 | 2 1"
    assert run(capsys, "nf", "A2", "")[1].splitlines()[0] == "D^0"
    assert run(capsys, "nf", "A2", "--", "-D")[1].splitlines()[0] == "D^-1"


def test_nf_structured(capsys):
    code, out, _ = run(capsys, "nf", "B3", "1 2 1 2", "--format", "structured")
    rec = json.loads(out)
    assert rec["delta_power"] == 0 and rec["factors"]


def test_parse_error(capsys):
    code, _, err = run(capsys, "nf", "A2", "1 q")
    assert code == EXIT_PARSE
    assert json.loads(err)["error"] == "parse"
    assert run(capsys, "nf", "A2", "7")[0] == EXIT_PARSE


def test_unsupported(capsys):
    code, _, err = run(capsys, "nf", "Q7", "1")
    assert code == EXIT_UNSUPPORTED
    assert run(capsys, "verify-tables", "X9")[0] == EXIT_UNSUPPORTED
    assert run(capsys, "pad", "B3", "commutator", "1 -2", "--N", "2")[0] == EXIT_UNSUPPORTED


def test_rigid(capsys):
    code, out, _ = run(capsys, "rigid", "A2", "1 1")
    assert "rigid=True" in out


def test_pad_pure(capsys):
    code, out, _ = run(capsys, "pad", "A3", "pure", "1 1", "--N", "2", "--format", "structured")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec["product_rigid"] and rec["contains_block"] and rec["constraint_ok"]
    assert rec["label"] == "structural"


def test_verify_tables(capsys):
    code, out, _ = run(capsys, "verify-tables", "B4", "F4")
    assert code == EXIT_OK and "7/7" in out
    code, out, _ = run(capsys, "verify-tables", "H3")
    assert code == EXIT_FAILURE and "FAIL" in out
    code, out, _ = run(capsys, "verify-tables", "H3", "--corrected")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "verify-tables", "A3", "--format", "csv")
    assert out.splitlines()[0].startswith("type,atom")


def test_census_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "census", "A2", "full", "--radius", "8", "--N", "2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 10
    target = tmp_path / "c.csv"
    code, _, _ = run(capsys, "census", "A2", "full", "--radius", "4", "--N", "2", "--out", str(target))
    assert target.read_text().count("\n") == 6
    man = json.loads((tmp_path / "c.csv.manifest.json").read_text())
    assert man["radius"] == 4 and man["N"] == 2


def test_census_reproducible(capsys):
    a = run(capsys, "census", "A2", "pure", "--radius", "3", "--N", "2")[1]
    b = run(capsys, "census", "A2", "pure", "--radius", "3", "--N", "2")[1]
    assert a == b


def test_census_cap(capsys):
    code, _, err = run(capsys, "census", "A2", "full", "--radius", "6", "--N", "2", "--cap", "50")
    assert code == EXIT_CAP
    assert json.loads(err)["error"] == "cap-exceeded"


def test_xa_search(capsys):
    code, out, _ = run(capsys, "xa-search", "A2", "1", "--bound", "2")
    assert code == EXIT_OK and "D^0 | 1 | 1" in out


def test_seed_export_import(capsys, tmp_path):
    path = tmp_path / "seeds.jsonl"
    assert run(capsys, "seed-export", "A2", "B3", "--N", "3", "--out", str(path))[0] == EXIT_OK
    code, out, _ = run(capsys, "seed-import", str(path))
    assert code == EXIT_OK and out.count("ok") == 2
    code, out, _ = run(capsys, "pad", "B3", "full", "1", "--seeds", str(path), "--N", "3")
    assert code == EXIT_OK


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_CAP, EXIT_CERTIFICATION}) == 5
