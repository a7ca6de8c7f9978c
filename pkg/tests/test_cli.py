import csv
import io
import json

import pytest

from bhconst.cli import EXIT_CACHE, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_csv(capsys):
    code, out, err = run(capsys, "constants", "--max", "30", "--format", "csv", "--places", "6")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 30 and rows[25]["m"] == "26" and rows[25]["value"] == "5.227712"
    assert "improved-count: 5" in err


def test_compare_markdown_layout(capsys):
    code, out, err = run(capsys, "compare", "--min", "26", "--max", "29")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "| m | C_m | P_m | C_m-P_m | improved | argmin_k | standard_k |"
    assert lines[2].startswith("| 26 | 5.228257 | 5.227712 |")


def test_compare_complex_jsonl(capsys):
    code, out, err = run(capsys, "compare", "--field", "complex", "--max", "40", "--format", "jsonl")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(rows) == 39 and not any(r["improved"] for r in rows)
    assert "improved-count: 0" in err


def test_output_is_deterministic(capsys):
    a = run(capsys, "closed-forms", "--max", "20", "--k0", "3", "--format", "csv")
    b = run(capsys, "closed-forms", "--max", "20", "--k0", "3", "--format", "csv")
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a[1])))
    assert rows[0]["n"] == "2" and rows[-1]["best_family"]


def test_gap(capsys):
    code, out, _ = run(capsys, "gap", "--doublings", "50", "--format", "jsonl")
    row = json.loads(out)
    assert code == 0 and float(row["gap_lower_bound"]) > 3450


def test_verify_files_and_random(capsys, tmp_path):
    f = tmp_path / "k.txt"
    f.write_text("2 2 real\n1 1 1 -1\n")
    code, out, err = run(capsys, "verify", str(f), "--random", "2", "--seed", "4", "--format", "jsonl")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(rows) == 3
    assert rows[0]["ratio"].startswith("1.41421356237") and rows[0]["sup_exact"]
    assert all(r["ok"] for r in rows)
    assert "seed=4" in err and "PCG64" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["constants", "--digits", "5"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == EXIT_USAGE
    assert main(["verify"]) == EXIT_USAGE
    assert main(["constants", "--strategy", "jseq", "--max", "5"]) == EXIT_USAGE


def test_cache_flow(capsys, tmp_path):
    cache = tmp_path / "c.jsonl"
    code, first, _ = run(capsys, "constants", "--max", "20", "--cache", str(cache), "--format", "csv")
    assert code == 0 and cache.exists()
    code, again, _ = run(capsys, "constants", "--max", "20", "--cache", str(cache), "--format", "csv")
    assert code == 0 and again == first
    code, _, _ = run(capsys, "constants", "--max", "30", "--cache", str(cache))
    assert code == 0 and len(cache.read_text().splitlines()) == 31
    # stale: cached precision below the request
    code, _, err = run(capsys, "constants", "--max", "10", "--cache", str(cache), "--digits", "120")
    assert code == EXIT_CACHE and "120" in err
    # extending at a different precision would mix digits
    before = cache.read_bytes()
    code, _, err = run(capsys, "constants", "--max", "40", "--cache", str(cache), "--digits", "60")
    assert code == EXIT_CACHE and cache.read_bytes() == before
    cache.write_text("garbage\n")
    code, _, _ = run(capsys, "constants", "--max", "5", "--cache", str(cache))
    assert code == EXIT_CACHE


def test_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BHCONST_CACHE_DIR", str(tmp_path))
    code, _, _ = run(capsys, "constants", "--max", "8", "--strategy", "recursive", "--field", "complex")
    assert code == 0 and (tmp_path / "complex-recursive-d100.jsonl").exists()


def test_output_file(capsys, tmp_path):
    out = tmp_path / "o.md"
    code, stdout, _ = run(capsys, "constants", "--max", "3", "-o", str(out))
    assert code == 0 and stdout == "" and out.read_text().startswith("| m | value | argmin_k |")


def test_full_range_diagnostic(capsys):
    code, _, err = run(capsys, "constants", "--max", "60", "--full-range-k")
    assert code == 0 and "half-range-losses: 0" in err
