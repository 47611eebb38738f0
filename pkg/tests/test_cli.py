import json

import pytest

from purecubic.cli import main
from purecubic.scanner import (
    CSV_COLUMNS,
    ClassGroupCache,
    ScanConfig,
    cached_class_data,
    read_csv,
    read_json,
    scan,
    verify_cache,
    write_csv,
)


def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def test_empty_range(tmp_path, capsys):
    code, out = run(["scan", "--min", "24", "--max", "28", "--jobs", "1", "--cache-dir", str(tmp_path), "--no-figures"], capsys)
    assert code == 0
    assert read_csv(out) == []
    code, out = run(["scan", "--min", "24", "--max", "28", "--format", "json", "--jobs", "1", "--cache-dir", str(tmp_path)], capsys)
    assert code == 0 and read_json(out)["rows"] == []


def test_case1_filter_with_class_groups(tmp_path, capsys):
    code, out = run(
        ["scan", "--min", "5", "--max", "50", "--case", "Case1", "--with-class-groups",
         "--jobs", "1", "--cache-dir", str(tmp_path / "c"), "--no-figures"],
        capsys,
    )
    assert code == 0
    rows = read_csv(out)
    assert [int(r["p"]) for r in rows] == [5, 11, 17, 23, 29, 41, 47]
    assert all(r["AF"] == "[]" and r["case"] == "Case1" and r["verdict"] == "pass" for r in rows)


def test_main_case_filter_and_figures(tmp_path, capsys):
    out = tmp_path / "rep" / "main.csv"
    code, _ = run(
        ["scan", "--min", "5", "--max", "200", "--case", "CaseMain", "--jobs", "2",
         "--cache-dir", str(tmp_path / "c"), "--out", str(out)],
        capsys,
    )
    assert code == 0
    rows = read_csv(out.read_text())
    assert [int(r["p"]) for r in rows] == [61, 67, 103, 151, 193]
    assert all(r["thm2"] and r["verdict"] == "pass" for r in rows)
    assert {r["norm_eq"].split(":")[0] for r in rows} == {"witness"}
    for name in ("main_cases.png", "main_symbols.png"):
        assert (out.parent / name).stat().st_size > 0
    assert not out.with_suffix(".partial.jsonl").exists()


def test_json_row_and_report_roundtrip(tmp_path, capsys):
    js = tmp_path / "r.json"
    code, _ = run(
        ["scan", "--min", "60", "--max", "62", "--with-class-groups", "--format", "json", "--jobs", "1",
         "--cache-dir", str(tmp_path / "c"), "--out", str(js), "--no-figures"],
        capsys,
    )
    assert code == 0
    doc = read_json(js.read_text())
    (row,) = doc["rows"]
    assert row["p"] == 61 and row["case"] == "CaseMain" and row["AF"] == [3]
    assert row["hF"] == 6
    assert any("unramified-splitting" in a for a in row["assumptions"])
    assert doc["config"]["with_class_groups"] is True

    csv_path = tmp_path / "r.csv"
    code, _ = run(["report", str(js), "--recheck", "--out", str(csv_path), "--no-figures"], capsys)
    assert code == 0
    (rec,) = read_csv(csv_path.read_text())
    assert rec["AF"] == "[3]" and rec["verdict"] == "pass"


def test_csv_roundtrip():
    rows = scan(ScanConfig(min_p=5, max_p=40, jobs=1))
    text = write_csv(rows)
    back = read_csv(text)
    assert tuple(back[0]) == CSV_COLUMNS
    assert [int(r["p"]) for r in back] == [r["p"] for r in rows]
    assert write_csv(rows) == text
    with pytest.raises(ValueError):
        read_csv("a,b\n1,2\n")


def test_scan_is_deterministic_across_jobs(tmp_path):
    a = scan(ScanConfig(min_p=5, max_p=80, jobs=1))
    b = scan(ScanConfig(min_p=5, max_p=80, jobs=3))
    assert write_csv(a) == write_csv(b)


def test_resume_from_progress_file(tmp_path):
    progress = tmp_path / "p.partial.jsonl"
    config = ScanConfig(min_p=5, max_p=40, jobs=1)
    first = scan(config, progress)
    assert progress.exists()
    again = scan(config, progress)
    assert write_csv(first) == write_csv(again)


def test_cache_corruption_is_evicted(tmp_path, capsys):
    cache = ClassGroupCache(tmp_path)
    entry, hit = cached_class_data(cache, "F", 7, "desk", 0)
    assert entry["invariants"] == [3] and not hit
    assert cached_class_data(cache, "F", 7, "desk", 0)[1]
    (path,) = cache.entries()
    bad = json.loads(path.read_text())
    bad["invariants"] = [9]
    path.write_text(json.dumps(bad))
    report = verify_cache(cache)
    assert report[0]["status"] == "evicted and recomputed"
    (path,) = cache.entries()
    assert json.loads(path.read_text())["invariants"] == [3]

    path.write_text("{not json")
    entry, hit = cached_class_data(cache, "F", 7, "desk", 0)
    assert entry["invariants"] == [3] and not hit

    code, out = run(["cache", "show", "--cache-dir", str(tmp_path)], capsys)
    assert code == 0 and "F:7" in out
    code, out = run(["cache", "clear", "--cache-dir", str(tmp_path)], capsys)
    assert code == 0 and cache.entries() == []


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "purecubic-report", "version": 1, "config": None,
                               "rows": [{"p": 7, "p_mod_9": 7, "cube3": False, "case": "Case4", "hF": None,
                                         "AF": None, "AK": None, "AM_cert": 1, "thm2": None,
                                         "norm_eq": "refuted", "verdict": "fail", "symbols": None}]}))
    assert main(["report", str(bad), "--no-figures"]) == 2
    capsys.readouterr()
    assert main(["report", str(tmp_path / "missing.json")]) == 1
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["scan", "--precision", "3^2"])
