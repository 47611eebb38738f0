"""Batch verification over ranges of primes: rows, reports and the class-group cache."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from sympy import primerange

from . import __version__
from .eisenstein import OMEGA, is_cube_mod_p
from .errors import EffortExhausted, PureCubicError
from .pipelines import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    CaseLabel,
    Certificate,
    classify,
    verify_A_M,
    verify_main,
    verify_norm_equation_criterion,
    verify_theorem2,
)
from .symbols import wild_symbol

log = logging.getLogger(__name__)

SCHEMA = "purecubic-report"
SCHEMA_VERSION = 1
CSV_COLUMNS = ("p", "p_mod_9", "cube3", "case", "hF", "AF", "AK", "AM_cert", "thm2", "norm_eq", "verdict")


@dataclass(frozen=True)
class ScanConfig:
    min_p: int = 5
    max_p: int = 200
    cases: tuple[str, ...] = ()
    with_class_groups: bool = False
    with_AK: bool = False
    precision: int = 6
    effort: str = "desk"
    seed: int = 0
    jobs: int = 1
    cache_dir: str | None = None

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["cases"] = list(self.cases)
        d.pop("jobs")  # output does not depend on parallelism
        d.pop("cache_dir")
        return d


# -- cache ---------------------------------------------------------------------

class ClassGroupCache:
    """One JSON file per field; hits are checked against a freshly computed discriminant."""

    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def descriptor(kind: str, p: int) -> str:
        return f"{kind}:{p}"

    @staticmethod
    def key(descriptor: str, effort: str, seed: int) -> str:
        raw = f"{descriptor}|{effort}|{seed}|{__version__}"
        return hashlib.sha256(raw.encode()).hexdigest()[:20]

    def path(self, key: str) -> Path:
        assert self.dir is not None
        return self.dir / f"{key}.json"

    def entries(self) -> list[Path]:
        return sorted(self.dir.glob("*.json")) if self.dir else []

    def load(self, key: str) -> dict | None:
        if not self.dir:
            return None
        path = self.path(key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("evicting unreadable cache entry %s: %s", path, exc)
            path.unlink(missing_ok=True)
            return None

    def store(self, key: str, entry: dict) -> None:
        if not self.dir:
            return
        path = self.path(key)
        tmp = path.with_suffix(".tmp")
        try:
            tmp.write_text(json.dumps(entry, sort_keys=True, indent=1))
            tmp.replace(path)
        except OSError as exc:
            raise OSError(f"cannot write cache entry {path}: {exc}") from exc

    def evict(self, key: str) -> None:
        if self.dir:
            self.path(key).unlink(missing_ok=True)

    def clear(self) -> int:
        n = 0
        for path in self.entries():
            path.unlink()
            n += 1
        return n


def _order_for(kind: str, p: int):
    from .orders import closure_order, pure_cubic_order

    return pure_cubic_order(p) if kind == "F" else closure_order(p)


def compute_class_data(kind: str, p: int, effort: str, seed: int) -> dict:
    from .orders import class_group, closure_automorphisms

    o = _order_for(kind, p)
    if kind == "F":
        cg = class_group(o, effort, seed)
    else:
        cg = class_group(o, effort, seed, automorphisms=closure_automorphisms(p), fb_bound=150)
    return {
        "descriptor": ClassGroupCache.descriptor(kind, p),
        "engine_version": __version__,
        "seed": seed,
        "effort": effort,
        "discriminant": int(o.discriminant),
        "invariants": list(cg.invariants),
        "class_number": cg.class_number,
        "certified": cg.certified,
    }


def cached_class_data(
    cache: ClassGroupCache, kind: str, p: int, effort: str, seed: int, write: bool = True
) -> tuple[dict, bool]:
    """(entry, hit).  With ``write=False`` a fresh entry is returned but not stored."""
    desc = ClassGroupCache.descriptor(kind, p)
    key = ClassGroupCache.key(desc, effort, seed)
    entry = cache.load(key)
    if entry is not None:
        if _entry_valid(entry, kind, p):
            return entry, True
        log.warning("cache entry for %s failed validation; recomputing", desc)
        cache.evict(key)
    entry = compute_class_data(kind, p, effort, seed)
    if write:
        cache.store(key, entry)
    return entry, False


def _entry_valid(entry: dict, kind: str, p: int) -> bool:
    try:
        ok = entry["descriptor"] == ClassGroupCache.descriptor(kind, p)
        ok = ok and int(entry["discriminant"]) == int(_order_for(kind, p).discriminant)
        inv = entry["invariants"]
        prod = 1
        for d in inv:
            prod *= int(d)
        ok = ok and prod == int(entry["class_number"])
        ok = ok and all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
        return bool(ok)
    except (KeyError, TypeError, ValueError):
        return False


def verify_cache(cache: ClassGroupCache) -> list[dict]:
    """Re-validate every entry; broken ones are evicted and recomputed."""
    report = []
    for path in cache.entries():
        status = "ok"
        try:
            entry = json.loads(path.read_text())
            kind, p = entry["descriptor"].split(":")
            p = int(p)
            effort, seed = entry["effort"], int(entry["seed"])
        except (OSError, json.JSONDecodeError, KeyError, ValueError, AttributeError):
            path.unlink(missing_ok=True)
            report.append({"file": path.name, "status": "evicted (unreadable)"})
            continue
        if not _entry_valid(entry, kind, p):
            path.unlink(missing_ok=True)
            fresh = compute_class_data(kind, p, effort, seed)
            cache.store(ClassGroupCache.key(fresh["descriptor"], effort, seed), fresh)
            status = "evicted and recomputed"
        report.append({"file": path.name, "descriptor": entry["descriptor"], "status": status})
    return report


# -- rows ----------------------------------------------------------------------

def _fmt_inv(inv: Sequence[int] | None) -> str:
    if inv is None:
        return ""
    return "[" + ",".join(str(d) for d in inv) + "]"


def _three_part(inv: Sequence[int]) -> list[int]:
    out = []
    for d in inv:
        t = 1
        while d % 3 == 0:
            d //= 3
            t *= 3
        if t > 1:
            out.append(t)
    return out


def scan_row(p: int, config: ScanConfig) -> dict:
    """All pipelines applicable to p; errors are recorded in the row."""
    row: dict = {
        "p": p,
        "p_mod_9": p % 9,
        "cube3": True if p % 3 != 1 else is_cube_mod_p(3, p),
        "case": None,
        "hF": None,
        "AF": None,
        "AK": None,
        "AM_cert": None,
        "thm2": None,
        "norm_eq": "skipped",
        "verdict": PASS,
        "assumptions": [],
        "timings_ms": {},
        "certificates": [],
        "checks": [],
        "errors": [],
        "_new_cache": [],
    }
    verdicts: list[str] = []

    def run(name: str, fn):
        t0 = time.perf_counter()
        try:
            out = fn()
        except EffortExhausted as exc:
            row["errors"].append(f"{name}: effort exhausted: {exc}")
            verdicts.append(INCONCLUSIVE)
            out = None
        except (PureCubicError, AssertionError, ArithmeticError, ValueError) as exc:
            row["errors"].append(f"{name}: {type(exc).__name__}: {exc}")
            verdicts.append(FAIL)
            out = None
        row["timings_ms"][name] = round(1000 * (time.perf_counter() - t0), 1)
        if isinstance(out, Certificate):
            row["certificates"].append(out.as_dict())
            verdicts.append(out.verdict)
            for fact in out.assumed_facts:
                if fact not in row["assumptions"]:
                    row["assumptions"].append(fact)
        return out

    def check(ok: bool, what: str) -> None:
        row["checks"].append({"check": what, "ok": bool(ok)})
        if not ok:
            verdicts.append(FAIL)

    try:
        case = classify(p)
    except PureCubicError as exc:
        row["errors"].append(str(exc))
        row["verdict"] = FAIL
        return row
    row["case"] = case.value
    row["symbols"] = {"w_p_at_lambda": int(wild_symbol(OMEGA, p))}

    if p % 3 == 1:
        cert = run("A_M", lambda: verify_A_M(p))
        if cert is not None:
            row["AM_cert"] = cert.computed_values.get("A_M_G_order")
    if case is CaseLabel.CASE_MAIN:
        t2 = run("theorem2", lambda: verify_theorem2(p, config.precision, effort=config.effort, seed=config.seed))
        if t2 is not None:
            cv = t2.computed_values
            row["thm2"] = f"A_L^G={cv.get('A_L_G_order')};index_S={cv.get('index_S')};beta={cv.get('beta_symbols')}"
            run("main", lambda: verify_main(p, precision=config.precision, theorem2=t2))
    if p % 9 in (4, 7):
        ne = run("norm_eq", lambda: verify_norm_equation_criterion(p, config.effort, config.seed))
        if ne is not None and ne.verdict != INCONCLUSIVE:
            sol = ne.computed_values["result"]["solution"]
            row["norm_eq"] = "witness:" + ",".join(map(str, sol)) if sol else "refuted"
        elif ne is not None:
            row["norm_eq"] = "inconclusive"

    if config.with_class_groups or config.with_AK:
        cache = ClassGroupCache(config.cache_dir)
        data = run("class_group_F", lambda: cached_class_data(cache, "F", p, config.effort, config.seed, write=False))
        if data is not None:
            entry, hit = data
            if not hit:
                row["_new_cache"].append(entry)
            row["hF"] = entry["class_number"]
            row["AF"] = _three_part(entry["invariants"])
            row["AF_certified"] = entry["certified"]
            row["cache_hits"] = row.get("cache_hits", 0) + int(hit)
            check(_af_expectation(case, row["AF"]), f"A_F = {_fmt_inv(row['AF'])} fits {case.value}")
        if config.with_AK:
            data = run("class_group_K", lambda: cached_class_data(cache, "K", p, config.effort, config.seed, write=False))
            if data is not None:
                entry, hit = data
                if not hit:
                    row["_new_cache"].append(entry)
                row["AK"] = _three_part(entry["invariants"])
                row["AK_certified"] = entry["certified"]
                row["cache_hits"] = row.get("cache_hits", 0) + int(hit)
                if case is CaseLabel.CASE_MAIN:
                    check(row["AK"] == [3, 3], "A_K = [3,3]")
                elif case is CaseLabel.CASE1:
                    check(row["AK"] == [], "A_K trivial")
                elif case is CaseLabel.CASE4:
                    check(row["AK"] == [3], "A_K = [3]")
                elif row["AF"] is not None:
                    # 3-rank of A_K is 2 exactly when 9 divides |A_F|
                    rank2 = len(row["AK"]) == 2
                    check(rank2 == (_prod(row["AF"]) % 9 == 0), "rank A_K = 2 iff 9 | |A_F|")

    if FAIL in verdicts:
        row["verdict"] = FAIL
    elif INCONCLUSIVE in verdicts:
        row["verdict"] = INCONCLUSIVE
    return row


def _prod(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _af_expectation(case: CaseLabel, af: list[int]) -> bool:
    if case is CaseLabel.CASE1:
        return af == []
    if case in (CaseLabel.CASE4, CaseLabel.CASE_MAIN):
        return af == [3]
    return len(af) == 1  # cyclic and non-trivial


def primes_in_range(config: ScanConfig) -> list[int]:
    ps = [p for p in primerange(max(config.min_p, 2), config.max_p + 1) if p != 3]
    if config.cases:
        ps = [p for p in ps if classify(p).value in config.cases]
    return ps


def scan(config: ScanConfig, progress_path: str | os.PathLike | None = None) -> list[dict]:
    """One row per prime in range passing the case filter, ascending in p.

    Finished rows are appended to ``progress_path`` (JSON lines) and reused
    when a scan with the same configuration is restarted.
    """
    primes = primes_in_range(config)
    done: dict[int, dict] = {}
    header = {"config": config.as_dict()}
    if progress_path:
        progress_path = Path(progress_path)
        progress_path.parent.mkdir(parents=True, exist_ok=True)
        done = _load_progress(progress_path, header)
        if not done:
            progress_path.write_text(json.dumps(header) + "\n")
    todo = [p for p in primes if p not in done]

    cache = ClassGroupCache(config.cache_dir)

    def keep(row: dict) -> None:
        # workers never write the cache; the parent stores their fresh entries
        for entry in row.pop("_new_cache", []):
            cache.store(ClassGroupCache.key(entry["descriptor"], entry["effort"], entry["seed"]), entry)
        done[row["p"]] = row
        if progress_path:
            with open(progress_path, "a") as fh:
                fh.write(json.dumps(row, sort_keys=True) + "\n")

    if config.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for row in pool.map(scan_row, todo, [config] * len(todo)):
                keep(row)
    else:
        for p in todo:
            keep(scan_row(p, config))
    return [done[p] for p in primes]


def _load_progress(path: Path, header: dict) -> dict[int, dict]:
    if not path.exists():
        return {}
    try:
        lines = path.read_text().splitlines()
        if not lines or json.loads(lines[0]) != header:
            return {}
        rows = [json.loads(line) for line in lines[1:] if line.strip()]
    except json.JSONDecodeError:
        return {}
    return {r["p"]: r for r in rows}


# -- reports -------------------------------------------------------------------

def overall_status(rows: Sequence[dict]) -> int:
    verdicts = {r["verdict"] for r in rows}
    if FAIL in verdicts:
        return 2
    if INCONCLUSIVE in verdicts:
        return 3
    return 0


def csv_record(row: dict) -> dict:
    return {
        "p": str(row["p"]),
        "p_mod_9": str(row["p_mod_9"]),
        "cube3": "true" if row["cube3"] else "false",
        "case": row["case"] or "",
        "hF": "" if row["hF"] is None else str(row["hF"]),
        "AF": _fmt_inv(row["AF"]),
        "AK": _fmt_inv(row["AK"]),
        "AM_cert": "" if row["AM_cert"] is None else str(row["AM_cert"]),
        "thm2": row["thm2"] or "",
        "norm_eq": row["norm_eq"],
        "verdict": row["verdict"],
    }


def write_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in sorted(rows, key=lambda r: r["p"]):
        writer.writerow(csv_record(row))
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    return [dict(r) for r in reader]


def write_json(rows: Sequence[dict], config: ScanConfig | None = None) -> str:
    doc = {
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "engine_version": __version__,
        "config": config.as_dict() if config else None,
        "rows": sorted(rows, key=lambda r: r["p"]),
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def read_json(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA or doc.get("version") != SCHEMA_VERSION:
        raise ValueError(f"not a {SCHEMA} v{SCHEMA_VERSION} document")
    return doc


def write_report(rows: Sequence[dict], fmt: str, out: str | os.PathLike | None, config: ScanConfig | None = None) -> str:
    text = write_csv(rows) if fmt == "csv" else write_json(rows, config)
    if out:
        path = Path(out)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report {path}: {exc}") from exc
    return text


def recheck_row(row: dict) -> bool:
    """Re-run every certificate of a row from its serialized inputs and compare verdicts."""
    from . import pipelines

    for cert in row.get("certificates", []):
        name, p, inputs = cert["pipeline"], cert["p"], cert["inputs"]
        if name == "verify_A_M":
            fresh = pipelines.verify_A_M(p)
        elif name == "verify_theorem2":
            fresh = pipelines.verify_theorem2(p, inputs.get("precision", 6))
        elif name == "verify_main":
            fresh = pipelines.verify_main(p, precision=inputs.get("precision", 6))
        elif name == "verify_norm_equation_criterion":
            fresh = pipelines.verify_norm_equation_criterion(p)
        elif name == "consistency_hK":
            fresh = pipelines.consistency_hK(p, inputs["h_F"], inputs["h_K_3part"])
        elif name == "verify_schoof_symbols":
            fresh = pipelines.verify_schoof_symbols(p)
        else:
            return False
        if fresh.verdict != cert["verdict"] or fresh.as_dict()["computed_values"] != cert["computed_values"]:
            return False
    return True
