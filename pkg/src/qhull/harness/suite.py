"""Running the registered checks over a catalog and building the report."""

from __future__ import annotations

import contextvars
import json
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from ..config import get_config
from ..errors import CapExceeded, UnknownCheck
from .cache import cache_dir, injective_hull_cached
from .catalog import CatalogEntry
from .checks import CHECKS, Skip


def _plain(x):
    """JSON-friendly copy of a witness."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def pairs(entry: CatalogEntry, limit: int = 6, max_order: int = 64):
    """Pairs (A, B) of non-sum modules of one ring, A listed no later than B."""
    base = [M for M in entry.modules if "+" not in M.name]
    out = []
    for i, A in enumerate(base):
        for B in base[i:]:
            if A.order * B.order <= max_order and len(out) < limit:
                out.append((A, B))
    return out


def _tasks(catalog: Sequence[CatalogEntry], names: Sequence[str]):
    for name in names:
        check = CHECKS[name]
        if check.scope == "catalog":
            yield name, "catalog", (list(catalog),)
            continue
        for entry in catalog:
            if check.scope == "ring":
                yield name, entry.ring.name, (entry,)
            elif check.scope == "module":
                for M in entry.modules:
                    yield name, entry.instance_id(M), (entry, M)
            else:
                for A, B in pairs(entry):
                    yield name, f"{entry.ring.name}:{A.name},{B.name}", (entry, A, B)


def _run_one(name: str, instance: str, args, timings: bool) -> dict:
    start = time.perf_counter()
    rec: dict = {"name": name, "instance": instance}
    try:
        passed, witness = CHECKS[name].fn(*args)
        rec["verdict"] = "pass" if passed else "fail"
        if witness is not None:
            rec["witness"] = _plain(witness)
    except (Skip, CapExceeded) as exc:
        rec["verdict"] = "skipped"
        rec["witness"] = {"reason": str(exc)}
    except Exception as exc:  # a crash is a failure of this check, not of the run
        rec["verdict"] = "fail"
        rec["witness"] = {"error": type(exc).__name__, "message": str(exc)}
    rec["millis"] = round((time.perf_counter() - start) * 1000, 1) if timings else None
    return rec


def _warm_cache(catalog: Sequence[CatalogEntry]) -> None:
    """Install injective hulls from the disk cache (or compute and store them)."""
    for entry in catalog:
        for M in entry.modules:
            try:
                injective_hull_cached(M)
            except CapExceeded:
                pass


def run_suite(
    catalog: Sequence[CatalogEntry],
    checks: Iterable[str] | None = None,
    parallelism: int = 1,
    timings: bool = False,
) -> dict:
    names = list(CHECKS) if checks is None else list(checks)
    for n in names:
        if n not in CHECKS:
            raise UnknownCheck(n)
    tasks = list(_tasks(catalog, names)) if catalog else []
    if cache_dir() is not None:
        _warm_cache(catalog)
    if parallelism > 1:
        ctx = contextvars.copy_context()  # worker threads see the caller's config
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(lambda t: ctx.copy().run(_run_one, *t, timings), tasks))
    else:
        records = [_run_one(*t, timings) for t in tasks]
    for entry in catalog:
        for inst, reason in entry.skipped:
            records.append({"name": "catalog", "instance": inst, "verdict": "skipped", "witness": {"reason": reason}, "millis": None})
    summary = {v: sum(r["verdict"] == v for r in records) for v in ("pass", "fail", "skipped")}
    return {"config": get_config().as_dict(), "checks": records, "summary": summary}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_text(report: dict) -> str:
    lines = []
    for r in report["checks"]:
        extra = f"  {json.dumps(r['witness'], sort_keys=True)}" if r["verdict"] != "pass" and "witness" in r else ""
        ms = f"  {r['millis']}ms" if r.get("millis") is not None else ""
        lines.append(f"{r['verdict']:8s} {r['name']:26s} {r['instance']}{ms}{extra}")
    s = report["summary"]
    lines.append(f"pass {s['pass']}  fail {s['fail']}  skipped {s['skipped']}")
    return "\n".join(lines) + "\n"


def search_continuous_transfer(catalog: Sequence[CatalogEntry]) -> dict:
    """Whether continuity of M passes to ~E(M), instance by instance."""
    from ..hulls import is_continuous, rational_hull
    from .textio import write_module

    records = []
    for entry in catalog:
        for M in entry.modules:
            rec = {"instance": entry.instance_id(M)}
            try:
                cont = is_continuous(M)
                rec["continuous"] = cont
                if cont:
                    X = rational_hull(M).hull
                    rec["hull_order"] = X.order
                    rec["hull_continuous"] = is_continuous(X)
                    if not rec["hull_continuous"]:
                        rec["counterexample"] = write_module(M) + write_module(X)
            except CapExceeded as exc:
                rec["skipped"] = str(exc)
            records.append(rec)
    found = [r["instance"] for r in records if r.get("hull_continuous") is False]
    return {"config": get_config().as_dict(), "instances": records, "counterexamples": found}
