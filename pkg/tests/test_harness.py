import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qhull.config import configured
from qhull.errors import UnknownCheck
from qhull.finite_algebra import field, matrix_ring, zmod
from qhull.harness import CHECKS, builtin_catalog, load, parse, report_json, run_suite, write_module, write_ring
from qhull.harness.cli import main
from qhull.harness.textio import FormatError
from qhull.hulls import injective_hull

CATALOG = builtin_catalog()
ALL = [(e, M) for e in CATALOG for M in e.modules]


@pytest.fixture
def t2_file(tmp_path):
    R = matrix_ring(field(2), 2, upper=True).ring
    path = tmp_path / "t2f2.ring"
    path.write_text("# upper triangular 2x2 over F2\n" + write_ring(R, name="R"))
    return str(path)


@pytest.fixture
def z4_file(tmp_path, z2_over_z4):
    path = tmp_path / "z4.ring"
    path.write_text(write_ring(z2_over_z4.ring, name="Z4") + "\n" + write_module(z2_over_z4, name="Z2", ring_name="Z4"))
    return str(path)


# -- text format -------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALL))
def test_text_round_trip(pair):
    entry, M = pair
    text = write_ring(entry.ring, name="R") + write_module(M, name="M", ring_name="R")
    st_ = parse(text)
    R2, M2 = st_.rings["R"], st_.modules["M"]
    assert (R2.add == entry.ring.add).all() and (R2.mul == entry.ring.mul).all() and R2.one == entry.ring.one
    assert (M2.add == M.add).all() and (M2.act == M.act).all()
    assert M2.ring is R2


def test_round_trip_keeps_embedding(z2_over_z4):
    h = injective_hull(z2_over_z4)
    text = write_ring(z2_over_z4.ring, name="Z4") + write_module(h.hull, name="E", ring_name="Z4", embed=h.embedding.table)
    st_ = parse(text)
    assert st_.embeds["E"] == h.embedding.table.tolist()


@pytest.mark.parametrize(
    "text",
    [
        "ring R\norder 2\none 1\nadd\n0 1\n1 0\nmul\n0 0\n",
        "ring R\norder 2\none 1\nadd\n0 1\n1 0\nmul\n0 0\n0 x\n",
        "module M over Nowhere\norder 1\nadd\n0\nact\n0\n",
        "bogus line\n",
    ],
)
def test_malformed_text_is_rejected(text):
    with pytest.raises(FormatError):
        parse(text)


def test_invalid_ring_in_file_raises_algebra_error():
    from qhull.errors import AlgebraError

    bad = "ring R\norder 2\none 0\nadd\n0 1\n1 0\nmul\n0 0\n0 1\n"
    with pytest.raises(AlgebraError):
        parse(bad)


# -- command line ---------------------------------------------------------------------


def test_cli_rational_hull_of_t2(t2_file, capsys):
    assert main(["hull", "--kind", "rational", t2_file, "R"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("module ~E(R) over R\norder 16\n")
    st_ = parse(open(t2_file).read() + out)
    assert st_.modules["~E(R)"].order == 16 and len(st_.embeds["~E(R)"]) == 8


def test_cli_injective_hull_of_z2(z4_file, capsys):
    assert main(["hull", "--kind", "injective", z4_file, "Z2"]) == 0
    assert "order 4" in capsys.readouterr().out


def test_cli_predicates(z4_file, capsys):
    assert main(["predicate", "injective", z4_file, "Z4"]) == 0
    assert main(["predicate", "injective", z4_file, "Z2"]) == 0
    assert main(["predicate", "dense", z4_file, "Z4", "--sub", "0,2"]) == 0
    assert main(["predicate", "reldense", z4_file, "Z4", "--sub", "0,2", "--K", "Z2"]) == 0
    out = capsys.readouterr().out.split("\n")
    assert out[0] == "true" and out[1] == "false" and out[2] == "false"
    assert out[3].startswith("witness ")


def test_cli_qmax(t2_file, capsys):
    assert main(["qmax", t2_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("ring Q(R)\norder 16\n") and "\nembed " in out


def test_cli_check(t2_file, capsys):
    assert main(["check", t2_file]) == 0


def test_cli_missing_file_exits_2(tmp_path, capsys):
    assert main(["hull", "--kind", "rational", str(tmp_path / "missing.ring"), "R"]) == 2


def test_cli_unknown_module_exits_2(t2_file, capsys):
    assert main(["hull", "--kind", "rational", t2_file, "nope"]) == 2


def test_cli_usage_error_exits_2(capsys):
    assert main(["hull", "--kind", "weird", "x", "y"]) == 2
    assert main([]) == 2


def test_cli_unknown_check_exits_2(capsys):
    assert main(["suite", "--checks", "no_such_check"]) == 2


def test_cli_cap_exceeded_exits_3(t2_file, capsys):
    assert main(["--max-module-order", "8", "hull", "--kind", "rational", t2_file, "R"]) == 3


def test_cli_suite_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    rc = main(["suite", "--commutative-only", "--checks", "hull_formulas", "--report", "json", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["summary"]["fail"] == 0 and rep["summary"]["pass"] > 0
    assert set(rep) == {"config", "checks", "summary"}
    assert all(set(r) >= {"name", "instance", "verdict", "millis"} for r in rep["checks"])


def test_cli_suite_reports_failure_with_exit_1(tmp_path, capsys):
    # a structure file holding the quasi-injective module with a non-self-injective End
    from conftest import corner_sub
    from qhull.finite_algebra import direct_sum, quotient_module
    from qhull.harness import row_module

    T = matrix_ring(field(2), 2, upper=True)
    row = row_module(T)
    S1 = quotient_module(row, corner_sub(row)).module
    M = direct_sum([row, S1]).module
    path = tmp_path / "cx.ring"
    path.write_text(write_ring(T.ring, name="T") + write_module(M, name="M", ring_name="T"))
    rc = main(["suite", "--catalog", str(path), "--checks", "end_quotient", "--report", "text"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "fail     end_quotient" in out


def test_installed_entry_point(t2_file):
    proc = subprocess.run(
        [sys.executable, "-m", "qhull.harness.cli", "hull", "--kind", "rational", t2_file, "R"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "order 16" in proc.stdout


# -- suite -------------------------------------------------------------------------


def test_unknown_check_raises():
    with pytest.raises(UnknownCheck):
        run_suite(CATALOG, ["nope"])


def test_empty_catalog_gives_empty_report():
    rep = run_suite([], ["hull_formulas"])
    assert rep["checks"] == [] and rep["summary"] == {"pass": 0, "fail": 0, "skipped": 0}


def test_zero_cap_catalog_is_empty():
    from qhull.config import Config

    assert builtin_catalog(Config(max_module_order=0)) == []


def test_catalog_size_and_axes():
    assert sum(len(e.modules) for e in CATALOG) >= 40
    tags = {t for e in CATALOG for t in e.tags}
    assert {"commutative", "noncommutative", "self-injective", "semisimple"} <= tags


def test_every_check_has_a_statement():
    for c in CHECKS.values():
        assert c.statement and c.scope in {"module", "pair", "ring", "catalog"}


def test_parallel_run_matches_serial():
    cat = builtin_catalog(commutative_only=True)
    names = ["dense_criteria", "hull_sandwich", "sum_density"]
    a = run_suite(cat, names)
    b = run_suite(cat, names, parallelism=4)
    assert report_json(a) == report_json(b)


def test_parallel_workers_see_config():
    cat = builtin_catalog(commutative_only=True)
    with configured(racom_max_hull=1):
        rep = run_suite(cat, ["maximal_dense"], parallelism=3)
    assert rep["config"]["racom_max_hull"] == 1
    assert all(r["verdict"] == "skipped" for r in rep["checks"])


def test_timings_only_when_asked():
    cat = builtin_catalog(commutative_only=True)[:2]
    assert all(r["millis"] is None for r in run_suite(cat, ["hull_sandwich"])["checks"])
    assert all(isinstance(r["millis"], float) for r in run_suite(cat, ["hull_sandwich"], timings=True)["checks"])


def test_crashing_check_is_recorded_as_failure():
    from qhull.harness import register

    @register("always_crashes", "ring", "a deliberately broken check")
    def boom(entry):
        raise RuntimeError("boom")

    try:
        rep = run_suite(CATALOG[:1], ["always_crashes"])
        rec = rep["checks"][0]
        assert rec["verdict"] == "fail" and rec["witness"]["error"] == "RuntimeError"
    finally:
        del CHECKS["always_crashes"]


def test_failure_witness_replays():
    # the one failing check on the builtin catalog, replayed with a direct call
    from qhull.quotient_rings import end_quotient_check

    cat = [e for e in builtin_catalog() if e.ring.name == "T2(F3)"]
    rep = run_suite(cat, ["end_quotient"])
    fails = [r for r in rep["checks"] if r["verdict"] == "fail"]
    assert [r["instance"] for r in fails] == ["T2(F3):R/I1+R/I5"]
    M = next(M for M in cat[0].modules if M.name == "R/I1+R/I5")
    direct = end_quotient_check(M)
    assert direct == fails[0]["witness"]
    assert not direct["matches"]


def test_cache_does_not_change_verdicts(tmp_path, monkeypatch):
    names = ["hull_formulas", "hull_sandwich", "injective_oracle", "rational_completeness"]
    monkeypatch.delenv("QHULL_CACHE", raising=False)
    plain = report_json(run_suite(builtin_catalog(commutative_only=True), names))
    monkeypatch.setenv("QHULL_CACHE", str(tmp_path / "cache"))
    cold = report_json(run_suite(builtin_catalog(commutative_only=True), names))
    assert any(p.suffix == ".json" for p in (tmp_path / "cache").iterdir())
    warm = report_json(run_suite(builtin_catalog(commutative_only=True), names))
    assert plain == cold == warm


def test_corrupt_cache_entry_is_ignored(tmp_path, monkeypatch, z2_over_z4):
    from qhull.harness import cache

    monkeypatch.setenv("QHULL_CACHE", str(tmp_path))
    M = z2_over_z4
    cache.injective_hull_cached(M)
    path = cache._path(cache.key(M, "E"))
    with open(path, "w") as fh:
        fh.write("{not json")
    assert cache.fetch(M, "E") is None
    fresh = builtin_catalog(commutative_only=True)
    Z4 = next(e for e in fresh if e.ring.name == "Z/4")
    res = cache.injective_hull_cached(Z4.modules[1])
    assert res.hull.order == 4
