"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

The lines are printed in the pytest terminal summary and also when the file
is run directly with ``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import os
import subprocess
import sys
import time

import numpy as np
import pytest

RESULTS: dict[int, str] = {}

# theorem-replay checks named in criterion 4 (everything but the separate
# endomorphism-ring corollary, which is false in general and has its own check)
REPLAY = [
    "dense_criteria",
    "rel_dense_criteria",
    "dense_lattice",
    "dense_intermediate",
    "annihilator_density",
    "maximal_dense",
    "rational_completeness",
    "unique_extension",
    "omega_embedding",
    "omega_fixes_hull",
    "transfer",
    "radical_annihilator",
    "sum_density_components",
    "sum_density",
    "sum_hull",
    "end_transfer",
    "endomorphism_iso",
    "matrix_quotient",
    "dense_implies_essential",
    "essential_not_dense",
    "rel_dense_not_essential",
    "hull_formulas",
    "hull_sandwich",
    "hull_idempotence",
    "injective_oracle",
    "quotient_ring",
    "singular_simples",
]


@contextlib.contextmanager
def criterion(n: int, what: str, limit: float, spent: float = 0.0):
    """Record PASS/FAIL for criterion n; ``spent`` is time already used in a fixture."""
    start = time.perf_counter() - spent
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        RESULTS[n] = f"criterion {n} FAIL  {what}  ({elapsed:.1f}s)  {type(exc).__name__}: {exc}"
        print(RESULTS[n])
        raise
    RESULTS[n] = f"criterion {n} PASS  {what}  ({elapsed:.1f}s, limit {limit:.0f}s)"
    print(RESULTS[n])


def _t2():
    from qhull.finite_algebra import field, matrix_ring

    return matrix_ring(field(2), 2, upper=True, name="T2(F2)"), matrix_ring(field(2), 2, name="Mat2(F2)")


def test_criterion_1_t2f2_rational_hull_and_qmax(tmp_path):
    with criterion(1, "T2(F2): ~E(R_R) has 16 elements, Q(R) = Mat2(F2), R_R not quasi-continuous, Q quasi-continuous", 5):
        from qhull.harness import parse, write_ring
        from qhull.harness.cli import main
        from qhull.hulls import is_quasi_continuous, rational_hull
        from qhull.quotient_rings import matrix_unit_identification, q_max

        t2, m2 = _t2()
        path = tmp_path / "t2f2.ring"
        path.write_text(write_ring(t2.ring, name="R"))
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert main(["hull", "--kind", "rational", str(path), "R"]) == 0
        out = buf.getvalue()
        hull = parse(path.read_text() + out).modules["~E(R)"]
        assert hull.order == 16

        res = q_max(t2.ring)
        ident = matrix_unit_identification(res, t2, m2)
        assert ident["identified"]
        phi = ident["table"]
        assert (res.Q.mul[np.ix_(phi, phi)] == phi[m2.ring.mul]).all()
        assert (res.Q.add[np.ix_(phi, phi)] == phi[m2.ring.add]).all()

        assert not is_quasi_continuous(t2.ring.regular_module)
        assert is_quasi_continuous(rational_hull(t2.ring.regular_module).hull)


def test_criterion_2_corner_module():
    with criterion(2, "M=(0 0;0 F2): E(M)=~E(M) of order 4, quasi-injective, nonsingular, Omega iso of order-2 rings, M < ~E(M)", 5):
        from qhull.finite_algebra import Submodule
        from qhull.harness import row_module
        from qhull.hulls import injective_hull, is_nonsingular, is_quasi_injective, rational_hull
        from qhull.quotient_rings import omega

        t2, _ = _t2()
        column = row_module(t2)
        M, _ = Submodule.from_members(column, [0, 1]).to_module()
        E = injective_hull(M)
        R = rational_hull(M)
        assert E.hull.order == 4 and R.hull.order == 4
        assert R.inside.is_full and R.injective is E
        assert is_quasi_injective(M) and is_nonsingular(M)
        om = omega(M)
        assert om.source.ring.order == 2 and om.target.ring.order == 2 and om.is_surjective
        assert M.order < R.hull.order


def test_criterion_3_formula_agreement():
    with criterion(3, "rational-hull formulas A-E agree on every builtin catalog module", 120):
        from qhull.harness import builtin_catalog
        from qhull.hulls import rational_formulas

        cat = builtin_catalog()
        n = 0
        for entry in cat:
            for M in entry.modules:
                masks = rational_formulas(M)
                assert set(masks) == set("ABCDE")
                for name, mask in masks.items():
                    assert (mask == masks["C"]).all(), (entry.instance_id(M), name)
                n += 1
        assert n >= 40


@pytest.fixture(scope="module")
def full_report(tmp_path_factory):
    """One CLI run of the whole suite as JSON, with its wall time."""
    from qhull.harness.cli import main

    out = tmp_path_factory.mktemp("suite") / "first.json"
    start = time.perf_counter()
    rc = main(["suite", "--report", "json", "--out", str(out)])
    return rc, out, time.perf_counter() - start


def test_criterion_4_theorem_replay(full_report):
    import json

    rc, out, elapsed = full_report
    with criterion(4, "theorem replay: zero failures over the listed checks", 600, spent=elapsed):
        rep = json.loads(out.read_text())
        ran = {r["name"] for r in rep["checks"]}
        assert set(REPLAY) <= ran
        fails = [r for r in rep["checks"] if r["name"] in REPLAY and r["verdict"] == "fail"]
        assert not fails, fails[:3]
        passes = {r["name"] for r in rep["checks"] if r["verdict"] == "pass"}
        assert set(REPLAY) <= passes
        mq = {r["instance"]: r["verdict"] for r in rep["checks"] if r["name"] == "matrix_quotient"}
        for ring in ("T2(F2)", "Z/4", "Z/2"):
            assert mq[ring] == "pass"
        qi = [r for r in rep["checks"] if r["name"] == "endomorphism_iso"]
        assert sum(r["verdict"] == "pass" for r in qi) >= 40
        # the suite as a whole still exits 1 because of the endomorphism-ring corollary
        others = [r for r in rep["checks"] if r["verdict"] == "fail"]
        assert all(r["name"] == "end_quotient" for r in others)
        assert rc == (1 if others else 0)


def test_criterion_5_micro_oracles():
    with criterion(5, "Z/2 over Z/4: ~E = Z/2 by formula B scan, E = Z/4 by Baer check", 5):
        sys.path.insert(0, os.path.dirname(__file__))
        import oracles
        from qhull.finite_algebra import module_from_action, zmod
        from qhull.hulls import injective_hull, rational_hull

        z4 = zmod(4)
        act = np.array([[(m * r) % 2 for r in range(4)] for m in range(2)])
        M = module_from_action(z4, [[0, 1], [1, 0]], act, name="Z/2")
        inj = injective_hull(M)
        assert inj.hull.order == 4
        assert oracles.baer_injective(z4, inj.hull.add, inj.hull.act)
        assert not oracles.baer_injective(z4, M.add, M.act)
        image = set(int(x) for x in inj.image.members)
        scan = oracles.rational_by_formula_b(inj.hull.act, image)
        assert scan == image and len(scan) == 2
        assert rational_hull(M).hull.order == 2


def test_criterion_6_deterministic_report(full_report, tmp_path):
    rc, first, _ = full_report
    with criterion(6, "suite --report json twice gives byte-identical output", 900):
        second = tmp_path / "second.json"
        proc = subprocess.run(
            [sys.executable, "-m", "qhull.harness.cli", "suite", "--report", "json", "--out", str(second)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == rc, proc.stderr
        assert first.read_bytes() == second.read_bytes()


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    for n in sorted(RESULTS):
        print(RESULTS[n])
    raise SystemExit(code)
