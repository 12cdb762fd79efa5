import numpy as np
import pytest

from qhull.finite_algebra import Submodule, field, matrix_ring, module_from_action, zmod
from qhull.harness import row_module


@pytest.fixture(scope="session")
def t2():
    return matrix_ring(field(2), 2, upper=True, name="T2(F2)")


@pytest.fixture(scope="session")
def m2():
    return matrix_ring(field(2), 2, name="Mat2(F2)")


@pytest.fixture(scope="session")
def column(t2):
    """(0 0;F F): row vectors (a, b) under right multiplication by T2(F2)."""
    return row_module(t2, name="(0 0;F F)")


@pytest.fixture(scope="session")
def corner(column):
    """(0 0;0 F) as a module of its own, with its inclusion into (0 0;F F)."""
    N = corner_sub(column)
    return N.to_module()


def corner_sub(column):
    # row (0, 1) has index 1 in lexicographic order
    return Submodule.from_members(column, [0, 1])


@pytest.fixture(scope="session")
def z4():
    return zmod(4)


@pytest.fixture(scope="session")
def z2_over_z4(z4):
    """Z/2 with Z/4 acting by reduction."""
    act = np.array([[(m * r) % 2 for r in range(4)] for m in range(2)])
    return module_from_action(z4, [[0, 1], [1, 0]], act, name="Z/2")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
