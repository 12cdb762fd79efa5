import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import corner_sub
from qhull.config import configured
from qhull.density import is_dense, is_essential
from qhull.errors import PreconditionFailed
from qhull.finite_algebra import (
    ModuleHom,
    Submodule,
    direct_sum,
    end_ring,
    enumerate_submodules,
    identity_hom,
    module_from_action,
    quotient_module,
    zero_hom,
    zmod,
)
from qhull.harness import builtin_catalog, row_module
from qhull.hulls import (
    baer_failure,
    direct_sum_hull_check,
    end_of_hull,
    extend_hom,
    injective_hull,
    is_continuous,
    is_extending,
    is_injective,
    is_nonsingular,
    is_polyform,
    is_quasi_continuous,
    is_quasi_injective,
    is_rationally_complete,
    quasi_injective_hull,
    radical_annihilator,
    rational_completeness_criteria,
    rational_formulas,
    rational_hull,
)

CATALOG = builtin_catalog()
ALL = [(e, M) for e in CATALOG for M in e.modules]
SMALL = [(e, M) for e, M in ALL if M.order <= 16]
# rings small enough for the all-subsets ideal oracle
BAER = [(e, M) for e, M in ALL if e.ring.order <= 16 and M.order <= 16]


def ids(x):
    return getattr(x, "name", "")


def mset(S):
    return set(int(x) for x in S.members)


@pytest.fixture(scope="module")
def semisimple_pair():
    F = zmod(2)
    return direct_sum([F.regular_module, F.regular_module]).module


# -- injectivity and E(M) ---------------------------------------------------


def test_injective_examples(z4, z2_over_z4, t2):
    assert is_injective(z4.regular_module)
    assert not is_injective(z2_over_z4)
    ideal = baer_failure(z2_over_z4)
    assert mset(ideal) == {0, 2}
    # 2 -> 1 is linear on the ideal but no m in Z/2 has m.2 = 1
    assert not any(int(z2_over_z4.act[m, 2]) == 1 for m in range(2))
    E = rational_hull(t2.ring.regular_module).hull
    assert E.order == 16 and is_injective(E)


@pytest.mark.parametrize("entry,M", BAER, ids=ids)
def test_baer_predicate_matches_oracle(entry, M):
    assert is_injective(M) == oracles.baer_injective(entry.ring, M.add, M.act)


def test_injective_hull_examples(z4, z2_over_z4, corner):
    h = injective_hull(z2_over_z4)
    assert h.hull.order == 4 and is_injective(h.hull)
    assert oracles.baer_injective(z4, h.hull.add, h.hull.act)
    h = injective_hull(z4.regular_module)
    assert h.hull.order == 4 and h.embedding.table.tolist() == [0, 1, 2, 3]
    assert injective_hull(corner[0]).hull.order == 4


@pytest.mark.parametrize("entry,M", ALL, ids=ids)
def test_injective_hull_invariants(entry, M):
    h = injective_hull(M)
    assert h.kind == "injective"
    assert len(set(h.embedding.table.tolist())) == M.order
    h.embedding.check()
    assert oracles.is_essential(h.hull.add, h.hull.act, mset(h.image))
    assert is_injective(h.hull)
    # idempotence
    again = injective_hull(h.hull)
    assert again.hull.order == h.hull.order
    # injective iff the hull adds nothing
    assert is_injective(M) == (h.hull.order == M.order)


@pytest.mark.parametrize("entry,M", [p for p in BAER if p[1].order <= 8], ids=ids)
def test_injective_hull_passes_baer_oracle(entry, M):
    E = injective_hull(M).hull
    if E.order <= 16:
        assert oracles.baer_injective(entry.ring, E.add, E.act)


def test_injective_hull_is_deterministic(t2):
    a = injective_hull(row_module(t2))
    b = injective_hull(row_module(t2))
    assert (a.hull.add == b.hull.add).all() and (a.hull.act == b.hull.act).all()
    assert (a.embedding.table == b.embedding.table).all()


# -- rational hull ------------------------------------------------------------


def test_rational_hull_examples(z4, z2_over_z4, t2):
    assert rational_hull(z4.regular_module).hull.order == 4
    assert rational_hull(t2.ring.regular_module).hull.order == 16
    h = rational_hull(z2_over_z4)
    assert h.hull.order == 2


def test_rational_hull_of_z2_over_z4_by_formula_b(z2_over_z4):
    inj = injective_hull(z2_over_z4)
    oracle = oracles.rational_by_formula_b(inj.hull.act, mset(inj.image))
    assert oracle == mset(inj.image)
    assert mset(rational_hull(z2_over_z4).inside) == oracle


@pytest.mark.parametrize("entry,M", ALL, ids=ids)
def test_rational_formulas_agree(entry, M):
    masks = rational_formulas(M)
    ref = masks["C"]
    for name, mask in masks.items():
        assert (mask == ref).all(), name


@pytest.mark.parametrize("entry,M", SMALL, ids=ids)
def test_formula_b_oracle(entry, M):
    inj = injective_hull(M)
    oracle = oracles.rational_by_formula_b(inj.hull.act, mset(inj.image))
    assert mset(rational_hull(M).inside) == oracle


@pytest.mark.parametrize("entry,M", ALL, ids=ids)
def test_rational_hull_sandwich_and_idempotence(entry, M):
    h = rational_hull(M)
    assert h.image.order == M.order
    assert is_dense(h.image).answer
    assert h.inside <= h.injective.hull.full()
    assert h.injective.image <= h.inside
    assert is_essential(h.injective.image).answer
    assert is_rationally_complete(h.hull)
    assert rational_hull(h.hull).hull.order == h.hull.order


@pytest.mark.parametrize("entry,M", [p for p in SMALL if p[1].order <= 8], ids=ids)
def test_rational_hull_is_the_largest_dense_intermediate(entry, M):
    h = rational_hull(M)
    E = h.injective.hull
    if E.order > 64:
        pytest.skip("hull too large for intermediate enumeration")
    img = h.injective.image
    for V in enumerate_submodules(E):
        if not img <= V:
            continue
        Vm, inc = V.to_module()
        inner = Submodule(Vm, img.mask[inc.table])
        assert is_dense(inner).answer == (V <= h.inside)


@pytest.mark.parametrize("entry,M", [p for p in SMALL if p[1].order <= 8], ids=ids)
def test_rational_completeness_criteria_agree(entry, M):
    crit = rational_completeness_criteria(M)
    assert len(set(crit.values())) == 1
    assert crit["a"] == is_rationally_complete(M)


def test_rationally_complete_examples(z4, z2_over_z4, t2):
    assert is_rationally_complete(z4.regular_module)
    assert not is_rationally_complete(t2.ring.regular_module)
    assert is_rationally_complete(z2_over_z4)


def test_debug_mode_crosschecks_every_formula(t2, z2_over_z4):
    with configured(debug_crosscheck=True):
        assert rational_hull(t2.ring.regular_module).hull.order == 16
        assert rational_hull(z2_over_z4).hull.order == 2


# -- quasi-injective hull and module predicates -----------------------------------


def extends_from_every_submodule(M):
    """Oracle for quasi-injectivity: every map N -> M from a submodule extends to M."""
    ends = [tuple(f[x] for x in range(M.order)) for f in oracles.homs(M.add, M.act, M.add, M.act)]
    for N in oracles.all_submodules(M.add, M.act):
        for f in oracles.homs(M.add, M.act, M.add, M.act, domain=N):
            if not any(all(g[x] == f[x] for x in N) for g in ends):
                return False
    return True


def test_quasi_injective_hull_examples(corner, z4, z2_over_z4):
    assert quasi_injective_hull(corner[0]).hull.order == 2
    assert quasi_injective_hull(z4.regular_module).hull.order == 4
    assert quasi_injective_hull(z2_over_z4).hull.order == 2


@pytest.mark.parametrize("entry,M", [p for p in SMALL if p[1].order <= 8], ids=ids)
def test_quasi_injective_matches_extension_oracle(entry, M):
    assert is_quasi_injective(M) == extends_from_every_submodule(M)
    Q = quasi_injective_hull(M).hull
    assert is_quasi_injective(Q)


def test_predicate_examples(t2, corner, z2_over_z4, semisimple_pair):
    assert is_quasi_injective(corner[0])
    assert is_nonsingular(corner[0])
    assert not is_quasi_continuous(t2.ring.regular_module)
    assert not is_nonsingular(z2_over_z4)
    for pred in (is_quasi_injective, is_quasi_continuous, is_extending, is_continuous, is_polyform):
        assert pred(semisimple_pair)


def test_modules_over_semisimple_rings_are_polyform():
    for e in CATALOG:
        if "semisimple" in e.tags or "field" in e.tags:
            for M in e.modules:
                assert is_polyform(M)


@pytest.mark.parametrize("entry,M", ALL, ids=ids)
def test_transfer_to_rational_hull(entry, M):
    H = rational_hull(M).hull
    if is_quasi_injective(M):
        assert is_quasi_injective(H)
    if is_quasi_continuous(M):
        assert is_quasi_continuous(H)
    if H.order <= 64 and is_extending(M):
        assert is_extending(H)
    assert is_polyform(M) == (is_polyform(H) and is_quasi_injective(H))


@pytest.mark.parametrize("entry,M", ALL, ids=ids)
def test_injective_iff_hull_embedding_surjective(entry, M):
    h = injective_hull(M)
    assert is_injective(M) == h.embedding.is_surjective


@pytest.mark.parametrize("entry,M", ALL, ids=ids)
def test_radical_annihilator_lies_in_rational_hull(entry, M):
    T = end_of_hull(M)
    E = injective_hull(M).hull
    for a in T.jacobson:
        ker = Submodule(E, a == 0)
        assert is_essential(ker).answer
    assert radical_annihilator(M) <= rational_hull(M).inside


# -- unique extension ----------------------------------------------------------


def test_extend_identity_on_corner(column):
    N = corner_sub(column)
    Nm, inc = N.to_module()
    ext = extend_hom(N, Nm, identity_hom(Nm))
    H = rational_hull(Nm)
    assert H.hull.order == 4
    # the extension is injective, so it identifies (0 0;F F) with ~E(N)
    assert len(set(ext.table.tolist())) == 4


def test_extend_zero_map(column):
    N = corner_sub(column)
    Nm, _ = N.to_module()
    ext = extend_hom(N, Nm, zero_hom(Nm, Nm))
    assert (ext.table == 0).all()


def test_extend_requires_density(z4, z2_over_z4):
    M = z4.regular_module
    N = Submodule.from_members(M, [0, 2])
    Nm, _ = N.to_module()
    with pytest.raises(PreconditionFailed):
        extend_hom(N, z2_over_z4, zero_hom(Nm, z2_over_z4))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([p for p in SMALL if p[1].order <= 8]), st.data())
def test_extensions_restrict_correctly(pair, data):
    from qhull.density import is_rel_dense
    from qhull.finite_algebra import hom_group

    entry, M = pair
    K = data.draw(st.sampled_from([X for X in entry.modules if X.order <= 8]))
    dense = [N for N in enumerate_submodules(M) if is_rel_dense(N, K).answer]
    N = data.draw(st.sampled_from(dense))
    Nm, inc = N.to_module()
    tabs = hom_group(Nm, K).tables()
    phi = ModuleHom(Nm, K, tabs[data.draw(st.integers(0, len(tabs) - 1))])
    ext = extend_hom(N, K, phi)
    h = rational_hull(K)
    assert (ext.table[inc.table] == h.embedding.table[phi.table]).all()


# -- direct sums ---------------------------------------------------------------


def test_direct_sum_of_complete_modules(z4, z2_over_z4):
    rep = direct_sum_hull_check([z4.regular_module, z2_over_z4])
    assert rep["all_complete"] and rep["sum_complete"] and rep["equal"]
    assert rep["contained"] and rep["biconditional"]


def test_direct_sum_pairwise_table_t2(t2, corner):
    rep = direct_sum_hull_check([t2.ring.regular_module, corner[0]])
    assert rep["contained"] and rep["biconditional"]
    assert set(rep["pairwise_dense"]) == {(0, 0), (0, 1), (1, 0), (1, 1)}


# -- the quasi-injective endomorphism ring counterexample ---------------------------


def test_quasi_injective_module_whose_endomorphism_ring_is_not_self_injective(t2, column):
    from qhull.quotient_rings import end_quotient_check, q_max, qiiso_check

    S1 = quotient_module(column, corner_sub(column)).module
    M = direct_sum([column, S1]).module
    assert M.order == 8
    assert extends_from_every_submodule(M)
    assert oracles.baer_injective(t2.ring, M.add, M.act)
    End = end_ring(M).ring
    assert End.order == 8
    assert not oracles.baer_injective(End, End.add, End.mul)
    # Q(End M) is strictly bigger than End(~E(M)) = End(M)
    assert q_max(End).Q.order == 16
    rep = end_quotient_check(M)
    assert rep["order_end_hull"] == 8 and rep["order_q_end"] == 16 and not rep["matches"]
    # the proposition itself still holds here
    assert qiiso_check(M)["ok"]
