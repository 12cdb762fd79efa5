"""Registered theorem-replay checks.

Each check runs on one scope (a module, a pair of modules over one ring, a
ring, or the whole catalog) and returns ``(passed, witness)``.  Raising
``Skip`` or ``CapExceeded`` records the instance as skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config import get_config
from ..density import (
    dense_criteria,
    is_dense,
    is_essential,
    is_rel_dense,
    rel_dense_criteria,
    two_sided_density_checks,
)
from ..errors import CapExceeded, PreconditionFailed
from ..finite_algebra import (
    ModuleHom,
    RightModule,
    Submodule,
    direct_sum,
    direct_sum_submodule,
    enumerate_right_ideals,
    enumerate_submodules,
    hom_group,
    is_two_sided,
    quotient_module,
)
from ..hulls import (
    direct_sum_hull_check,
    extend_hom,
    hull_endomorphism_tables,
    injective_hull,
    is_extending,
    is_injective,
    is_polyform,
    is_quasi_continuous,
    is_quasi_injective,
    radical_annihilator,
    rational_completeness_criteria,
    rational_formulas,
    rational_hull,
    singular_submodule,
)
from ..quotient_rings import (
    end_quotient_check,
    end_transfer_check,
    is_simple_ring,
    matrix_quotient_check,
    omega,
    q_max,
    qiiso_check,
    subring_embedding,
)


class Skip(Exception):
    """The check does not apply to this instance."""


@dataclass(frozen=True)
class Check:
    name: str
    scope: str  # module | pair | ring | catalog
    statement: str
    fn: Callable


CHECKS: dict[str, Check] = {}


def register(name: str, scope: str, statement: str):
    def wrap(fn):
        CHECKS[name] = Check(name, scope, statement, fn)
        return fn

    return wrap


# ---------------------------------------------------------------------------
# helpers


def subs(M: RightModule) -> list[Submodule]:
    memo = M.__dict__.setdefault("_hull_memo", {})
    if "subs" not in memo:
        memo["subs"] = enumerate_submodules(M)
    return memo["subs"]


def members(S: Submodule) -> list[int]:
    return [int(x) for x in S.members]


def small_targets(entry, limit: int = 3, max_order: int = 16) -> list[RightModule]:
    """A few small modules of the entry, used as the K in relative density."""
    return [K for K in entry.modules if K.order <= max_order and "+" not in K.name][:limit]


def _inside(sub: Submodule, V: Submodule) -> Submodule:
    """sub as a submodule of the module V.to_module()."""
    Vm, inc = V.to_module()
    return Submodule(Vm, sub.mask[inc.table])


def _hull_small(M: RightModule) -> None:
    if injective_hull(M).hull.order > get_config().racom_max_hull:
        raise Skip(f"E(M) larger than {get_config().racom_max_hull}")


# ---------------------------------------------------------------------------
# density


@register("dense_criteria", "module", "N dense in M iff Hom(M/N, E(M)) = 0 iff Hom(P/N, M) = 0 for every N <= P <= M")
def check_dense_criteria(entry, M):
    for N in subs(M):
        crit = dense_criteria(N)
        if len(set(crit.values())) != 1:
            return False, {"N": members(N), "criteria": crit}
    return True, None


@register(
    "rel_dense_criteria",
    "module",
    "K-density of N in M agrees with Hom(M/N, E(K)) = 0, with Hom(P/N, K) = 0 for intermediate P, and with l_H(N) = 0 for H = Hom(M, E(K))",
)
def check_rel_dense_criteria(entry, M):
    for K in small_targets(entry):
        for N in subs(M):
            crit = rel_dense_criteria(N, K)
            if len(set(crit.values())) != 1:
                return False, {"N": members(N), "K": K.name, "criteria": crit}
    return True, None


@register("dense_lattice", "module", "dense submodules are closed under intersection, and L dense in M iff L dense in V and V dense in M for L <= V <= M")
def check_dense_lattice(entry, M):
    S = subs(M)
    dense = {N.key: is_dense(N).answer for N in S}
    dense_list = [N for N in S if dense[N.key]]
    for i, L in enumerate(dense_list):
        for N in dense_list[i:]:
            if not is_dense(L & N).answer:
                return False, {"part": "intersection", "L": members(L), "N": members(N)}
    for V in S:
        for L in S:
            if not L <= V:
                continue
            lhs = dense[L.key]
            rhs = is_dense(_inside(L, V)).answer and dense[V.key]
            if lhs != rhs:
                return False, {"part": "transitivity", "L": members(L), "V": members(V)}
    return True, None


@register("dense_implies_essential", "module", "every dense submodule is essential")
def check_dense_essential(entry, M):
    for N in subs(M):
        if is_dense(N).answer and not is_essential(N).answer:
            return False, {"N": members(N)}
    return True, None


@register(
    "annihilator_density",
    "module",
    "for a two-sided ideal I: l_K(I) = 0 iff l_E(K)(I) = 0, and I dense in R iff l_R(I) = 0",
)
def check_annihilator_density(entry, M):
    for I in enumerate_right_ideals(M.ring):
        if not is_two_sided(I):
            continue
        rep = two_sided_density_checks(I, M)
        if not (rep["annihilator_transfer"] and rep["dense_iff_l_R_zero"]):
            return False, {"I": members(I), "report": rep}
    return True, None


# ---------------------------------------------------------------------------
# hulls


@register("hull_formulas", "module", "the five descriptions of the rational hull select the same subset of E(M)")
def check_hull_formulas(entry, M):
    forms = rational_formulas(M)
    ref = forms["C"]
    bad = [k for k, v in forms.items() if not (v == ref).all()]
    if bad:
        return False, {"disagree": bad, "sizes": {k: int(v.sum()) for k, v in forms.items()}}
    return True, None


@register("hull_sandwich", "module", "M <= ~E(M) <= E(M), M dense in ~E(M), M essential in E(M)")
def check_hull_sandwich(entry, M):
    inj = injective_hull(M)
    rh = rational_hull(M)
    out = {
        "contains": bool(inj.image <= rh.inside),
        "dense": is_dense(rh.image).answer,
        "essential": is_essential(inj.image).answer,
        "embedding_injective": inj.embedding.is_injective and rh.embedding.is_injective,
    }
    return all(out.values()), None if all(out.values()) else out


@register("hull_idempotence", "module", "~E(~E(M)) = ~E(M) and E(E(M)) = E(M)")
def check_hull_idempotence(entry, M):
    X = rational_hull(M).hull
    E = injective_hull(M).hull
    a = rational_hull(X).hull.order == X.order
    b = injective_hull(E).hull.order == E.order
    return a and b, None if a and b else {"rational": a, "injective": b}


@register("dense_intermediate", "module", "for M <= V <= E(M): M dense in V iff V <= ~E(M)")
def check_dense_intermediate(entry, M):
    _hull_small(M)
    inj = injective_hull(M)
    X = rational_hull(M).inside
    for V in subs(inj.hull):
        if not inj.image <= V:
            continue
        lhs = is_dense(_inside(inj.image, V)).answer
        if lhs != (V <= X):
            return False, {"V": members(V), "dense": lhs}
    return True, None


@register(
    "maximal_dense",
    "module",
    "~E(M) is dense over M and rationally complete, nothing above it is dense over M, and nothing strictly between M and it is rationally complete",
)
def check_maximal_dense(entry, M):
    _hull_small(M)
    inj = injective_hull(M)
    X = rational_hull(M)
    if rational_hull(X.hull).hull.order != X.hull.order:
        return False, {"part": "complete"}
    for V in subs(inj.hull):
        if not inj.image <= V or V == X.inside:
            continue
        if X.inside < V and is_dense(_inside(inj.image, V)).answer:
            return False, {"part": "maximal", "V": members(V)}
        if V < X.inside:
            Vm, _ = V.to_module()
            if rational_hull(Vm).hull.order == Vm.order:
                return False, {"part": "minimal", "V": members(V)}
    return True, None


@register(
    "rational_completeness",
    "module",
    "~E(M) = M iff no coset x + M has l_E(r_R(x + M)) = 0 iff maps from M-dense right ideals into M extend uniquely to R",
)
def check_rational_completeness(entry, M):
    crit = rational_completeness_criteria(M)
    ok = len(set(crit.values())) == 1
    return ok, None if ok else crit


@register("injective_oracle", "module", "M is injective iff its hull embedding is onto")
def check_injective_oracle(entry, M):
    a = is_injective(M)
    b = injective_hull(M).embedding.is_surjective
    return a == b, None if a == b else {"baer": a, "onto": b}


@register("radical_annihilator", "module", "the common kernel of J(End(E(M))) lies inside ~E(M)")
def check_radical(entry, M):
    rE = radical_annihilator(M)
    X = rational_hull(M).inside
    ok = rE <= X
    return ok, None if ok else {"r_E(J)": members(rE), "hull": members(X)}


@register(
    "unique_extension",
    "module",
    "a map N -> K from a K-dense N <= M extends uniquely to M -> ~E(K), and phi(N) is dense in the extension's image",
)
def check_unique_extension(entry, M):
    for K in [M] + small_targets(entry, limit=2):
        hull = rational_hull(K)
        for N in subs(M):
            Nm, _ = N.to_module()
            space = hom_group(Nm, K)
            tabs = space.tables()[:64]
            dense = is_rel_dense(N, K).answer
            for t in tabs:
                phi = ModuleHom(Nm, K, t)
                try:
                    extend_hom(N, K, phi, hull=hull)
                except PreconditionFailed:
                    if dense:
                        return False, {"N": members(N), "K": K.name, "reason": "rejected a dense N"}
                    break
                else:
                    if not dense:
                        return False, {"N": members(N), "K": K.name, "reason": "accepted a non-dense N"}
    return True, None


@register("omega_embedding", "module", "phi -> its extension is an injective unital ring map End(M) -> End(~E(M)) restricting back to phi")
def check_omega(entry, M):
    om = omega(M)  # RingEmbedding.check runs inside
    e = rational_hull(M).embedding.table
    for i, h in enumerate(om.source.homs):
        ext = om.target.homs[int(om.embedding.table[i])]
        if not (ext.table[e] == e[h.table]).all():
            return False, {"phi": i}
    return True, None


@register("omega_fixes_hull", "module", "an endomorphism of E(M) that is the identity on M is the identity on ~E(M)")
def check_fixes(entry, M):
    inj = injective_hull(M)
    X = rational_hull(M).inside
    e = inj.embedding.table
    tabs = hull_endomorphism_tables(M)
    fix = tabs[(tabs[:, e] == e).all(axis=1)]
    ok = bool((fix[:, X.members] == X.members).all())
    return ok, None


@register(
    "transfer",
    "module",
    "quasi-injective, quasi-continuous and extending pass from M to ~E(M); M polyform iff ~E(M) polyform and quasi-injective",
)
def check_transfer(entry, M):
    X = rational_hull(M).hull
    out = {}
    out["qi"] = (not is_quasi_injective(M)) or is_quasi_injective(X)
    out["qc"] = (not is_quasi_continuous(M)) or is_quasi_continuous(X)
    out["extending"] = (not is_extending(M)) or is_extending(X)
    out["polyform"] = is_polyform(M) == (is_polyform(X) and is_quasi_injective(X))
    ok = all(out.values())
    return ok, None if ok else out


@register(
    "endomorphism_iso",
    "module",
    "quasi-injective M has End(M) onto End(~E(M)); for polyform M the converse holds",
)
def check_qiiso(entry, M):
    rep = qiiso_check(M)
    return rep["ok"], None if rep["ok"] else rep


@register(
    "end_quotient",
    "module",
    "for quasi-injective M, Q(End(M)) is End(~E(M)) (claimed via End(M) being right self-injective)",
)
def check_end_quotient(entry, M):
    rep = end_quotient_check(M)
    if not rep["quasi_injective"]:
        raise Skip("M is not quasi-injective")
    return rep["matches"], None if rep["matches"] else rep


# ---------------------------------------------------------------------------
# direct sums


def _rel(N, K):
    return is_rel_dense(N, K).answer


@register(
    "sum_density_components",
    "pair",
    "N is K_i-dense for each i iff N is (+)K_i-dense iff N is (+)~E(K_i)-dense",
)
def check_sum_components(entry, A, B):
    KK = direct_sum([A, B]).module
    hulls = [rational_hull(A).hull, rational_hull(B).hull]
    if hulls[0].order * hulls[1].order > get_config().max_module_order:
        raise Skip("sum of rational hulls over cap")
    KE = direct_sum(hulls).module
    for M in (A, B):
        for N in subs(M):
            a = _rel(N, A) and _rel(N, B)
            b = _rel(N, KK)
            c = _rel(N, KE)
            if not a == b == c:
                return False, {"M": M.name, "N": members(N), "each": a, "sum": b, "hull_sum": c}
    return True, None


@register("sum_density", "pair", "N1 (+) N2 dense in M1 (+) M2 iff each N_i is M_j-dense in M_i")
def check_sum_density(entry, A, B):
    ds = direct_sum([A, B])
    for N1 in subs(A):
        for N2 in subs(B):
            lhs = is_dense(direct_sum_submodule(ds, [N1, N2])).answer
            rhs = _rel(N1, A) and _rel(N1, B) and _rel(N2, A) and _rel(N2, B)
            if lhs != rhs:
                return False, {"N1": members(N1), "N2": members(N2), "sum_dense": lhs}
    return True, None


@register(
    "sum_hull",
    "pair",
    "~E(M1 (+) M2) <= ~E(M1) (+) ~E(M2), with equality iff each M_i is M_j-dense in ~E(M_i); sums of rationally complete modules are rationally complete",
)
def check_sum_hull(entry, A, B):
    rep = direct_sum_hull_check([A, B])
    ok = rep["contained"] and rep["biconditional"]
    ok = ok and ((not rep["all_complete"]) or rep["sum_complete"])
    if A is B:
        ok = ok and rep["equal"]
    if ok:
        return True, None
    rep["pairwise_dense"] = {f"{i},{j}": v for (i, j), v in rep["pairwise_dense"].items()}
    return False, rep


# ---------------------------------------------------------------------------
# rings


@register(
    "quotient_ring",
    "ring",
    "Q(R) is a ring containing R as a right ring of quotients, the four descriptions of Q(R) agree, Q(Q(R)) = Q(R), and Q of a simple ring is simple",
)
def check_quotient_ring(entry):
    R = entry.ring
    res = q_max(R)  # ring axioms, embedding, characterisations and quotient property asserted inside
    out = {"order": res.Q.order}
    if res.Q.order <= get_config().racom_max_hull:
        out["idempotent"] = q_max(res.Q).Q.order == res.Q.order
    if is_simple_ring(R):
        out["simple"] = is_simple_ring(res.Q)
    ok = all(v for k, v in out.items() if k != "order")
    return ok, None if ok else out


@register(
    "end_transfer",
    "ring",
    "for H a right ring of quotients of R and M an H-module: End_H(M) <= End_R(M), equal when R is M-dense in H; R is E(R)-dense in H; nonsingular or free-embedded M give the premise",
)
def check_end_transfer(entry):
    R = entry.ring
    res = q_max(R)
    Q = res.Q
    cases = [("Q", Q.regular_module, res.embedding)]
    if Q.order**2 <= get_config().max_module_order and Q.order**2 <= 256:
        QQ = direct_sum([Q.regular_module, Q.regular_module]).module
        QQ.name = "Q+Q"
        cases.append(("Q+Q", QQ, res.embedding))
    ident = subring_embedding(R, R, np.arange(R.order))
    cases.append(("R", R.regular_module, ident))
    for name, M, emb in cases:
        rep = end_transfer_check(M, emb)
        ok = rep["theorem_holds"] and rep.get("remark_i", True)
        ok = ok and rep.get("remark_ii_holds", True) and rep.get("remark_iii_holds", True)
        if name in ("Q", "Q+Q"):
            # free H-modules: the projective case must give equality
            ok = ok and rep["equal"]
        if not ok:
            rep["case"] = name
            return False, rep
    return True, None


MATRIX_CASES = {"T2(F2)": [(1, 1)], "Z/4": [(1, 2)], "Z/2": [(2, 1)]}


@register("matrix_quotient", "ring", "End_R(~E((R^n)^k)) is Mat_nk(Q(R)) acting on columns")
def check_matrix_quotient(entry):
    cases = MATRIX_CASES.get(entry.ring.name)
    if not cases:
        raise Skip("no matrix case for this ring")
    for n, k in cases:
        rep = matrix_quotient_check(entry.ring, n, k)
        ok = rep["bijective"] and rep["multiplicative"] and rep["hull_is_Q_power"]
        if not ok:
            rep["n"], rep["k"] = n, k
            return False, rep
    return True, None


def singular_simple_modules(R) -> list[RightModule]:
    """One R/I per isomorphism class of singular simple modules."""
    ideals = enumerate_right_ideals(R)
    proper = [I for I in ideals if not I.is_full]
    maximal = [I for I in proper if not any(I < J for J in proper)]
    reps: list[RightModule] = []
    for I in maximal:
        S = quotient_module(R.regular_module, I).module
        if not singular_submodule(S).is_full:
            continue
        if any(not hom_group(S, T).is_zero for T in reps):
            continue  # a nonzero map between simples is an isomorphism
        S.name = f"S{len(reps)}"
        reps.append(S)
    return reps


def singular_simple_check(entry) -> dict:
    R = entry.ring
    reps = singular_simple_modules(R)
    if not reps:
        return {"singular_simples": 0, "P_complete": True, "containing": {}}
    P = direct_sum(reps).module if len(reps) > 1 else reps[0]
    out = {"singular_simples": len(reps), "P_complete": rational_hull(P).hull.order == P.order, "containing": {}}
    for M in entry.modules:
        space = hom_group(P, M)
        if space.count > get_config().max_hom_maps:
            continue
        if ((space.tables() == 0).sum(axis=1) == 1).any():
            out["containing"][M.name] = rational_hull(M).hull.order == M.order
    return out


@register("singular_simples", "ring", "every module containing one copy of each singular simple module is rationally complete")
def check_singular_simples(entry):
    rep = singular_simple_check(entry)
    ok = rep["P_complete"] and all(rep["containing"].values())
    return ok, None if ok else rep


# ---------------------------------------------------------------------------
# catalog-wide searches


@register("essential_not_dense", "catalog", "essential does not imply dense: some catalog pair is essential but not dense")
def check_essential_not_dense(catalog):
    for entry in catalog:
        for M in entry.modules:
            for N in subs(M):
                if is_essential(N).answer and not is_dense(N).answer:
                    return True, {"instance": entry.instance_id(M), "N": members(N), "dense_witness": list(is_dense(N).witness[:2])}
    return False, {"reason": "no separating pair in catalog"}


@register("rel_dense_not_essential", "catalog", "relative density does not imply essentiality: some N is K-dense in M without being essential")
def check_rel_dense_not_essential(catalog):
    for entry in catalog:
        for M in entry.modules:
            for K in small_targets(entry):
                for N in subs(M):
                    if not is_essential(N).answer and is_rel_dense(N, K).answer:
                        return True, {"instance": entry.instance_id(M), "K": K.name, "N": members(N)}
    return False, {"reason": "no separating triple in catalog"}
