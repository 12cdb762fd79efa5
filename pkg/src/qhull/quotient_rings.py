"""Maximal right rings of quotients, the embedding End(M) -> End(~E(M)), and
the endomorphism-ring transfer results for modules over rings of quotients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_config
from .density import DensityVerdict, is_rel_dense
from .errors import CapExceeded, InternalInconsistency, NonUnique, NotFound, RingMismatch
from .finite_algebra import (
    EndRing,
    FiniteRing,
    ModuleHom,
    RightModule,
    Submodule,
    direct_sum,
    end_ring,
    enumerate_right_ideals,
    hom_group,
    identity_hom,
    validate_ring,
)
from .finite_algebra.abelian import all_vectors, mixed_radix
from .finite_algebra.structures import module_from_action
from .hulls import injective_hull, is_nonsingular, is_polyform, is_quasi_injective, rational_formulas, rational_hull


@dataclass(frozen=True, eq=False)
class RingEmbedding:
    source: FiniteRing
    target: FiniteRing
    table: np.ndarray

    def check(self) -> None:
        f, S, T = self.table, self.source, self.target
        if len(np.unique(f)) != S.order:
            raise InternalInconsistency("ring map is not injective")
        if f[S.one] != T.one:
            raise InternalInconsistency("ring map does not preserve unity")
        if not (f[S.add] == T.add[np.ix_(f, f)]).all():
            raise InternalInconsistency("ring map is not additive")
        if not (f[S.mul] == T.mul[np.ix_(f, f)]).all():
            raise InternalInconsistency("ring map is not multiplicative")

    @property
    def image_mask(self) -> np.ndarray:
        mask = np.zeros(self.target.order, dtype=bool)
        mask[self.table] = True
        return mask

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.table)) == self.target.order


@dataclass(frozen=True, eq=False)
class QuotientRingResult:
    Q: FiniteRing
    embedding: RingEmbedding
    module_identification: ModuleHom
    characterizations: dict


def q_max(R: FiniteRing) -> QuotientRingResult:
    """Q(R) on the set ~E(R_R), with products fixed by q1 q2 . r = q1 . (q2 r) on q2^{-1}R."""
    memo = R.__dict__.setdefault("_qmax", {})
    if "Q" in memo:
        return memo["Q"]
    RR = R.regular_module
    rh = rational_hull(RR)
    X = rh.hull
    emb = rh.embedding.table
    inR = np.zeros(X.order, dtype=bool)
    inR[emb] = True
    back = np.full(X.order, -1, dtype=np.int64)
    back[emb] = np.arange(R.order)
    mul = np.empty((X.order, X.order), dtype=np.int64)
    for q2 in range(X.order):
        D = np.flatnonzero(inR[X.act[q2]])  # q2^{-1}R
        s = back[X.act[q2, D]]  # q2 r = emb(s)
        cand = X.act[:, D]
        index = {}
        for x, row in enumerate(cand):
            key = row.tobytes()
            if key in index:
                raise NonUnique("two elements of Q agree on a dense right ideal")
            index[key] = x
        targets = X.act[:, s]
        for q1 in range(X.order):
            hit = index.get(targets[q1].astype(cand.dtype).tobytes())
            if hit is None:
                raise NotFound("no product in Q for a pair of elements")
            mul[q1, q2] = hit
    Q = validate_ring(X.add, mul, int(emb[R.one]), name=f"Q({R.name})")
    ring_emb = RingEmbedding(R, Q, emb)
    ring_emb.check()
    # Q restricted to R acting on the right is the module ~E(R)
    if not (Q.mul[:, emb] == X.act).all():
        raise InternalInconsistency("right R-action on Q differs from ~E(R)")
    forms = rational_formulas(RR)
    chars = {
        "dense_preimage": forms["C"],
        "l_E_zero": forms["E"],
        "hom_vanishes": forms["D"],
        "annihilator_formula": forms["A"],
    }
    for name, mask in chars.items():
        if not (mask == rh.inside.mask).all():
            raise InternalInconsistency(f"characterisation {name} of Q(R) disagrees")
    res = QuotientRingResult(Q, ring_emb, identity_hom(X), {k: int(v.sum()) for k, v in chars.items()})
    verdict = is_right_ring_of_quotients(ring_emb)
    if not verdict.answer:
        raise InternalInconsistency(f"Q(R) is not a right ring of quotients: {verdict.witness}")
    memo["Q"] = res
    return res


def is_right_ring_of_quotients(emb: RingEmbedding) -> DensityVerdict:
    """For all x != 0 and y in H some r in R has x.r != 0 and y.r in R."""
    H = emb.target
    img = H.mul[:, emb.table]  # element x scalar
    A = (img != 0).astype(np.int32)
    B = emb.image_mask[img].astype(np.int32)
    hits = A[1:] @ B.T
    bad = np.argwhere(hits == 0)
    if len(bad):
        x, y = bad[0]
        return DensityVerdict(False, (int(x) + 1, int(y)), "definition")
    return DensityVerdict(True, None, "definition")


def subring_embedding(R: FiniteRing, H: FiniteRing, table) -> RingEmbedding:
    emb = RingEmbedding(R, H, np.asarray(table, dtype=np.int64))
    emb.check()
    return emb


# ---------------------------------------------------------------------------
# Omega


@dataclass(frozen=True, eq=False)
class OmegaResult:
    source: EndRing
    target: EndRing
    embedding: RingEmbedding

    @property
    def is_surjective(self) -> bool:
        return self.embedding.is_surjective


def omega(M: RightModule) -> OmegaResult:
    """End(M) -> End(~E(M)), sending phi to its unique extension."""
    memo = M.__dict__.setdefault("_hull_memo", {})
    if "omega" in memo:
        return memo["omega"]
    rh = rational_hull(M)
    X = rh.hull
    e = rh.embedding.table
    S = end_ring(M)
    T = end_ring(X)
    by_restriction: dict[bytes, int] = {}
    for i, h in enumerate(T.homs):
        key = np.asarray(h.table[e], dtype=np.int64).tobytes()
        if key in by_restriction:
            raise NonUnique("two endomorphisms of ~E(M) agree on M")
        by_restriction[key] = i
    table = np.empty(len(S), dtype=np.int64)
    for i, h in enumerate(S.homs):
        key = np.asarray(e[h.table], dtype=np.int64).tobytes()
        if key not in by_restriction:
            raise NotFound("endomorphism of M has no extension to ~E(M)")
        table[i] = by_restriction[key]
    emb = RingEmbedding(S.ring, T.ring, table)
    emb.check()
    res = OmegaResult(S, T, emb)
    memo["omega"] = res
    return res


# ---------------------------------------------------------------------------
# End_R(M) against End_H(M)


def restrict_scalars(M: RightModule, emb: RingEmbedding, name: str | None = None) -> RightModule:
    if M.ring is not emb.target:
        raise RingMismatch("module is not over the target ring of the embedding")
    return module_from_action(emb.source, M.add, M.act[:, emb.table], label=f"{M.label or M.name}|R", name=name or f"{M.name}|R")


def free_submodule_certificate(M: RightModule, max_rank: int | None = None):
    """(k, injective H-map M -> H^k) for the least k <= max_rank, or None."""
    H = M.ring
    cap = get_config().max_projective_rank if max_rank is None else max_rank
    for k in range(1, cap + 1):
        if H.order**k > get_config().max_module_order:
            break
        F = direct_sum([H.regular_module] * k).module
        space = hom_group(M, F)
        if space.count > get_config().max_hom_maps:
            break
        tabs = space.tables()
        mono = np.flatnonzero((tabs == 0).sum(axis=1) == 1)  # zero kernel
        if len(mono):
            return k, ModuleHom(M, F, tabs[mono[0]])
    return None


def end_transfer_check(M: RightModule, emb: RingEmbedding) -> dict:
    """End_H(M) against End_R(M) for a right H-module M, H a ring containing R."""
    R, H = emb.source, emb.target
    MR = restrict_scalars(M, emb)
    HR = restrict_scalars(H.regular_module, emb, name=f"{H.name}|R")
    Rin = Submodule(HR, emb.image_mask)
    premise = is_rel_dense(Rin, MR)
    end_H = {t.astype(np.int64).tobytes() for t in hom_group(M, M).tables()}
    end_R = {t.astype(np.int64).tobytes() for t in hom_group(MR, MR).tables()}
    quotients = is_right_ring_of_quotients(emb).answer
    report = {
        "order_end_H": len(end_H),
        "order_end_R": len(end_R),
        "contained": end_H <= end_R,
        "premise": premise.answer,
        "premise_witness": premise.witness,
        "equal": end_H == end_R,
        "ring_of_quotients": quotients,
    }
    report["theorem_holds"] = report["contained"] and (report["equal"] or not report["premise"])
    if quotients:
        ER = injective_hull(R.regular_module).hull
        report["remark_i"] = is_rel_dense(Rin, ER).answer
        nonsing = is_nonsingular(MR)
        report["remark_ii_applies"] = nonsing
        report["remark_ii_holds"] = (not nonsing) or premise.answer
        cert = free_submodule_certificate(M)
        report["remark_iii_applies"] = cert is not None
        report["remark_iii_rank"] = None if cert is None else cert[0]
        report["remark_iii_holds"] = cert is None or premise.answer
    return report


# ---------------------------------------------------------------------------
# matrices over Q(R)


def matrix_quotient_check(R: FiniteRing, n: int, k: int) -> dict:
    """End_R(Q(R)^{nk}) against Mat_{nk}(Q(R)) acting on columns."""
    N = n * k
    res = q_max(R)
    Q = res.Q
    Qm = rational_hull(R.regular_module).hull
    X = direct_sum([Qm] * N)
    base = direct_sum([R.regular_module] * N)
    hull_order = rational_hull(base.module).hull.order
    radix = mixed_radix([Qm.order] * N)
    parts = all_vectors([Qm.order] * N)  # element -> components
    count = hom_group(X.module, X.module).count
    n_mats = Q.order ** (N * N)
    cap = get_config().max_hom_maps
    if n_mats > cap:
        raise CapExceeded("matrix ring over Q(R)", n_mats, cap)
    mats = all_vectors([Q.order] * (N * N)).reshape(-1, N, N)
    tables = np.empty((len(mats), X.module.order), dtype=np.int64)
    for a, A in enumerate(mats):
        out = np.zeros((X.module.order, N), dtype=np.int64)
        for i in range(N):
            acc = np.zeros(X.module.order, dtype=np.int64)
            for j in range(N):
                acc = Q.add[acc, Q.mul[A[i, j], parts[:, j]]]
            out[:, i] = acc
        tables[a] = out @ radix
    linear = bool((tables[:, X.module.act] == X.module.act[tables]).all())
    distinct = len(np.unique(tables, axis=0)) == len(mats)
    # ring structure: matrix product goes to composition, on every pair
    idx = {t.tobytes(): a for a, t in enumerate(tables)}
    mix = mixed_radix([Q.order] * (N * N))
    mul_ok = True
    for a in range(len(mats)):
        A = mats[a]
        comps = tables[a][tables]  # row b: A o B
        C = np.zeros((len(mats), N, N), dtype=np.int64)
        for i in range(N):
            for j in range(N):
                acc = np.zeros(len(mats), dtype=np.int64)
                for l in range(N):
                    acc = Q.add[acc, Q.mul[A[i, l], mats[:, l, j]]]
                C[:, i, j] = acc
        want = C.reshape(len(mats), -1) @ mix
        got = np.array([idx.get(c.tobytes(), -1) for c in comps])
        if not (got == want).all():
            mul_ok = False
            break
    return {
        "order_Q": Q.order,
        "order_hull": hull_order,
        "hull_is_Q_power": hull_order == Q.order**N,
        "order_end": count,
        "order_matrices": len(mats),
        "linear": linear,
        "injective": distinct,
        "bijective": linear and distinct and count == len(mats),
        "multiplicative": mul_ok,
    }


# ---------------------------------------------------------------------------
# End(M) against End(~E(M))


def qiiso_check(M: RightModule) -> dict:
    qi = is_quasi_injective(M)
    om = omega(M)
    poly = is_polyform(M)
    X = rational_hull(M).hull
    poly_hull = is_polyform(X)
    qi_hull = is_quasi_injective(X)
    report = {
        "quasi_injective": qi,
        "omega_surjective": om.is_surjective,
        "polyform": poly,
        "hull_polyform": poly_hull,
        "hull_quasi_injective": qi_hull,
        "proper": X.order != M.order,
        "qi_implies_iso": (not qi) or om.is_surjective,
        "polyform_converse": not (poly and om.is_surjective) or qi,
        "polyform_transfer": poly == (poly_hull and qi_hull),
    }
    report["ok"] = report["qi_implies_iso"] and report["polyform_converse"] and report["polyform_transfer"]
    return report


def end_quotient_check(M: RightModule) -> dict:
    """For quasi-injective M: Q(End(M)) against End(~E(M)), and whether End(M) is right self-injective.

    The two rings can differ: an injective M whose End(M) is a triangular
    matrix ring has End(M) = End(~E(M)) while Q(End(M)) is strictly larger.
    """
    if not is_quasi_injective(M):
        return {"quasi_injective": False}
    om = omega(M)
    S = om.source.ring
    Sq = q_max(S)
    from .hulls import is_injective

    return {
        "quasi_injective": True,
        "order_end": S.order,
        "order_end_hull": om.target.ring.order,
        "order_q_end": Sq.Q.order,
        "end_self_injective": is_injective(S.regular_module),
        "matches": Sq.Q.order == om.target.ring.order and om.is_surjective,
    }


def is_simple_ring(R: FiniteRing) -> bool:
    from .finite_algebra import is_two_sided

    two = [I for I in enumerate_right_ideals(R) if is_two_sided(I)]
    return len(two) == 2


def matrix_unit_identification(res: QuotientRingResult, upper, full) -> dict:
    """Identify Q(T_n(F)) with Mat_n(F) through matrix units.

    The units e_ij (i <= j) come from R; each missing e_i1 is the first q in Q
    with e_1i q = e_11, q e_1i = e_ii, e_ii q = q and q e_11 = q.  The map
    (a_ij) -> sum a_ij e_ij is then compared with Q table for table.
    """
    Q, f = res.Q, res.embedding.table
    n, F = upper.n, upper.base
    units: dict[tuple[int, int], int] = {}
    for i in range(n):
        for j in range(i, n):
            units[i, j] = int(f[upper.unit(i, j)])
    for i in range(1, n):
        e1i, e11, eii = units[0, i], units[0, 0], units[i, i]
        qs = np.arange(Q.order)
        ok = (Q.mul[e1i, qs] == e11) & (Q.mul[qs, e1i] == eii) & (Q.mul[eii, qs] == qs) & (Q.mul[qs, e11] == qs)
        hits = np.flatnonzero(ok)
        if len(hits) == 0:
            return {"identified": False, "missing_unit": (i, 0)}
        units[i, 0] = int(hits[0])
    for i in range(1, n):
        for j in range(1, i):
            units[i, j] = int(Q.mul[units[i, 0], units[0, j]])
    # scalars of F sit in Q through the scalar matrices of R
    scal = [int(f[upper.index_of(np.eye(n, dtype=np.int64) * a)]) for a in range(F.order)]
    phi = np.empty(full.ring.order, dtype=np.int64)
    for x, mat in enumerate(full.entries):
        acc = 0
        for i in range(n):
            for j in range(n):
                acc = Q.add[acc, Q.mul[scal[mat[i, j]], units[i, j]]]
        phi[x] = acc
    emb = RingEmbedding(full.ring, Q, phi)
    bijective = len(np.unique(phi)) == Q.order == full.ring.order
    try:
        emb.check()
        hom = True
    except InternalInconsistency:
        hom = False
    corner = all(phi[full.index_of(upper.entries[x])] == f[x] for x in range(upper.ring.order))
    return {"identified": bijective and hom and corner, "bijective": bijective, "ring_hom": hom, "extends_R": corner, "table": phi}
