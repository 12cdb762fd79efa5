"""Essential, dense and relatively dense submodules.

Every predicate here is decided by a direct scan of its definition.  The
equivalent homological criteria (Hom into an injective hull vanishes, Hom
from every intermediate quotient vanishes, annihilators vanish) are exposed
separately so callers can cross-check; with ``debug_crosscheck`` switched on
the predicates do this themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .config import get_config
from .errors import InternalInconsistency, NotASubmodule, NotTwoSided, RingMismatch
from .finite_algebra import (
    RightModule,
    Submodule,
    enumerate_submodules,
    hom_group,
    is_two_sided,
    killed_by,
    quotient_module,
    vanishing_on,
)


@dataclass(frozen=True)
class DensityVerdict:
    answer: bool
    witness: tuple | None = None
    method: str = "definition"

    def __bool__(self) -> bool:
        return self.answer


def _ambient(N: Submodule, M: RightModule | None) -> RightModule:
    if M is not None and N.ambient is not M:
        raise NotASubmodule(f"submodule does not live in {M.name}")
    return N.ambient


def _rel_dense_scan(M: RightModule, N_mask: np.ndarray, K: RightModule) -> tuple | None:
    """First (m, x) with x != 0 in K and x.(m^{-1}N) = 0, or None."""
    if K.ring is not M.ring:
        raise RingMismatch("relative density needs modules over one ring")
    if K.is_zero:
        return None
    ideals = N_mask[M.act]  # row m: the right ideal m^{-1}N
    uniq, first = np.unique(ideals, axis=0, return_index=True)
    order = np.argsort(first)
    uniq, first = uniq[order], first[order]
    hits = K.nonzero_act[1:].astype(np.int32) @ uniq.T.astype(np.int32)
    bad = np.argwhere(hits.T == 0)  # (ideal, x-1)
    if len(bad) == 0:
        return None
    u, x = bad[0]
    return int(first[u]), int(x) + 1


def is_essential(N: Submodule, M: RightModule | None = None) -> DensityVerdict:
    """N <=ess M: every 0 != m has some r with 0 != m.r in N."""
    M = _ambient(N, M)
    good = (N.mask[M.act] & M.nonzero_act).any(axis=1)
    good[0] = True
    bad = np.flatnonzero(~good)
    if len(bad):
        return DensityVerdict(False, (int(bad[0]),), "definition")
    return DensityVerdict(True, None, "definition")


def is_dense(N: Submodule, M: RightModule | None = None) -> DensityVerdict:
    """N <=den M: for x and 0 != y in M some r has x.r in N and y.r != 0."""
    M = _ambient(N, M)
    found = _rel_dense_scan(M, N.mask, M)
    if found is None:
        verdict = DensityVerdict(True, None, "definition")
    else:
        x, y = found
        rs = tuple(int(r) for r in np.flatnonzero(N.mask[M.act[x]]))
        verdict = DensityVerdict(False, (x, y, rs), "definition")
    if get_config().debug_crosscheck:
        crit = dense_criteria(N)
        if len(set(crit.values()) | {verdict.answer}) != 1:
            raise InternalInconsistency(f"density criteria disagree: {crit}, definition={verdict.answer}")
    return verdict


def is_rel_dense(N: Submodule, K: RightModule) -> DensityVerdict:
    """N <=den_K M: for m in M and 0 != x in K, x.(m^{-1}N) != 0."""
    M = N.ambient
    found = _rel_dense_scan(M, N.mask, K)
    if found is None:
        verdict = DensityVerdict(True, None, "definition")
    else:
        m, x = found
        rs = tuple(int(r) for r in np.flatnonzero(N.mask[M.act[m]]))
        verdict = DensityVerdict(False, (m, x, rs), "definition")
    if get_config().debug_crosscheck:
        crit = rel_dense_criteria(N, K)
        if len(set(crit.values()) | {verdict.answer}) != 1:
            raise InternalInconsistency(f"relative density criteria disagree: {crit}, definition={verdict.answer}")
    return verdict


def is_ideal_rel_dense(I: Submodule, K: RightModule) -> DensityVerdict:
    """I <=den_K R for a right ideal I: for r in R and 0 != m in K, m.(r^{-1}I) != 0."""
    R = K.ring
    if I.ambient is not R.regular_module:
        raise NotASubmodule("expected a right ideal of the base ring of K")
    verdict = is_rel_dense(I, K)
    if get_config().debug_crosscheck:
        from .hulls import injective_hull

        E = injective_hull(K).hull
        by_annihilator = killed_by(E, I.mask).is_zero
        if by_annihilator != verdict.answer:
            raise InternalInconsistency("ideal density disagrees with l_E(K)(I) = 0")
    return verdict


# ---------------------------------------------------------------------------
# equivalent characterisations


def _between(N: Submodule) -> list[Submodule]:
    return [P for P in enumerate_submodules(N.ambient) if N <= P]


def _quotients_vanish(N: Submodule, K: RightModule) -> bool:
    """Hom(P/N, K) = 0 for every N <= P <= M."""
    for P in _between(N):
        Pm, inc = P.to_module()
        Nin = Submodule(Pm, N.mask[inc.table])
        if not hom_group(quotient_module(Pm, Nin).module, K).is_zero:
            return False
    return True


def dense_criteria(N: Submodule) -> dict[str, bool]:
    """The three equivalent forms of N <=den M.

    ``hom_into_hull``: Hom(M/N, E(M)) = 0;
    ``intermediate``: Hom(P/N, M) = 0 for all N <= P <= M.
    """
    from .hulls import injective_hull

    M = N.ambient
    E = injective_hull(M).hull
    q = quotient_module(M, N).module
    found = _rel_dense_scan(M, N.mask, M)
    return {
        "definition": found is None,
        "hom_into_hull": hom_group(q, E).is_zero,
        "intermediate": _quotients_vanish(N, M),
    }


def rel_dense_criteria(N: Submodule, K: RightModule) -> dict[str, bool]:
    """Equivalent forms of N <=den_K M, including l_H(N) = 0 for H = Hom(M, E(K))."""
    from .hulls import injective_hull

    M = N.ambient
    E = injective_hull(K).hull
    q = quotient_module(M, N).module
    out = {
        "definition": _rel_dense_scan(M, N.mask, K) is None,
        "hom_into_hull": hom_group(q, E).is_zero,
        "intermediate": _quotients_vanish(N, K),
    }
    H = hom_group(M, E)
    if H.count <= get_config().max_hom_maps:
        out["hom_annihilator"] = len(vanishing_on(H.homs(), N)) == 1
    return out


def two_sided_density_checks(I: Submodule, K: RightModule | None = None) -> dict[str, Any]:
    """Annihilator criteria for a two-sided ideal I.

    Returns l_K(I) = 0, l_E(K)(I) = 0, I dense in R_R, l_R(I) = 0, plus the two
    biconditionals relating them.
    """
    from .hulls import injective_hull

    R = I.ambient.ring
    if I.ambient is not R.regular_module:
        raise NotASubmodule("expected an ideal of the ring")
    if not is_two_sided(I):
        raise NotTwoSided("ideal is not two-sided")
    K = R.regular_module if K is None else K
    E = injective_hull(K).hull
    lk = killed_by(K, I.mask).is_zero
    le = killed_by(E, I.mask).is_zero
    dense = is_dense(I).answer
    lr = killed_by(R.regular_module, I.mask).is_zero
    return {
        "l_K_zero": lk,
        "l_EK_zero": le,
        "dense": dense,
        "l_R_zero": lr,
        "annihilator_transfer": lk == le,
        "dense_iff_l_R_zero": dense == lr,
    }
