"""Quotients, direct sums, submodule lattices and annihilators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..config import get_config
from ..errors import CapExceeded, NotASubmodule, RingMismatch, ShapeMismatch
from .abelian import all_vectors, mixed_radix
from .structures import (
    FiniteRing,
    ModuleHom,
    RightModule,
    Submodule,
    canonicalize,
    cyclic_submodule,
)


@dataclass(frozen=True, eq=False)
class Quotient:
    module: RightModule
    projection: ModuleHom


def quotient_module(M: RightModule, N: Submodule) -> Quotient:
    if N.ambient is not M:
        raise NotASubmodule("submodule lives in a different module")
    N.check()
    reps = M.add[:, N.members].min(axis=1)
    uniq = np.unique(reps)
    pos = np.full(M.order, -1, dtype=np.int64)
    pos[uniq] = np.arange(len(uniq))
    add = pos[reps[M.add[np.ix_(uniq, uniq)]]]
    act = pos[reps[M.act[uniq]]]
    Q, perm = canonicalize(M.ring, add, act, label=f"quotient {M.name}/N", name=f"{M.name}/N")
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return Quotient(Q, ModuleHom(M, Q, inv[pos[reps]]))


@dataclass(frozen=True, eq=False)
class DirectSum:
    module: RightModule
    summands: tuple[RightModule, ...]
    injections: tuple[ModuleHom, ...]
    projections: tuple[ModuleHom, ...]

    def element(self, parts: Sequence[int]) -> int:
        radix = mixed_radix([S.order for S in self.summands])
        return int(np.dot(radix, parts))

    def parts(self, x: int) -> tuple[int, ...]:
        return tuple(int(p.table[x]) for p in self.projections)


def direct_sum(modules: Sequence[RightModule], name: str | None = None) -> DirectSum:
    """Componentwise sum; element index is lexicographic in the component indices."""
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    R = modules[0].ring
    if any(S.ring is not R for S in modules):
        raise RingMismatch("summands over different rings")
    orders = [S.order for S in modules]
    total = int(np.prod(orders))
    cap = get_config().max_module_order
    if total > cap:
        raise CapExceeded("direct sum order", total, cap)
    radix = mixed_radix(orders)
    T = all_vectors(orders)
    add = np.zeros((total, total), dtype=np.int32)
    act = np.zeros((total, R.order), dtype=np.int32)
    for i, S in enumerate(modules):
        col = T[:, i]
        add += radix[i] * S.add[col[:, None], col[None, :]]
        act += radix[i] * S.act[col]
    label = " (+) ".join(S.label or S.name for S in modules)
    D = RightModule(R, add, act, label=label, name=name or "(+)".join(S.name for S in modules))
    inj = tuple(ModuleHom(S, D, np.arange(S.order) * radix[i]) for i, S in enumerate(modules))
    proj = tuple(ModuleHom(D, S, T[:, i]) for i, S in enumerate(modules))
    return DirectSum(D, tuple(modules), inj, proj)


def sum_of_submodules(parts: Sequence[Submodule]) -> Submodule:
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def direct_sum_submodule(ds: DirectSum, parts: Sequence[Submodule]) -> Submodule:
    """The submodule (+) N_k of (+) M_k for N_k <= M_k."""
    mask = np.ones(ds.module.order, dtype=bool)
    for proj, N in zip(ds.projections, parts):
        mask &= N.mask[proj.table]
    return Submodule(ds.module, mask)


def enumerate_submodules(M: RightModule, limit: int | None = None) -> list[Submodule]:
    """Every submodule of M, each once, ordered by (order, membership).

    Breadth-first over joins with cyclic submodules xR.
    """
    cap = get_config().max_submodules if limit is None else limit
    cyclics: dict[bytes, Submodule] = {}
    for x in range(M.order):
        C = cyclic_submodule(M, x)
        cyclics.setdefault(C.key, C)
    cyc = list(cyclics.values())
    zero = M.zero_submodule()
    found: dict[bytes, Submodule] = {zero.key: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyc:
                if C <= S:
                    continue
                J = S + C
                if J.key not in found:
                    found[J.key] = J
                    nxt.append(J)
                    if len(found) > cap:
                        raise CapExceeded(f"submodules of {M.name}", len(found), cap)
        frontier = nxt
    subs = list(found.values())
    subs.sort(key=lambda S: (S.order, tuple(S.members)))
    return subs


def enumerate_right_ideals(R: FiniteRing) -> list[Submodule]:
    hit = R.__dict__.get("_right_ideals")
    if hit is None:
        hit = R.__dict__["_right_ideals"] = enumerate_submodules(R.regular_module)
    return hit


def is_two_sided(I: Submodule) -> bool:
    R = I.ambient.ring
    return bool(I.mask[R.mul[:, I.members]].all())


def preimage_ideal(M: RightModule, x: int, K: Submodule) -> Submodule:
    """x^{-1}K = {r in R : x.r in K}."""
    if K.ambient is not M:
        raise NotASubmodule("K must be a submodule of M")
    return Submodule(M.ring.regular_module, K.mask[M.act[int(x)]])


def element_annihilator(M: RightModule, x: int) -> Submodule:
    """r_R(x) = {r : x.r = 0}."""
    return Submodule(M.ring.regular_module, M.act[int(x)] == 0)


def killed_by(M: RightModule, ideal_mask: np.ndarray) -> Submodule:
    """{m in M : m.I = 0}; written l_M(I) for a right ideal I."""
    return Submodule(M, ~M.nonzero_act[:, np.asarray(ideal_mask, dtype=bool)].any(axis=1))


def common_kernel(M: RightModule, homs: Sequence[ModuleHom]) -> Submodule:
    """r_M(I) = intersection of kernels for a set I of maps out of M."""
    mask = np.ones(M.order, dtype=bool)
    for h in homs:
        if h.source is not M:
            raise ShapeMismatch("map does not start at M")
        mask &= h.table == 0
    return Submodule(M, mask)


def vanishing_on(homs: Sequence[ModuleHom], N: Submodule) -> list[ModuleHom]:
    """l_H(N): the maps in H that kill N."""
    return [h for h in homs if not h.table[N.members].any()]


def annihilator(kind: str, *args):
    """Dispatch for the three annihilator flavours.

    ``annihilator("l_H", homs, N)``  maps in ``homs`` vanishing on N;
    ``annihilator("r_M", M, I)``     for I a list of maps: common kernel in M;
                                     for I a right ideal: {m : m.I = 0};
    ``annihilator("r_R", M, m)``     {r in R : m.r = 0}.
    """
    if kind == "l_H":
        homs, N = args
        if not isinstance(N, Submodule):
            raise ShapeMismatch("l_H expects a submodule")
        return vanishing_on(homs, N)
    if kind in ("r_M", "l_M"):
        M, I = args
        if isinstance(I, Submodule):
            if I.ambient is not M.ring.regular_module:
                raise ShapeMismatch("expected a right ideal of the base ring")
            return killed_by(M, I.mask)
        return common_kernel(M, list(I))
    if kind == "r_R":
        M, m = args
        return element_annihilator(M, m)
    raise ShapeMismatch(f"unknown annihilator kind {kind!r}")
