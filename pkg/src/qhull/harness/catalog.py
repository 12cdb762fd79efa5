"""The built-in catalog of rings and modules."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import Config, get_config
from ..errors import CapExceeded
from ..finite_algebra import (
    FiniteRing,
    RightModule,
    direct_sum,
    enumerate_right_ideals,
    field as galois_field,
    matrix_ring,
    module_from_action,
    product_ring,
    quotient_module,
    zmod,
)


@dataclass
class CatalogEntry:
    ring: FiniteRing
    modules: list[RightModule]
    tags: list[str] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def instance_id(self, M: RightModule) -> str:
        return f"{self.ring.name}:{M.name}"


def row_module(T, name: str | None = None) -> RightModule:
    """Row vectors F^n with the right action of a matrix ring T (entries in T.base)."""
    F, n = T.base, T.n
    from ..finite_algebra.abelian import all_vectors, mixed_radix

    rows = all_vectors([F.order] * n)
    radix = mixed_radix([F.order] * n)
    add = F.add[rows[:, None, :], rows[None, :, :]] @ radix
    act = np.empty((len(rows), T.ring.order), dtype=np.int64)
    for r, mat in enumerate(T.entries):
        out = np.zeros((len(rows), n), dtype=np.int64)
        for j in range(n):
            acc = np.zeros(len(rows), dtype=np.int64)
            for k in range(n):
                acc = F.add[acc, F.mul[rows[:, k], mat[k, j]]]
            out[:, j] = acc
        act[:, r] = out @ radix
    return module_from_action(T.ring, add, act, label="row vectors", name=name or f"{F.name}^{n}")


def _cyclics(R: FiniteRing) -> list[RightModule]:
    """R_R and R/I for every nonzero proper right ideal I, in ideal order."""
    out = [R.regular_module]
    ideals = enumerate_right_ideals(R)
    for k, I in enumerate(ideals):
        if I.is_zero or I.is_full:
            continue
        q = quotient_module(R.regular_module, I).module
        q.name = f"R/I{k}"
        q.label = f"quotient R/I{k}"
        out.append(q)
    return out


def _sums(mods: list[RightModule], limit: int, max_order: int) -> list[RightModule]:
    """Pairwise direct sums A (+) B (A before B, repeats allowed) up to ``limit`` of them."""
    out = []
    for i, A in enumerate(mods):
        for B in mods[i:]:
            if len(out) >= limit:
                return out
            if A.order * B.order > max_order or A.order == 1 or B.order == 1:
                continue
            S = direct_sum([A, B]).module
            S.name = f"{A.name}+{B.name}"
            out.append(S)
    return out


def builtin_rings() -> list[tuple[FiniteRing, list[str], object]]:
    F2, F3 = galois_field(2), galois_field(3)
    T2 = matrix_ring(F2, 2, upper=True, name="T2(F2)")
    T3 = matrix_ring(F3, 2, upper=True, name="T2(F3)")
    M2 = matrix_ring(F2, 2, name="Mat2(F2)")
    return [
        (zmod(2), ["commutative", "field"], None),
        (zmod(3), ["commutative", "field"], None),
        (zmod(4), ["commutative", "self-injective"], None),
        (zmod(6), ["commutative", "semisimple"], None),
        (zmod(8), ["commutative", "self-injective"], None),
        (galois_field(4), ["commutative", "field"], None),
        (product_ring(F2, F2, name="F2xF2"), ["commutative", "semisimple"], None),
        (T2.ring, ["noncommutative", "triangular"], T2),
        (T3.ring, ["noncommutative", "triangular"], T3),
        (M2.ring, ["noncommutative", "simple"], M2),
    ]


def builtin_catalog(config: Config | None = None, commutative_only: bool = False) -> list[CatalogEntry]:
    """Deterministic catalog; modules over the size cap are recorded as skipped."""
    cfg = config or get_config()
    cap = cfg.max_module_order
    out: list[CatalogEntry] = []
    for R, tags, mat in builtin_rings():
        if commutative_only and "commutative" not in tags:
            continue
        entry = CatalogEntry(R, [], list(tags))
        if R.order > cap:
            entry.skipped.append((R.name, str(CapExceeded("ring order", R.order, cap))))
            if cap > 0:
                out.append(entry)
            continue
        mods = _cyclics(R)
        if mat is not None:
            entry.extras["matrix"] = mat
            if mat.entries[0].shape[0] == 2 and "triangular" in tags:
                row = row_module(mat, name="row")
                mods.append(row)
        mods.extend(_sums(mods, limit=3, max_order=min(64, cap)))
        for M in mods:
            if M.order > cap:
                entry.skipped.append((entry.instance_id(M), "module order over cap"))
            else:
                entry.modules.append(M)
        out.append(entry)
    return out
