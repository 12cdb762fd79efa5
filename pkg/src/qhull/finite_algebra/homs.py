"""Hom groups between finite modules, and endomorphism rings.

A homomorphism f: M -> N is fixed by the images of an additive basis of M.
Writing those images in the coordinates of N turns "f is well defined and
R-linear" into homogeneous congruences, solved one prime at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod

import numpy as np

from ..config import get_config
from ..errors import CapExceeded, RingMismatch
from .abelian import all_vectors, factorize, kernel_prime_power
from .structures import FiniteRing, ModuleHom, RightModule


def _p_indices(orders, p: int) -> list[int]:
    return [i for i, o in enumerate(orders) if set(factorize(o)) == {p}]


def _hom_generators(M: RightModule, N: RightModule) -> tuple[list[np.ndarray], list[int]]:
    """Independent generators of Hom(M, N) as k x l coordinate matrices, with orders."""
    R = M.ring
    bM, bN = M.basis, N.basis
    d, e = bM.orders, bN.orders
    k, l = len(d), len(e)
    gens: list[np.ndarray] = []
    orders: list[int] = []
    if k == 0 or l == 0:
        return gens, orders
    rbasis = R.basis.gens
    primes = sorted(set(factorize(max(1, int(np.prod(d))))) & set(factorize(max(1, int(np.prod(e))))))
    # images of basis elements under each ring basis element, in coordinates
    gi_r = bM.coords[M.act[np.ix_(bM.gens, rbasis)]]  # k x |rb| x k
    hj_r = bN.coords[N.act[np.ix_(bN.gens, rbasis)]]  # l x |rb| x l
    for p in primes:
        I = _p_indices(d, p)
        J = _p_indices(e, p)
        E = max(factorize(o)[p] for o in [d[i] for i in I] + [e[j] for j in J])
        q = p**E
        nv = len(I) * len(J)
        var = {(i, j): a * len(J) + b for a, i in enumerate(I) for b, j in enumerate(J)}
        rows: list[np.ndarray] = []
        for (i, j), v in var.items():
            row = np.zeros(nv, dtype=np.int64)
            row[v] = e[j]
            rows.append(row)
            row = np.zeros(nv, dtype=np.int64)
            row[v] = d[i]
            rows.append(row)
        for i in I:
            for s in range(len(rbasis)):
                a = gi_r[i, s]
                for jp in J:
                    row = np.zeros(nv, dtype=np.int64)
                    for t in I:
                        row[var[t, jp]] += a[t]
                    for j in J:
                        row[var[i, j]] -= (int(hj_r[j, s, jp]) * e[j]) // e[jp]
                    rows.append(row)
        A = np.stack(rows) % q
        kgens, kord = kernel_prime_power(A, p, E)
        scale = np.array([q // e[j] for _i in I for j in J], dtype=np.int64)
        for g, o in zip(kgens, kord):
            C = np.zeros((k, l), dtype=np.int64)
            c = (g // scale).reshape(len(I), len(J))
            C[np.ix_(I, J)] = c
            gens.append(C)
            orders.append(o)
    return gens, orders


@dataclass(eq=False)
class HomSpace:
    """Hom_R(M, N) as an abelian group with an explicit independent generating set."""

    source: RightModule
    target: RightModule
    gen_coords: list[np.ndarray] = field(repr=False)
    orders: list[int]

    @property
    def count(self) -> int:
        return prod(self.orders)

    def _tables_from_coords(self, Cs: np.ndarray) -> np.ndarray:
        """Element tables for a stack of coordinate matrices (h x k x l)."""
        M, N = self.source, self.target
        e = np.asarray(N.basis.orders, dtype=np.int64)
        imgs = np.einsum("mk,hkl->hml", M.basis.coords, Cs) % e if len(e) else None
        if imgs is None:
            return np.zeros((len(Cs), M.order), dtype=np.int64)
        return N.basis.index_of(imgs)

    @cached_property
    def generators(self) -> list[ModuleHom]:
        if not self.gen_coords:
            return []
        tabs = self._tables_from_coords(np.stack(self.gen_coords))
        return [ModuleHom(self.source, self.target, t) for t in tabs]

    def tables(self, limit: int | None = None) -> np.ndarray:
        """All element tables, sorted lexicographically (the zero map first)."""
        cap = get_config().max_hom_maps if limit is None else limit
        if self.count > cap:
            raise CapExceeded(f"Hom({self.source.name}, {self.target.name})", self.count, cap)
        M, N = self.source, self.target
        tabs = np.zeros((1, M.order), dtype=np.int64)
        # sum over generators of every multiple, by table lookups in N
        for g, o in zip(self.generators, self.orders):
            mult = [np.zeros(M.order, dtype=np.int64)]
            for _ in range(o - 1):
                mult.append(N.add[mult[-1], g.table])
            mult = np.stack(mult)
            tabs = N.add[tabs[:, None, :], mult[None, :, :]].reshape(-1, M.order)
        order = np.lexsort(tabs.T[::-1])
        return tabs[order]

    def homs(self) -> list[ModuleHom]:
        return [ModuleHom(self.source, self.target, t) for t in self.tables()]

    @property
    def is_zero(self) -> bool:
        return self.count == 1


def hom_group(M: RightModule, N: RightModule) -> HomSpace:
    if M.ring is not N.ring:
        raise RingMismatch(f"{M.name} and {N.name} are over different rings")
    gens, orders = _hom_generators(M, N)
    return HomSpace(M, N, gens, orders)


def hom_space(M: RightModule, N: RightModule) -> list[ModuleHom]:
    """Every R-linear map M -> N, in lexicographic order of their tables."""
    space = hom_group(M, N)
    if get_config().debug_crosscheck and bruteforce_candidates(M, N) <= get_config().bruteforce_threshold:
        brute = hom_tables_bruteforce(M, N)
        tabs = space.tables()
        if brute.shape != tabs.shape or not (brute == tabs).all():
            raise AssertionError(f"hom solver disagrees with enumeration for {M.name} -> {N.name}")
    return space.homs()


def bruteforce_candidates(M: RightModule, N: RightModule) -> int:
    ords = _element_orders(N)
    return prod(int((d % ords == 0).sum()) for d in M.basis.orders)


def _element_orders(N: RightModule) -> np.ndarray:
    e = np.asarray(N.basis.orders, dtype=np.int64)
    if len(e) == 0:
        return np.ones(1, dtype=np.int64)
    c = N.basis.coords
    out = np.ones(N.order, dtype=np.int64)
    for j, ej in enumerate(e):
        oj = ej // np.gcd(c[:, j], ej)
        out = np.lcm(out, oj)
    return out


def hom_tables_bruteforce(M: RightModule, N: RightModule) -> np.ndarray:
    """Hom(M, N) by trying every additive map and keeping the R-linear ones.

    Independent of the congruence solver; only feasible for small groups.
    """
    if M.ring is not N.ring:
        raise RingMismatch(f"{M.name} and {N.name} are over different rings")
    bM = M.basis
    ords = _element_orders(N)
    choices = [np.flatnonzero(d % ords == 0) for d in bM.orders]
    found = []
    for combo in all_vectors([len(c) for c in choices]):
        imgs = [int(choices[i][c]) for i, c in enumerate(combo)]
        table = np.zeros(M.order, dtype=np.int64)
        for x in range(M.order):
            acc = 0
            for i, c in enumerate(bM.coords[x]):
                for _ in range(int(c)):
                    acc = int(N.add[acc, imgs[i]])
            table[x] = acc
        if (table[M.act] == N.act[table]).all():
            found.append(table)
    tabs = np.array(found, dtype=np.int64).reshape(len(found), M.order)
    return tabs[np.lexsort(tabs.T[::-1])]


class EndRing:
    """End_R(M) as a FiniteRing, with ring multiplication = composition (f*g = f o g)."""

    def __init__(self, base: RightModule, homs: list[ModuleHom]):
        self.base = base
        self.homs = homs
        n = len(homs)
        tabs = np.stack([h.table for h in homs])
        self._index = {t.tobytes(): i for i, t in enumerate(tabs.astype(np.int32))}
        add = np.empty((n, n), dtype=np.int64)
        mul = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            sums = base.add[tabs[i][None, :], tabs]
            comps = tabs[i][tabs]
            add[i] = [self._index[s.astype(np.int32).tobytes()] for s in sums]
            mul[i] = [self._index[c.astype(np.int32).tobytes()] for c in comps]
        one = self._index[np.arange(base.order, dtype=np.int32).tobytes()]
        self.ring = FiniteRing(add, mul, one, name=f"End({base.name})")

    def index(self, h: ModuleHom) -> int:
        return self._index[np.asarray(h.table, dtype=np.int32).tobytes()]

    def __len__(self) -> int:
        return len(self.homs)


def end_ring(M: RightModule) -> EndRing:
    space = hom_group(M, M)
    cap = get_config().max_end_ring
    if space.count > cap:
        raise CapExceeded(f"End({M.name})", space.count, cap)
    return EndRing(M, space.homs())


def idempotents(ring: FiniteRing) -> list[int]:
    idx = np.arange(ring.order)
    return [int(e) for e in np.flatnonzero(ring.mul[idx, idx] == idx)]


def idempotent_tables(tabs: np.ndarray) -> np.ndarray:
    """Rows f of a stack of endomorphism tables with f o f = f."""
    comp = np.take_along_axis(tabs, tabs, axis=1)
    return tabs[(comp == tabs).all(axis=1)]
