"""Constructors for the concrete rings used by the catalog and the tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import all_vectors, factorize, mixed_radix
from .structures import FiniteRing, validate_ring


def zmod(n: int) -> FiniteRing:
    idx = np.arange(n)
    return validate_ring((idx[:, None] + idx) % n, (idx[:, None] * idx) % n, 1 % n, name=f"Z/{n}")


def gf4() -> FiniteRing:
    """F_4 = F_2[a]/(a^2+a+1); index b1*2+b0 encodes b1*a + b0."""
    idx = np.arange(4)
    add = idx[:, None] ^ idx[None, :]

    def pmul(x: int, y: int) -> int:
        r = 0
        for i in range(2):
            if (y >> i) & 1:
                r ^= x << i
        if r & 4:
            r ^= 0b111
        return r

    mul = np.array([[pmul(x, y) for y in range(4)] for x in range(4)])
    return validate_ring(add, mul, 1, name="F4")


def field(q: int) -> FiniteRing:
    if q == 4:
        return gf4()
    if len(factorize(q)) == 1 and list(factorize(q).values()) == [1]:
        ring = zmod(q)
        ring.name = f"F{q}"
        return ring
    raise ValueError(f"no built-in field of order {q}")


def product_ring(*rings: FiniteRing, name: str | None = None) -> FiniteRing:
    orders = [R.order for R in rings]
    radix = mixed_radix(orders)
    T = all_vectors(orders)
    add = np.zeros((len(T), len(T)), dtype=np.int64)
    mul = np.zeros_like(add)
    for i, R in enumerate(rings):
        c = T[:, i]
        add += radix[i] * R.add[c[:, None], c[None, :]]
        mul += radix[i] * R.mul[c[:, None], c[None, :]]
    one = int(np.dot(radix, [R.one for R in rings]))
    return validate_ring(add, mul, one, name=name or "x".join(R.name for R in rings))


@dataclass(frozen=True, eq=False)
class MatrixRing:
    """A ring of n x n matrices over ``base``; ``entries[x]`` is the matrix of element x."""

    ring: FiniteRing
    base: FiniteRing
    n: int
    entries: np.ndarray

    def index_of(self, mat) -> int:
        mat = np.asarray(mat)
        hits = np.flatnonzero((self.entries == mat).all(axis=(1, 2)))
        if len(hits) != 1:
            raise KeyError("matrix not in ring")
        return int(hits[0])

    def unit(self, i: int, j: int) -> int:
        mat = np.zeros((self.n, self.n), dtype=np.int64)
        mat[i, j] = self.base.one
        return self.index_of(mat)


def matrix_ring(base: FiniteRing, n: int, upper: bool = False, name: str | None = None) -> MatrixRing:
    """Mat_n(base), or its upper-triangular subring T_n(base) when ``upper``.

    Elements are ordered lexicographically by their free entries, read row by row.
    """
    free = [(i, j) for i in range(n) for j in range(n) if not upper or j >= i]
    vecs = all_vectors([base.order] * len(free))
    N = len(vecs)
    ent = np.zeros((N, n, n), dtype=np.int64)
    for c, (i, j) in enumerate(free):
        ent[:, i, j] = vecs[:, c]
    radix = mixed_radix([base.order] * len(free))

    def index(mats: np.ndarray) -> np.ndarray:
        return np.stack([mats[..., i, j] for i, j in free], axis=-1) @ radix

    A = ent[:, None]
    B = ent[None, :]
    add = index(base.add[A, B])
    prod = np.zeros((N, N, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            acc = np.zeros((N, N), dtype=np.int64)
            for k in range(n):
                acc = base.add[acc, base.mul[ent[:, None, i, k], ent[None, :, k, j]]]
            prod[:, :, i, j] = acc
    mul = index(prod)
    eye = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        eye[i, i] = base.one
    one = int(index(eye[None])[0])
    label = name or (f"T{n}({base.name})" if upper else f"Mat{n}({base.name})")
    return MatrixRing(validate_ring(add, mul, one, name=label), base, n, ent)
