"""Finite abelian groups given by addition tables, and linear congruences.

Everything in this package is a finite abelian group underneath.  This module
finds a basis of cyclic prime-power summands for a group presented by its
addition table, and solves homogeneous linear systems over ``Z/p^e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_of(q: int) -> int:
    """The prime p of a prime power q = p^e (q > 1)."""
    (p,) = factorize(q)
    return p


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)


@dataclass(frozen=True, eq=False)
class GroupBasis:
    """A decomposition G = (+) <g_i>, each g_i of prime-power order.

    ``coords[x]`` holds the coordinates of element ``x``; ``index_of`` maps a
    coordinate vector back to the element.  Basis elements are grouped by
    prime (ascending), and by decreasing order within a prime.
    """

    gens: tuple[int, ...]
    orders: tuple[int, ...]
    coords: np.ndarray
    lookup: np.ndarray
    radix: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.gens)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders)

    def index_of(self, vecs: np.ndarray) -> np.ndarray:
        """Element indices of coordinate vectors (last axis), reduced mod the orders."""
        vecs = np.mod(vecs, np.asarray(self.orders, dtype=np.int64))
        if self.rank == 0:
            return np.zeros(vecs.shape[:-1], dtype=np.int64)
        return self.lookup[vecs @ self.radix]


def mixed_radix(orders) -> np.ndarray:
    """Place values for lexicographic indexing (first coordinate most significant)."""
    out = np.ones(len(orders), dtype=np.int64)
    for i in range(len(orders) - 2, -1, -1):
        out[i] = out[i + 1] * orders[i + 1]
    return out


def all_vectors(orders) -> np.ndarray:
    """Every coordinate vector, in lexicographic order."""
    if len(orders) == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(o) for o in orders], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def element_orders(add: np.ndarray) -> np.ndarray:
    n = add.shape[0]
    ords = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    cur = idx.copy()
    k = 1
    while True:
        done = (cur == 0) & (ords == 0)
        ords[done] = k
        if (ords > 0).all():
            return ords
        cur = add[cur, idx]
        k += 1
        if k > n + 1:
            raise ValueError("addition table is not a group")


def decompose(add: np.ndarray) -> GroupBasis:
    """Basis of prime-power cyclic summands for the group with table ``add``.

    Greedy: repeatedly take a coset of maximal order in G_p / H and lift it to
    an element of the same order.  H stays a direct summand throughout, so the
    lift exists and the resulting cyclic groups are independent.
    """
    n = add.shape[0]
    ords = element_orders(add)
    idx = np.arange(n)
    gens: list[int] = []
    orders: list[int] = []
    for p in sorted(factorize(n)):
        in_p = np.array([factorize(int(o)).keys() <= {p} for o in ords])
        size_p = int(in_p.sum())
        sub = np.zeros(n, dtype=bool)
        sub[0] = True
        while int(sub.sum()) < size_p:
            # order of x modulo the subgroup generated so far
            rel = np.zeros(n, dtype=np.int64)
            cur = idx.copy()
            k = 1
            while (rel[in_p] == 0).any():
                hit = sub[cur] & (rel == 0)
                rel[hit] = k
                cur = add[cur, idx]
                k += 1
            rel[~in_p] = 0
            best = int(rel.max())
            x = int(np.flatnonzero(rel == best)[0])
            coset = add[x, np.flatnonzero(sub)]
            y = int(coset[ords[coset] == best].min())
            gens.append(y)
            orders.append(best)
            # sub := sub + <y>
            members = np.flatnonzero(sub)
            new = sub.copy()
            shift = members
            for _ in range(best - 1):
                shift = add[shift, y]
                new[shift] = True
            sub = new
    coords = np.zeros((n, len(gens)), dtype=np.int64)
    vecs = all_vectors(orders)
    elems = np.zeros(len(vecs), dtype=np.int64)
    for j, (g, o) in enumerate(zip(gens, orders)):
        mult = np.zeros(o, dtype=np.int64)
        for c in range(1, o):
            mult[c] = add[mult[c - 1], g]
        elems = add[elems, mult[vecs[:, j]]]
    if len(np.unique(elems)) != n:
        raise AssertionError("basis does not span the group")
    coords[elems] = vecs
    radix = mixed_radix(orders)
    lookup = np.empty(n, dtype=np.int64)
    lookup[vecs @ radix if len(gens) else np.zeros(1, dtype=np.int64)] = elems
    return GroupBasis(tuple(gens), tuple(orders), coords, lookup, radix)


def canonical_permutation(basis: GroupBasis) -> np.ndarray:
    """``perm[new] = old`` ordering elements by lexicographic coordinates."""
    if basis.rank == 0:
        return np.zeros(1, dtype=np.int64)
    return basis.lookup.copy()


# ---------------------------------------------------------------------------
# homogeneous congruences over Z/p^e


def _valuation(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def kernel_prime_power(A: np.ndarray, p: int, e: int) -> tuple[np.ndarray, list[int]]:
    """Independent generators of {x : A x = 0 mod p^e}, with their orders.

    Diagonalises A by row operations and tracked unimodular column operations.
    Z/p^e is a chain ring, so the pivot of least valuation divides every
    other entry and no Euclidean steps are needed.  Every kernel element is a
    unique combination sum(c_i g_i) with 0 <= c_i < order_i.
    """
    q = p**e
    A = np.mod(np.array(A, dtype=np.int64), q)
    m, d = A.shape
    Q = np.eye(d, dtype=np.int64)
    # valuation lookup for residues mod q
    val = np.full(q, e, dtype=np.int64)
    for a in range(1, q):
        val[a] = _valuation(a, p)
    gens: list[np.ndarray] = []
    orders: list[int] = []
    t = 0
    while t < min(m, d):
        sub = A[t:, t:]
        vals = val[sub]
        v = int(vals.min())
        if v >= e:
            break
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        i += t
        j += t
        A[[t, i]] = A[[i, t]]
        A[:, [t, j]] = A[:, [j, t]]
        Q[:, [t, j]] = Q[:, [j, t]]
        unit = int(A[t, t]) // p**v
        inv = pow(unit, -1, q)
        A[:, t] = (A[:, t] * inv) % q
        Q[:, t] = (Q[:, t] * inv) % q
        pv = p**v
        # clear row t with column operations
        factors = A[t, t + 1 :] // pv
        if factors.any():
            A[:, t + 1 :] = (A[:, t + 1 :] - np.outer(A[:, t], factors)) % q
            Q[:, t + 1 :] = (Q[:, t + 1 :] - np.outer(Q[:, t], factors)) % q
        # clear column t with row operations
        factors = A[t + 1 :, t] // pv
        if factors.any():
            A[t + 1 :, :] = (A[t + 1 :, :] - np.outer(factors, A[t, :])) % q
        if v > 0:
            gens.append((Q[:, t] * p ** (e - v)) % q)
            orders.append(pv)
        t += 1
    for j in range(t, d):
        gens.append(Q[:, j] % q)
        orders.append(q)
    if gens:
        return np.stack(gens), orders
    return np.zeros((0, d), dtype=np.int64), orders


def span_elements(gens: np.ndarray, orders, moduli) -> np.ndarray:
    """All combinations sum(c_i gens[i]) with 0 <= c_i < orders[i], reduced mod moduli.

    Rows come out in lexicographic order of the coefficient vector.
    """
    moduli = np.asarray(moduli, dtype=np.int64)
    coeffs = all_vectors(list(orders))
    if len(gens) == 0:
        return np.zeros((1, len(moduli)), dtype=np.int64)
    return np.mod(coeffs @ gens, moduli)
