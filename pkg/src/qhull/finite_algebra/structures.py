"""Finite unital rings, finite right modules, homomorphisms and submodules.

Elements are integer indices ``0..order-1`` and ``0`` is always the additive
identity.  Structures are immutable once built; the tables are read-only
numpy arrays so values can be shared freely.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import (
    NoUnity,
    NotAGroup,
    NotASubmodule,
    NotAssociative,
    NotDistributive,
    NotLinear,
    NotUnital,
    RingMismatch,
)
from .abelian import GroupBasis, decompose, lcm

_FULL_CHECK = 300


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int32)
    a.setflags(write=False)
    return a


def _first(mask: np.ndarray):
    """Index tuple of the first True entry, or None."""
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def _magma_generators(add: np.ndarray) -> list[int]:
    n = add.shape[0]
    span = np.zeros(n, dtype=bool)
    span[0] = True
    gens: list[int] = []
    for x in range(n):
        if span[x]:
            continue
        gens.append(x)
        members = np.flatnonzero(span)
        while True:
            closed = np.unique(np.concatenate([members, add[np.ix_(members, gens)].ravel()]))
            if len(closed) == len(members):
                break
            members = closed
        span[members] = True
    return gens


def _first_triple(bad_fn, n: int, chunk: int = 32):
    """First (a, b, c) where ``bad_fn(a_slice)`` flags a violation, scanning a in chunks."""
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        w = _first(bad_fn(a))
        if w:
            return (int(a[w[0]]),) + w[1:]
    return None


def _check_group(add: np.ndarray, what: str) -> None:
    n = add.shape[0]
    if add.ndim != 2 or add.shape != (n, n):
        raise NotAGroup(f"{what}: addition table must be square")
    if add.min() < 0 or add.max() >= n:
        raise NotAGroup(f"{what}: addition table index out of range")
    idx = np.arange(n)
    bad = np.flatnonzero((add[0] != idx) | (add[:, 0] != idx))
    if len(bad):
        raise NotAGroup(f"{what}: 0 is not an identity (element {int(bad[0])})")
    w = _first(add != add.T)
    if w:
        raise NotAGroup(f"{what}: addition not commutative at {w}")
    for x in range(n):
        if len(np.unique(add[x])) != n:
            raise NotAGroup(f"{what}: row {x} of the addition table is not a permutation")
    bs = idx if n <= _FULL_CHECK else np.array(_magma_generators(add))
    w = _first_triple(
        lambda a: add[add[a][:, bs][:, :, None], idx[None, None, :]]
        != add[a[:, None, None], add[bs][None, :, :]],
        n,
    )
    if w:
        raise NotAGroup(f"{what}: addition not associative at {(w[0], int(bs[w[1]]), w[2])}")


class FiniteRing:
    """A finite unital ring given by its addition and multiplication tables."""

    def __init__(self, add, mul, one: int, name: str = "R"):
        self.add = _frozen(add)
        self.mul = _frozen(mul)
        self.one = int(one)
        self.name = name
        self.order = self.add.shape[0]

    def __repr__(self) -> str:
        return f"FiniteRing({self.name!r}, order={self.order})"

    @cached_property
    def neg(self) -> np.ndarray:
        return _frozen(np.argmax(self.add == 0, axis=1))

    @cached_property
    def basis(self) -> GroupBasis:
        return decompose(self.add)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.basis.orders

    @cached_property
    def char(self) -> int:
        return lcm(*self.basis.orders)

    @cached_property
    def is_commutative(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def regular_module(self) -> "RightModule":
        m = RightModule(self, self.add, self.mul, label="R_R", name=f"{self.name}_R")
        m.__dict__["basis"] = self.basis
        return m

    def elements(self) -> range:
        return range(self.order)

    def same_tables(self, other: "FiniteRing") -> bool:
        return (
            self.order == other.order
            and self.one == other.one
            and bool((self.add == other.add).all())
            and bool((self.mul == other.mul).all())
        )


def validate_ring(add, mul, one: int, name: str = "R") -> FiniteRing:
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    n = add.shape[0]
    if mul.shape != (n, n):
        raise NotAGroup("multiplication table has the wrong shape")
    if mul.min() < 0 or mul.max() >= n or not 0 <= one < n:
        raise NotAGroup("multiplication table index out of range")
    _check_group(add, name)
    idx = np.arange(n)
    b, c = idx[None, :, None], idx[None, None, :]
    w = _first_triple(lambda a: mul[mul[a[:, None, None], b], c] != mul[a[:, None, None], mul[b, c]], n)
    if w:
        raise NotAssociative(f"{name}: (ab)c != a(bc) at {w}")
    w = _first_triple(
        lambda a: mul[add[a[:, None, None], b], c] != add[mul[a[:, None, None], c], mul[b, c]], n
    )
    if w:
        raise NotDistributive(f"{name}: (a+b)c != ac+bc at {w}")
    w = _first_triple(
        lambda a: mul[a[:, None, None], add[b, c]] != add[mul[a[:, None, None], b], mul[a[:, None, None], c]], n
    )
    if w:
        raise NotDistributive(f"{name}: a(b+c) != ab+ac at {w}")
    bad = np.flatnonzero((mul[one] != idx) | (mul[:, one] != idx))
    if len(bad):
        raise NoUnity(f"{name}: element {one} is not a two-sided identity (fails at {int(bad[0])})")
    return FiniteRing(add, mul, one, name)


class RightModule:
    """A finite unital right module over a ``FiniteRing``.

    ``act[m, r]`` is the index of ``m.r``.
    """

    def __init__(self, ring: FiniteRing, add, act, label: str = "", name: str = "M"):
        self.ring = ring
        self.add = _frozen(add)
        self.act = _frozen(act)
        self.label = label
        self.name = name
        self.order = self.add.shape[0]

    def __repr__(self) -> str:
        return f"RightModule({self.name!r}, order={self.order}, over={self.ring.name!r})"

    @cached_property
    def neg(self) -> np.ndarray:
        return _frozen(np.argmax(self.add == 0, axis=1))

    @cached_property
    def basis(self) -> GroupBasis:
        return decompose(self.add)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.basis.orders

    @cached_property
    def nonzero_act(self) -> np.ndarray:
        """``nonzero_act[m, r]`` is True iff m.r != 0."""
        out = self.act != 0
        out.setflags(write=False)
        return out

    @property
    def is_zero(self) -> bool:
        return self.order == 1

    def same_tables(self, other: "RightModule") -> bool:
        return (
            self.order == other.order
            and self.ring.same_tables(other.ring)
            and bool((self.add == other.add).all())
            and bool((self.act == other.act).all())
        )

    def sum_of(self, xs: Iterable[int]) -> int:
        acc = 0
        for x in xs:
            acc = int(self.add[acc, x])
        return acc

    def full(self) -> "Submodule":
        return Submodule(self, np.ones(self.order, dtype=bool))

    def zero_submodule(self) -> "Submodule":
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return Submodule(self, mask)


def module_from_action(ring: FiniteRing, add, act, label: str = "", name: str = "M") -> RightModule:
    add = np.asarray(add, dtype=np.int64)
    act = np.asarray(act, dtype=np.int64)
    n = add.shape[0]
    if act.shape != (n, ring.order):
        raise NotLinear(f"{name}: action table must be {n}x{ring.order}, got {act.shape}")
    if act.min() < 0 or act.max() >= n:
        raise NotLinear(f"{name}: action table index out of range")
    _check_group(add, name)
    idx = np.arange(n)
    R = np.arange(ring.order)
    bad = np.flatnonzero(act[:, ring.one] != idx)
    if len(bad):
        raise NotUnital(f"{name}: m.1 != m for m = {int(bad[0])}")
    gens = np.array(decompose(add).gens, dtype=np.int64)
    # additivity in m, on additive generators (induction covers the rest)
    w = _first_triple(
        lambda a: act[add[a[:, None, None], gens[None, :, None]], R[None, None, :]]
        != add[act[a][:, None, :], act[gens][None, :, :]],
        n,
    )
    if w:
        raise NotLinear(f"{name}: (a+b).r != a.r+b.r at {(w[0], int(gens[w[1]]), w[2])}")
    w = _first(act[idx[:, None, None], ring.add[R[:, None], R[None, :]][None]]
               != add[act[:, :, None], act[:, None, :]])
    if w:
        raise NotLinear(f"{name}: m.(r+s) != m.r+m.s at {w}")
    w = _first(act[act[:, :, None], R[None, None, :]] != act[idx[:, None, None], ring.mul[None]])
    if w:
        raise NotLinear(f"{name}: (m.r).s != m.(rs) at {w}")
    mod = RightModule(ring, add, act, label, name)
    if ring.char % mod.basis.exponent:
        raise NotLinear(f"{name}: additive exponent {mod.basis.exponent} does not divide char {ring.char}")
    return mod


class ModuleHom:
    """An R-linear map, stored as the full element table ``source -> target``."""

    def __init__(self, source: RightModule, target: RightModule, table):
        self.source = source
        self.target = target
        self.table = _frozen(table)

    def __repr__(self) -> str:
        return f"ModuleHom({self.source.name}->{self.target.name}, {self.table.tolist()})"

    def __call__(self, x):
        return self.table[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleHom)
            and self.source is other.source
            and self.target is other.target
            and bool((self.table == other.table).all())
        )

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        """Composition ``self o other``."""
        return ModuleHom(other.source, self.target, self.table[other.table])

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.target.add[self.table, other.table])

    @property
    def is_zero(self) -> bool:
        return not self.table.any()

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.table)) == self.source.order

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.table)) == self.target.order

    def kernel(self) -> "Submodule":
        return Submodule(self.source, self.table == 0)

    def image(self, sub: "Submodule | None" = None) -> "Submodule":
        mask = np.zeros(self.target.order, dtype=bool)
        mask[self.table if sub is None else self.table[sub.mask]] = True
        return Submodule(self.target, mask)

    def restrict(self, sub: "Submodule") -> np.ndarray:
        return self.table[sub.mask]

    def check(self) -> None:
        s, t = self.source, self.target
        if s.ring is not t.ring:
            raise RingMismatch("hom between modules over different rings")
        w = _first(self.table[s.add] != t.add[self.table[:, None], self.table[None, :]])
        if w:
            raise NotLinear(f"map not additive at {w}")
        w = _first(self.table[s.act] != t.act[self.table])
        if w:
            raise NotLinear(f"map not R-linear at {w}")


def identity_hom(M: RightModule) -> ModuleHom:
    return ModuleHom(M, M, np.arange(M.order))


def zero_hom(M: RightModule, N: RightModule) -> ModuleHom:
    return ModuleHom(M, N, np.zeros(M.order, dtype=np.int64))


class Submodule:
    """A submodule of ``ambient``, stored as a membership mask."""

    def __init__(self, ambient: RightModule, mask, check: bool = False):
        self.ambient = ambient
        mask = np.array(mask, dtype=bool)
        mask.setflags(write=False)
        self.mask = mask
        if check:
            self.check()

    @classmethod
    def from_members(cls, ambient: RightModule, members: Iterable[int]) -> "Submodule":
        mask = np.zeros(ambient.order, dtype=bool)
        mask[list(members)] = True
        return cls(ambient, mask, check=True)

    def check(self) -> None:
        M = self.ambient
        if not self.mask[0]:
            raise NotASubmodule("does not contain 0")
        mem = self.members
        w = _first(~self.mask[M.add[np.ix_(mem, mem)]])
        if w:
            raise NotASubmodule(f"not closed under addition at {(int(mem[w[0]]), int(mem[w[1]]))}")
        w = _first(~self.mask[M.act[mem]])
        if w:
            raise NotASubmodule(f"not closed under the action at {(int(mem[w[0]]), w[1])}")

    @cached_property
    def members(self) -> np.ndarray:
        out = np.flatnonzero(self.mask)
        out.setflags(write=False)
        return out

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def __contains__(self, x) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other) -> bool:
        return isinstance(other, Submodule) and self.ambient is other.ambient and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: "Submodule") -> bool:
        return bool((~self.mask | other.mask).all())

    def __lt__(self, other: "Submodule") -> bool:
        return self <= other and self.order < other.order

    def __and__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.ambient, self.mask & other.mask)

    def __add__(self, other: "Submodule") -> "Submodule":
        M = self.ambient
        mask = np.zeros(M.order, dtype=bool)
        mask[M.add[np.ix_(self.members, other.members)]] = True
        return Submodule(M, mask)

    def __repr__(self) -> str:
        return f"Submodule(order={self.order} of {self.ambient.name})"

    @property
    def is_zero(self) -> bool:
        return self.order == 1

    @property
    def is_full(self) -> bool:
        return bool(self.mask.all())

    @cached_property
    def _as_module(self) -> tuple[RightModule, ModuleHom]:
        M = self.ambient
        mem = self.members
        pos = np.full(M.order, -1, dtype=np.int64)
        pos[mem] = np.arange(len(mem))
        add = pos[M.add[np.ix_(mem, mem)]]
        act = pos[M.act[mem]]
        sub, perm = canonicalize(M.ring, add, act, label=M.label, name=f"sub({M.name})")
        return sub, ModuleHom(sub, M, mem[perm])

    def to_module(self) -> tuple[RightModule, ModuleHom]:
        """This submodule as a module of its own, with the inclusion map."""
        return self._as_module


def canonicalize(ring: FiniteRing, add, act, label: str = "", name: str = "M"):
    """Relabel a module so that element order is lexicographic in basis coordinates.

    Returns ``(module, perm)`` with ``perm[new] = old``.
    """
    add = np.asarray(add, dtype=np.int64)
    act = np.asarray(act, dtype=np.int64)
    basis = decompose(add)
    perm = basis.lookup.copy() if basis.rank else np.zeros(1, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    new_add = inv[add[np.ix_(perm, perm)]]
    new_act = inv[act[perm]]
    mod = RightModule(ring, new_add, new_act, label=label, name=name)
    return mod, perm


def submodule_generated(M: RightModule, gens: Sequence[int]) -> Submodule:
    """Smallest submodule containing ``gens``: the sum of the cyclic submodules xR."""
    mask = np.zeros(M.order, dtype=bool)
    mask[0] = True
    members = np.array([0], dtype=np.int64)
    for g in gens:
        cyc = np.unique(M.act[int(g)])
        if mask[cyc].all():
            continue
        members = np.unique(M.add[np.ix_(members, cyc)])
        mask[:] = False
        mask[members] = True
    return Submodule(M, mask)


def cyclic_submodule(M: RightModule, x: int) -> Submodule:
    mask = np.zeros(M.order, dtype=bool)
    mask[M.act[int(x)]] = True
    return Submodule(M, mask)


def right_ideal(R: FiniteRing, members: Iterable[int]) -> Submodule:
    return Submodule.from_members(R.regular_module, members)
