"""Finite groups on index sets, with closure, cosets and validation.

A group is a set of elements indexed 0..order-1 with a multiplication law.
Concrete backends either hold an explicit multiplication table or compute
products from structured labels (matrix entries, Heisenberg coordinates);
rows of the table are materialized lazily and cached, so groups far larger
than any sensible dense table remain usable for closure and coset work.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FiniteGroup",
    "TableGroup",
    "Subgroup",
    "subgroup_closure",
    "generates",
    "commutator_closure",
    "right_cosets",
    "GroupValidationError",
    "ClosureCapExceeded",
    "CLOSURE_CAP",
    "regular_rep_cap",
    "group_from_spec",
    "subgroup_from_spec",
]

CLOSURE_CAP = 10**6
_DEFAULT_REGULAR_REP_CAP = 6000
_FULL_ASSOC_CHECK_MAX = 200
_ASSOC_SAMPLES = 1000
_VALIDATION_SEED = 0xA2


def regular_rep_cap() -> int:
    """Order cap for dense regular-representation work (env KAZHDAN_LAB_CAP overrides)."""
    value = os.environ.get("KAZHDAN_LAB_CAP")
    return int(value) if value else _DEFAULT_REGULAR_REP_CAP


class GroupValidationError(ValueError):
    pass


class ClosureCapExceeded(RuntimeError):
    def __init__(self, cap: int, reached: int):
        super().__init__(f"closure exceeded the cap of {cap} elements (reached {reached})")
        self.cap = cap
        self.reached = reached


class FiniteGroup:
    """Base class; subclasses provide ``order``, ``_mul`` and ``_inv``."""

    order: int
    identity: int = 0

    def __init__(self) -> None:
        self._row_cache: dict[int, np.ndarray] = {}

    # -- core law, implemented by backends -----------------------------------
    def _mul(self, i: int, j: int) -> int:
        raise NotImplementedError

    def _inv(self, i: int) -> int:
        raise NotImplementedError

    def label(self, i: int) -> str:
        return str(i)

    # -- derived operations ---------------------------------------------------
    def mul(self, i: int, j: int) -> int:
        return self._mul(i, j)

    def inv(self, i: int) -> int:
        return self._inv(i)

    def conjugate(self, g: int, x: int) -> int:
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, i: int, j: int) -> int:
        """[i, j] = i^-1 j^-1 i j."""
        return self.mul(self.mul(self.mul(self.inv(i), self.inv(j)), i), j)

    def mul_row(self, i: int) -> np.ndarray:
        """Permutation x -> i*x over all elements, cached."""
        row = self._row_cache.get(i)
        if row is None:
            row = self._mul_row_impl(i)
            self._row_cache[i] = row
        return row

    def _mul_row_impl(self, i: int) -> np.ndarray:
        return np.fromiter(
            (self._mul(i, j) for j in range(self.order)), dtype=np.int64, count=self.order
        )

    def table(self, max_order: int = 4096) -> np.ndarray:
        if self.order > max_order:
            raise ValueError(f"refusing to materialize a {self.order}^2 table")
        return np.vstack([self.mul_row(i) for i in range(self.order)])

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            k += 1
        return k

    def is_abelian_on(self, indices: Sequence[int]) -> bool:
        idx = list(indices)
        return all(
            self.mul(a, b) == self.mul(b, a) for ai, a in enumerate(idx) for b in idx[ai + 1 :]
        )

    # -- validation ------------------------------------------------------------
    def validate(self) -> None:
        """Identity/inverse laws everywhere; associativity full for small orders, sampled beyond."""
        e = self.identity
        for i in range(self.order):
            if self.mul(e, i) != i or self.mul(i, e) != i:
                raise GroupValidationError(f"identity law fails at element {i}")
            j = self.inv(i)
            if self.mul(i, j) != e or self.mul(j, i) != e:
                raise GroupValidationError(f"inverse law fails at element {i}")
        n = self.order
        if n <= _FULL_ASSOC_CHECK_MAX:
            tab = self.table(max_order=_FULL_ASSOC_CHECK_MAX)
            left = tab[tab]  # [a,b,c] -> (a*b)*c
            right = tab[:, tab]  # [a,b,c] -> a*(b*c)
            if not np.array_equal(left, right):
                raise GroupValidationError("associativity fails")
        else:
            rng = random.Random(_VALIDATION_SEED)
            for _ in range(_ASSOC_SAMPLES):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise GroupValidationError(f"associativity fails at ({a},{b},{c})")


class TableGroup(FiniteGroup):
    """Group given by an explicit multiplication table of element indices."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None):
        super().__init__()
        tab = np.asarray(table, dtype=np.int64)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1]:
            raise GroupValidationError("table must be square")
        n = tab.shape[0]
        if tab.min() < 0 or tab.max() >= n:
            raise GroupValidationError("table entries out of range")
        self._table = tab
        self.order = n
        ident = None
        for e in range(n):
            if np.array_equal(tab[e], np.arange(n)) and np.array_equal(tab[:, e], np.arange(n)):
                ident = e
                break
        if ident is None:
            raise GroupValidationError("table has no identity element")
        self.identity = ident
        self._inverse = np.full(n, -1, dtype=np.int64)
        for i in range(n):
            js = np.where(tab[i] == ident)[0]
            if js.size != 1 or tab[js[0], i] != ident:
                raise GroupValidationError(f"element {i} has no two-sided inverse")
            self._inverse[i] = js[0]
        self._labels = [str(x) for x in labels] if labels is not None else None
        self.validate()

    def _mul(self, i: int, j: int) -> int:
        return int(self._table[i, j])

    def _inv(self, i: int) -> int:
        return int(self._inverse[i])

    def _mul_row_impl(self, i: int) -> np.ndarray:
        return self._table[i]

    def label(self, i: int) -> str:
        return self._labels[i] if self._labels else str(i)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``group`` as a sorted tuple of element indices."""

    group: FiniteGroup
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(set(self.indices))))

    @property
    def order(self) -> int:
        return len(self.indices)

    def index_set(self) -> frozenset[int]:
        return frozenset(self.indices)

    def contains(self, i: int) -> bool:
        return i in self.index_set()

    def verify_closed(self) -> None:
        g = self.group
        members = self.index_set()
        if g.identity not in members:
            raise GroupValidationError("subgroup misses the identity")
        for a in self.indices:
            if g.inv(a) not in members:
                raise GroupValidationError("subgroup not closed under inverses")
            for b in self.indices:
                if g.mul(a, b) not in members:
                    raise GroupValidationError("subgroup not closed under products")

    def is_abelian(self) -> bool:
        return self.group.is_abelian_on(self.indices)

    def is_normal(self) -> bool:
        g = self.group
        members = self.index_set()
        gens = range(g.order)
        return all(g.conjugate(x, h) in members for x in gens for h in self.indices)


def subgroup_closure(group: FiniteGroup, generators: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing the generators (BFS over right multiplication)."""
    gens = sorted(set(int(g) for g in generators))
    if not gens:
        raise ValueError("generator set must be nonempty")
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(group, tuple(seen))


def generates(group: FiniteGroup, elements: Iterable[int]) -> bool:
    return subgroup_closure(group, elements).order == group.order


def commutator_closure(group: FiniteGroup, left: Subgroup, right: Subgroup) -> Subgroup:
    """Subgroup generated by all commutators [a, b], a in left, b in right."""
    comms = {
        group.commutator(a, b) for a in left.indices for b in right.indices
    }
    comms.add(group.identity)
    return subgroup_closure(group, comms)


def right_cosets(group: FiniteGroup, sub: Subgroup) -> np.ndarray:
    """Coset id per element for the cosets H*x (H acting on the left)."""
    n = group.order
    rows = np.vstack([group.mul_row(h) for h in sub.indices])
    coset_id = np.full(n, -1, dtype=np.int64)
    next_id = 0
    for x in range(n):
        if coset_id[x] < 0:
            coset_id[rows[:, x]] = next_id
            next_id += 1
    return coset_id


def group_from_spec(spec: dict) -> FiniteGroup:
    """Build a group from {"type": "heisenberg"|"EL"|"table", ...}."""
    kind = spec.get("type")
    if kind == "table":
        return TableGroup(spec["mult"], labels=spec.get("labels"))
    if kind == "heisenberg":
        from .nilpotent import heisenberg

        return heisenberg(int(spec["p"])).group
    if kind == "EL":
        from .eln import eln_group

        ring = spec.get("ring", {})
        return eln_group(int(spec["n"]), int(ring["mod"]))
    raise ValueError(f"unknown group spec type {kind!r}")


def subgroup_from_spec(group: FiniteGroup, generators: Sequence) -> Subgroup:
    """Subgroup generated by element indices or (for matrix groups) matrix literals."""
    gens: list[int] = []
    for item in generators:
        if isinstance(item, (int, np.integer)):
            gens.append(int(item))
            continue
        lookup = getattr(group, "element_index", None)
        if lookup is None:
            raise ValueError("matrix literals need a matrix-backed group")
        gens.append(lookup(np.asarray(item)))
    return subgroup_closure(group, gens)
