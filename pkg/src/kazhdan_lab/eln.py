"""Groups generated by elementary matrices over Z/m, block root subgroups,
and the commutation axioms of six-subgroup root systems.

For n >= 3 the rows/columns split into three consecutive intervals of sizes
[n/3], [(n+1)/3], [(n+2)/3]; the six off-diagonal blocks give abelian
subgroups X_ij (i != j in {1,2,3}) with [X_ij, X_jk] = X_ik, and vertex
groups G_ij generated by X_ik and X_kj.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import (
    CLOSURE_CAP,
    ClosureCapExceeded,
    FiniteGroup,
    GroupValidationError,
    Subgroup,
    commutator_closure,
    subgroup_closure,
)

__all__ = [
    "MatrixGroupZm",
    "matrix_group",
    "eln_group",
    "elementary_matrix",
    "block_partition",
    "ElnRootSystem",
    "eln_root_subgroups",
    "A2Report",
    "verify_a2_system",
]


def _inverse_mod(mat: np.ndarray, m: int) -> np.ndarray:
    """Inverse of an integer matrix mod m via the adjugate; raises if not a unit."""
    det = _int_det(mat.tolist())
    try:
        det_inv = pow(det % m, -1, m)
    except ValueError:
        raise GroupValidationError("matrix is not invertible over Z/m") from None
    adj = _adjugate(mat.tolist())
    return (det_inv * np.asarray(adj, dtype=np.int64)) % m


def _int_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j, head in enumerate(rows[0]):
        if head == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * head * _int_det(minor)
    return total


def _adjugate(rows: list[list[int]]) -> list[list[int]]:
    n = len(rows)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]
            cof = (-1) ** (i + j) * (_int_det(minor) if minor else 1)
            adj[j][i] = cof
    return adj


class MatrixGroupZm(FiniteGroup):
    """Finite group of n x n matrices over Z/m, enumerated by closure."""

    def __init__(self, n: int, m: int, elements: np.ndarray):
        super().__init__()
        self.n = n
        self.m = m
        self._elements = elements.astype(np.int64)  # (order, n, n)
        self.order = elements.shape[0]
        self._index = {self._key(elements[i]): i for i in range(self.order)}
        eye = np.eye(n, dtype=np.int64)
        self.identity = self._index[self._key(eye)]
        self.validate()

    @staticmethod
    def _key(mat: np.ndarray) -> bytes:
        return mat.astype(np.int64).tobytes()

    @classmethod
    def from_generators(
        cls,
        n: int,
        m: int,
        generators: Sequence[np.ndarray],
        cap: int = CLOSURE_CAP,
    ) -> "MatrixGroupZm":
        if m < 2:
            raise ValueError("modulus must be >= 2")
        gens = [np.asarray(g, dtype=np.int64) % m for g in generators]
        for g in gens:
            if g.shape != (n, n):
                raise ValueError("generators must be n x n matrices")
            _inverse_mod(g, m)  # raises for non-invertible input
        eye = np.eye(n, dtype=np.int64)
        seen = {cls._key(eye): 0}
        elems = [eye]
        frontier = [eye]
        while frontier:
            block = np.stack(frontier)
            nxt = []
            for g in gens:
                prods = (block @ g) % m
                for p in prods:
                    key = cls._key(p)
                    if key not in seen:
                        seen[key] = len(elems)
                        elems.append(p)
                        nxt.append(p)
                        if len(elems) > cap:
                            raise ClosureCapExceeded(cap, len(elems))
            frontier = nxt
        return cls(n, m, np.stack(elems))

    def element_index(self, mat: np.ndarray) -> int:
        key = self._key(np.asarray(mat, dtype=np.int64) % self.m)
        if key not in self._index:
            raise KeyError("matrix is not an element of the group")
        return self._index[key]

    def matrix_of(self, i: int) -> np.ndarray:
        return self._elements[i].copy()

    def _mul(self, i: int, j: int) -> int:
        prod = (self._elements[i] @ self._elements[j]) % self.m
        return self._index[self._key(prod)]

    def _inv(self, i: int) -> int:
        return self._index[self._key(_inverse_mod(self._elements[i], self.m))]

    def _mul_row_impl(self, i: int) -> np.ndarray:
        prods = (self._elements[i] @ self._elements) % self.m
        return np.fromiter(
            (self._index[self._key(p)] for p in prods), dtype=np.int64, count=self.order
        )

    def label(self, i: int) -> str:
        rows = self._elements[i]
        return "|".join("".join(str(int(x)) for x in row) for row in rows)


def elementary_matrix(n: int, i: int, j: int, r: int, m: int) -> np.ndarray:
    """Identity plus r in position (i, j), 1-based indices, entries mod m."""
    if i == j:
        raise ValueError("elementary matrices are off-diagonal")
    mat = np.eye(n, dtype=np.int64)
    mat[i - 1, j - 1] = r % m
    return mat


def matrix_group(
    n: int, m: int, generators: Sequence[np.ndarray], cap: int = CLOSURE_CAP
) -> MatrixGroupZm:
    return MatrixGroupZm.from_generators(n, m, generators, cap=cap)


def eln_group(n: int, m: int, cap: int = CLOSURE_CAP) -> MatrixGroupZm:
    """Group generated by all elementary matrices e_ij(r) over Z/m."""
    gens = [
        elementary_matrix(n, i, j, r, m)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
        for r in range(1, m)
    ]
    return matrix_group(n, m, gens, cap=cap)


def block_partition(n: int) -> tuple[list[int], list[int], list[int]]:
    """Split 1..n into three consecutive intervals of sizes [n/3], [(n+1)/3], [(n+2)/3]."""
    if n < 3:
        raise ValueError("n must be at least 3")
    a, b, c = n // 3, (n + 1) // 3, (n + 2) // 3
    i1 = list(range(1, a + 1))
    i2 = list(range(a + 1, a + b + 1))
    i3 = list(range(a + b + 1, a + b + c + 1))
    return i1, i2, i3


@dataclass(frozen=True)
class ElnRootSystem:
    """EL_n(Z/m) with its six block subgroups and vertex groups."""

    group: MatrixGroupZm
    n: int
    m: int
    intervals: tuple[list[int], list[int], list[int]]
    blocks: dict  # (i, j) -> Subgroup, i != j in {1, 2, 3}
    vertex_groups: dict  # (i, j) -> Subgroup

    def block_generators(self) -> list[int]:
        """Indices of all nonidentity elements of the six blocks."""
        out: set[int] = set()
        for sub in self.blocks.values():
            out |= set(sub.indices)
        out.discard(self.group.identity)
        return sorted(out)


def eln_root_subgroups(n: int, m: int, cap: int = CLOSURE_CAP) -> ElnRootSystem:
    group = eln_group(n, m, cap=cap)
    intervals = block_partition(n)
    blocks: dict[tuple[int, int], Subgroup] = {}
    for bi in range(1, 4):
        for bj in range(1, 4):
            if bi == bj:
                continue
            gens = [
                group.element_index(elementary_matrix(n, i, j, r, m))
                for i in intervals[bi - 1]
                for j in intervals[bj - 1]
                for r in range(1, m)
            ]
            blocks[(bi, bj)] = subgroup_closure(group, gens)
    vertex: dict[tuple[int, int], Subgroup] = {}
    for bi in range(1, 4):
        for bj in range(1, 4):
            if bi == bj:
                continue
            bk = ({1, 2, 3} - {bi, bj}).pop()
            gens = set(blocks[(bi, bk)].indices) | set(blocks[(bk, bj)].indices)
            vertex[(bi, bj)] = subgroup_closure(group, gens)
    return ElnRootSystem(group, n, m, intervals, blocks, vertex)


@dataclass(frozen=True)
class A2Report:
    ok: bool
    failed_axiom: str | None
    details: dict

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.ok


def _commute(group: FiniteGroup, left: Subgroup, right: Subgroup) -> bool:
    return all(
        group.mul(a, b) == group.mul(b, a) for a in left.indices for b in right.indices
    )


def verify_a2_system(group: FiniteGroup, blocks: dict) -> A2Report:
    """Check the six-subgroup commutation axioms.

    For every permutation (i, j, k) of {1, 2, 3}: (a) X_ij abelian,
    (b) X_ij and X_ik commute, (c) X_ji and X_ki commute,
    (d) the subgroup generated by commutators [X_ij, X_jk] equals X_ik.
    Reports the first violated axiom.
    """
    pairs = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j]
    if sorted(blocks) != sorted(pairs):
        raise ValueError("exactly the six ordered-pair subgroups are required")
    perms = [
        (i, j, k)
        for i in (1, 2, 3)
        for j in (1, 2, 3)
        for k in (1, 2, 3)
        if len({i, j, k}) == 3
    ]
    for i, j, _ in perms:
        if not blocks[(i, j)].is_abelian():
            return A2Report(False, "a", {"pair": (i, j)})
    for i, j, k in perms:
        if not _commute(group, blocks[(i, j)], blocks[(i, k)]):
            return A2Report(False, "b", {"pairs": ((i, j), (i, k))})
        if not _commute(group, blocks[(j, i)], blocks[(k, i)]):
            return A2Report(False, "c", {"pairs": ((j, i), (k, i))})
    for i, j, k in perms:
        derived = commutator_closure(group, blocks[(i, j)], blocks[(j, k)])
        if derived.index_set() != blocks[(i, k)].index_set():
            return A2Report(False, "d", {"triple": (i, j, k)})
    return A2Report(True, None, {})
