"""Unitary representations of finite groups and group-level orthogonality data.

The key computational device is the regular representation on functions on the
group: its complement of the constants contains every nontrivial irreducible
representation, so suprema over all representations without invariant vectors
(orthogonality constants, codistances) are attained there.  Fixed subspaces of
subgroups have explicit orthonormal bases built from coset indicators, which
keeps the analysis at O(|G| x cosets) memory instead of |G|^2.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    Subgroup,
    regular_rep_cap,
    right_cosets,
    subgroup_closure,
)
from .subspaces import Subspace, codistance as subspace_codistance

__all__ = [
    "UnitaryRep",
    "fixed_subspace",
    "RegularRepComplement",
    "regular_rep_complement",
    "coset_fixed_basis",
    "group_epsilon",
    "group_codistance",
    "kazhdan_spectral_lower",
    "cayley_laplacian_gap",
    "CapExceeded",
]

_REP_CHECK_TOL = 1e-10
_REP_CHECK_PAIRS = 400


class CapExceeded(RuntimeError):
    pass


def _check_cap(group: FiniteGroup, cap: int | None) -> None:
    limit = regular_rep_cap() if cap is None else cap
    if group.order > limit:
        raise CapExceeded(
            f"group of order {group.order} exceeds the dense-analysis cap {limit}"
        )


@dataclass
class UnitaryRep:
    """A unitary representation as one matrix per group element."""

    group: FiniteGroup
    dim: int
    matrices: np.ndarray  # (order, dim, dim) complex
    name: str = ""

    def matrix(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def validate(self, seed: int = 0xA2, pairs: int = _REP_CHECK_PAIRS) -> float:
        """Max unitarity/homomorphism residual over all elements and sampled pairs."""
        if self.dim == 0:
            return 0.0
        eye = np.eye(self.dim)
        resid = 0.0
        for i in range(self.group.order):
            m = self.matrices[i]
            resid = max(resid, float(np.max(np.abs(m.conj().swapaxes(-1, -2) @ m - eye))))
        rng = random.Random(seed)
        n = self.group.order
        sample = (
            [(i, j) for i in range(n) for j in range(n)]
            if n * n <= pairs
            else [(rng.randrange(n), rng.randrange(n)) for _ in range(pairs)]
        )
        for i, j in sample:
            lhs = self.matrices[self.group.mul(i, j)]
            rhs = self.matrices[i] @ self.matrices[j]
            resid = max(resid, float(np.max(np.abs(lhs - rhs))))
        if resid > _REP_CHECK_TOL:
            raise ValueError(f"representation residual {resid:.2e} exceeds {_REP_CHECK_TOL}")
        return resid


def fixed_subspace(rep: UnitaryRep, sub: Subgroup) -> Subspace:
    """Invariant vectors of a subgroup, via the averaging projector.

    The projector (1/|H|) sum over h of rho(h) is checked to be Hermitian and
    idempotent before its range is orthonormalized.
    """
    if sub.group is not rep.group:
        raise ValueError("subgroup belongs to a different group")
    if rep.dim == 0:
        raise ValueError("the representation is 0-dimensional")
    proj = rep.matrices[list(sub.indices)].mean(axis=0)
    herm = float(np.max(np.abs(proj - proj.conj().T)))
    idem = float(np.max(np.abs(proj @ proj - proj)))
    if max(herm, idem) > _REP_CHECK_TOL:
        raise ValueError("averaging operator is not a projector to tolerance")
    vals, vecs = np.linalg.eigh((proj + proj.conj().T) / 2)
    keep = vals > 0.5
    return Subspace(vecs[:, keep], ambient_dim=rep.dim)


# -- regular representation --------------------------------------------------

def _helmert_coordinates(block: np.ndarray) -> np.ndarray:
    """Coordinates of columns (orthogonal to the constants) in the Helmert basis.

    Row k (1-based) of the basis is (1,...,1,-k,0,...,0)/sqrt(k(k+1)); the map
    preserves inner products on the orthogonal complement of the constants.
    """
    n = block.shape[0]
    k = np.arange(1, n, dtype=float)
    scale = 1.0 / np.sqrt(k * (k + 1.0))
    prefix = np.cumsum(block, axis=0)[:-1]
    out = (prefix - k[:, None] * block[1:]) * scale[:, None]
    return out


def coset_fixed_basis(group: FiniteGroup, sub: Subgroup) -> np.ndarray:
    """Orthonormal basis (|G| x k) of the subgroup's fixed vectors in the
    regular representation, intersected with the complement of the constants.

    Columns are built from coset indicator vectors, projected off the constant
    vector and re-orthonormalized; k = |G|/|H| - 1.
    """
    n = group.order
    coset_id = right_cosets(group, sub)
    k = int(coset_id.max()) + 1
    size = n // k
    mat = np.zeros((n, k))
    mat[np.arange(n), coset_id] = 1.0 / np.sqrt(size)
    mat -= np.sqrt(size) / n  # each column has the same overlap with the constants
    if k == 1:
        return np.zeros((n, 0))
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    return np.ascontiguousarray(u[:, : k - 1])


class RegularRepComplement:
    """Left regular representation restricted to the complement of constants."""

    def __init__(self, group: FiniteGroup, cap: int | None = None):
        _check_cap(group, cap)
        self.group = group
        self.dim = group.order - 1
        self._q: np.ndarray | None = None

    def _basis(self) -> np.ndarray:
        if self._q is None:
            n = self.group.order
            if n > 2048:
                raise CapExceeded("explicit matrices limited to order <= 2048")
            self._q = _helmert_coordinates(np.eye(n)).T  # (n, n-1)
        return self._q

    def matrix(self, i: int) -> np.ndarray:
        """Matrix of the element in the orthonormal basis of the complement."""
        q = self._basis()
        perm = self.group.mul_row(self.group.inv(i))
        return q.T @ q[perm]

    def matrices_for(self, indices: Iterable[int]) -> np.ndarray:
        return np.stack([self.matrix(i) for i in indices])

    def fixed_subspace(self, sub: Subgroup) -> Subspace:
        if self.dim == 0:
            raise ValueError("the trivial group leaves a 0-dimensional representation")
        big = coset_fixed_basis(self.group, sub)
        if big.shape[1] == 0:
            return Subspace(np.zeros((self.dim, 0)))
        return Subspace(_helmert_coordinates(big), ambient_dim=self.dim)

    def averaging_residual(self, sub: Subgroup) -> float:
        """Norm of the averaged action of the subgroup beyond its fixed space.

        Averaging over the whole group must give the zero operator here (no
        invariant vectors on the complement).
        """
        n = self.group.order
        acc = np.zeros((n, n))
        for h in sub.indices:
            perm = self.group.mul_row(self.group.inv(h))
            acc[np.arange(n), perm] += 1.0 / sub.order
        fixed = coset_fixed_basis(self.group, sub)
        acc -= fixed @ fixed.T
        acc -= 1.0 / n  # constant-vector block
        return float(np.max(np.abs(acc)))


def regular_rep_complement(group: FiniteGroup, cap: int | None = None) -> RegularRepComplement:
    return RegularRepComplement(group, cap=cap)


# -- group-level orthogonality data ------------------------------------------

def group_epsilon(
    group: FiniteGroup,
    h: Subgroup,
    k: Subgroup,
    cap: int | None = None,
) -> float:
    """Orthogonality constant of two subgroups over all representations
    without invariant vectors.

    Computed between the fixed subspaces inside the complement of constants of
    the regular representation; complete reducibility makes the supremum over
    representations equal to this value.  When the two subgroups fail to
    generate the group the constant is 1.
    """
    _check_cap(group, cap)
    if h.group is not group or k.group is not group:
        raise ValueError("subgroups belong to a different group")
    if subgroup_closure(group, set(h.indices) | set(k.indices)).order != group.order:
        return 1.0
    bh = coset_fixed_basis(group, h)
    bk = coset_fixed_basis(group, k)
    if bh.shape[1] == 0 or bk.shape[1] == 0:
        return 0.0
    sing = np.linalg.svd(bh.T @ bk, compute_uv=False)
    return float(min(1.0, max(0.0, sing[0])))


def group_codistance(
    group: FiniteGroup,
    subgroups: Sequence[Subgroup],
    cap: int | None = None,
) -> float:
    """Codistance of the subgroups' fixed spaces on the regular complement.

    Families that do not generate the group have codistance 1 (reported with a
    warning).
    """
    _check_cap(group, cap)
    if any(s.group is not group for s in subgroups):
        raise ValueError("subgroups belong to a different group")
    all_gens: set[int] = set()
    for s in subgroups:
        all_gens |= set(s.indices)
    if subgroup_closure(group, all_gens).order != group.order:
        warnings.warn("subgroups do not generate the group; codistance is 1", stacklevel=2)
        return 1.0
    bases = [coset_fixed_basis(group, s) for s in subgroups]
    dims = [b.shape[1] for b in bases]
    if all(d == 0 for d in dims):
        warnings.warn("all fixed subspaces are zero; returning 0", stacklevel=2)
        return 0.0
    n = group.order
    subspaces = [Subspace(b, ambient_dim=n) if b.shape[1] else Subspace(np.zeros((n, 0))) for b in bases]
    return subspace_codistance(subspaces, allow_zero=True)


def cayley_laplacian_gap(
    group: FiniteGroup,
    gens: Sequence[int],
    cap: int | None = None,
) -> float:
    """Spectral gap of |S| I - (1/2) sum over s of (P_s + P_s^-1) off the constants."""
    _check_cap(group, cap)
    if group.order < 2:
        raise ValueError("the trivial group has no spectral gap")
    if subgroup_closure(group, set(gens)).order != group.order:
        raise ValueError("the multiset does not generate the group")
    n = group.order
    lap = np.zeros((n, n))
    lap[np.diag_indices(n)] = float(len(gens))
    cols = np.arange(n)
    for s in gens:
        perm = group.mul_row(s)
        lap[perm, cols] -= 0.5
        lap[cols, perm] -= 0.5
    evals = np.linalg.eigvalsh(lap)
    if abs(evals[0]) > 1e-8 * n:
        raise ValueError("kernel eigenvalue missing; generation check failed")
    return float(evals[1])


def kazhdan_spectral_lower(
    group: FiniteGroup,
    gens: Sequence[int],
    cap: int | None = None,
) -> float:
    """Averaging lower bound sqrt(2 lambda_1 / |S|) for the Kazhdan constant.

    For any unit vector v off the constants the mean of |s v - v|^2 over the
    multiset S is at least 2 lambda_1 / |S|, and the maximum dominates the
    mean.
    """
    gens = [int(g) for g in gens]
    gap = cayley_laplacian_gap(group, gens, cap=cap)
    return float(np.sqrt(2.0 * gap / len(gens)))
