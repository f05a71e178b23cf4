"""Dense complex subspace geometry at desk scale.

Subspaces of a finite-dimensional complex inner-product space are stored as
matrices with orthonormal columns.  On top of that representation the module
computes orthogonal projections, orthogonality constants (largest principal
angle cosines), eps-closeness with worst-case witnesses, and codistances of
finite families of subspaces, both plain and weighted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Subspace",
    "orthonormalize",
    "project",
    "complement",
    "orthogonality_constant",
    "closeness_constant",
    "ClosenessResult",
    "is_eps_close",
    "averaged_projector",
    "codistance",
    "codistance_witness",
    "weighted_codistance",
    "weighted_codistance_witness",
    "residual_witness",
    "subspace_to_dict",
    "subspace_from_dict",
    "load_subspaces",
]

ORTHONORMALITY_TOL = 1e-9


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds: rank decisions and eigenvalue/orthogonality slack."""

    rank_tol: float = 1e-9
    eig_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.rank_tol <= 0 or self.eig_tol <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


class Subspace:
    """A subspace of C^n, held as an n x k matrix with orthonormal columns.

    ``k = 0`` encodes the zero subspace.  Instances are immutable; the basis
    array is stored read-only.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, basis: np.ndarray, ambient_dim: int | None = None):
        basis = np.atleast_2d(np.asarray(basis))
        if basis.size == 0 and ambient_dim is not None:
            basis = basis.reshape(ambient_dim, 0)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        n, k = basis.shape
        if ambient_dim is not None and ambient_dim != n:
            raise ValueError(f"ambient_dim {ambient_dim} != basis rows {n}")
        if n < 1:
            raise ValueError("ambient dimension must be >= 1")
        if k > n:
            raise ValueError("more basis columns than ambient dimension")
        if k:
            gram = basis.conj().T @ basis
            if np.max(np.abs(gram - np.eye(k))) > ORTHONORMALITY_TOL:
                raise ValueError("basis columns are not orthonormal")
        basis = basis.copy()
        basis.setflags(write=False)
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def is_zero(self) -> bool:
        return self.dim == 0

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def contains(self, v: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
        v = np.asarray(v)
        return float(np.linalg.norm(v - project(v, self))) <= tol.rank_tol * max(
            1.0, float(np.linalg.norm(v))
        )

    def __repr__(self) -> str:
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def orthonormalize(
    vectors: Sequence[np.ndarray],
    tol: Tolerance = DEFAULT_TOL,
    ambient_dim: int | None = None,
) -> Subspace:
    """Orthonormal basis of the span; near-dependent vectors are dropped.

    A vector whose residual after projection onto the vectors accepted so far
    has norm below ``tol.rank_tol`` is discarded.  Modified Gram-Schmidt with a
    second orthogonalization pass keeps the basis orthonormal to ~1e-15.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise ValueError("empty input with unknown ambient dimension")
        return Subspace(np.zeros((ambient_dim, 0), dtype=complex))
    n = vecs[0].size
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError("ambient_dim does not match the vectors")
    cols: list[np.ndarray] = []
    for v in vecs:
        if v.size != n:
            raise ValueError("vectors have inconsistent dimensions")
        w = v.copy()
        for _ in range(2):
            for q in cols:
                w -= q * (q.conj() @ w)
        norm = np.linalg.norm(w)
        if norm >= tol.rank_tol:
            cols.append(w / norm)
    if not cols:
        return Subspace(np.zeros((n, 0), dtype=complex))
    return Subspace(np.column_stack(cols))


def project(v: np.ndarray, w: Subspace) -> np.ndarray:
    """Orthogonal projection of ``v`` onto ``w``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != w.ambient_dim:
        raise ValueError("vector dimension does not match the subspace")
    if w.is_zero():
        return np.zeros_like(v)
    return w.basis @ (w.basis.conj().T @ v)


def complement(w: Subspace) -> Subspace:
    """Orthogonal complement."""
    n, k = w.ambient_dim, w.dim
    if k == 0:
        return Subspace(np.eye(n, dtype=complex))
    if k == n:
        return Subspace(np.zeros((n, 0), dtype=complex))
    full, _, _ = np.linalg.svd(w.basis, full_matrices=True)
    return Subspace(full[:, k:])


def _check_same_ambient(u: Subspace, w: Subspace) -> None:
    if u.ambient_dim != w.ambient_dim:
        raise ValueError("subspaces live in different ambient dimensions")


def orthogonality_constant(u: Subspace, w: Subspace) -> float:
    """sup |<x, y>| / (|x||y|) over nonzero x in u, y in w; in [0, 1].

    Equals the largest singular value of ``u.basis^H w.basis`` and is symmetric
    in its arguments.  A zero subspace yields 0.
    """
    _check_same_ambient(u, w)
    if u.is_zero() or w.is_zero():
        return 0.0
    # evaluate in an argument-order-invariant way so the result is exactly
    # symmetric: smaller subspace first, both orders when dimensions tie
    lo, hi = (u, w) if u.dim <= w.dim else (w, u)
    sing = np.linalg.svd(lo.basis.conj().T @ hi.basis, compute_uv=False)[0]
    if u.dim == w.dim:
        other = np.linalg.svd(hi.basis.conj().T @ lo.basis, compute_uv=False)[0]
        sing = max(sing, other)
    return float(min(1.0, max(0.0, sing)))


def closeness_constant(u: Subspace, w: Subspace) -> float:
    """max over unit x in u of dist(x, w), computed from the residual map.

    Independent route from :func:`orthogonality_constant` applied to the
    complement; the two agree, which is exercised by the test-suite.
    """
    _check_same_ambient(u, w)
    if u.is_zero():
        return 0.0
    residual = u.basis - w.basis @ (w.basis.conj().T @ u.basis) if not w.is_zero() else u.basis
    sing = np.linalg.svd(residual, compute_uv=False)
    return float(min(1.0, max(0.0, sing[0])))


class ClosenessResult(NamedTuple):
    close: bool
    value: float
    witness: np.ndarray


def is_eps_close(
    u: Subspace, w: Subspace, eps: float, tol: Tolerance = DEFAULT_TOL
) -> ClosenessResult:
    """Whether every unit vector of ``u`` is within ``eps`` of ``w``.

    Returns the decision, the sharp constant, and a unit vector of ``u``
    attaining it (the worst witness).
    """
    _check_same_ambient(u, w)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if u.is_zero():
        return ClosenessResult(True, 0.0, np.zeros(u.ambient_dim, dtype=complex))
    comp = complement(w)
    if comp.is_zero():
        return ClosenessResult(True, 0.0, u.basis[:, 0])
    _, sing, vh = np.linalg.svd(comp.basis.conj().T @ u.basis)
    value = float(min(1.0, max(0.0, sing[0] if sing.size else 0.0)))
    coeff = vh.conj().T[:, 0] if sing.size else np.eye(u.dim, dtype=complex)[:, 0]
    witness = u.basis @ coeff
    return ClosenessResult(value <= eps + tol.eig_tol, value, witness)


def averaged_projector(
    subspaces: Sequence[Subspace], weights: Sequence[float] | None = None
) -> np.ndarray:
    """Convex combination sum_i w_i P_i of the orthogonal projectors."""
    if weights is None:
        weights = [1.0 / len(subspaces)] * len(subspaces)
    n = subspaces[0].ambient_dim
    out = np.zeros((n, n), dtype=complex)
    for w, s in zip(weights, subspaces):
        if s.dim:
            out += w * s.projector()
    return out


def _top_eig_of_weighted_sum(
    subspaces: Sequence[Subspace], weights: Sequence[float]
) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and eigenvector of sum_i w_i P_i.

    Uses the Gram matrix of the stacked scaled bases when that is smaller than
    the ambient dimension; the nonzero spectra coincide.
    """
    n = subspaces[0].ambient_dim
    total = sum(s.dim for s in subspaces)
    if total == 0:
        return 0.0, np.zeros(n, dtype=complex)
    if total < n:
        scaled = np.hstack(
            [np.sqrt(w) * s.basis for w, s in zip(weights, subspaces) if s.dim]
        )
        gram = scaled.conj().T @ scaled
        vals, vecs = np.linalg.eigh(gram)
        lam = float(vals[-1])
        vec = scaled @ vecs[:, -1]
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec = vec / norm
        return lam, vec
    op = averaged_projector(subspaces, weights)
    vals, vecs = np.linalg.eigh(op)
    return float(vals[-1]), vecs[:, -1]


def _validated_family(subspaces: Sequence[Subspace], allow_zero: bool) -> None:
    if len(subspaces) < 2:
        raise ValueError("codistance requires at least two subspaces")
    n = subspaces[0].ambient_dim
    for s in subspaces:
        if s.ambient_dim != n:
            raise ValueError("subspaces live in different ambient dimensions")
        if s.is_zero() and not allow_zero:
            raise ValueError("zero subspace in codistance input (pass allow_zero=True to permit)")


def codistance(subspaces: Sequence[Subspace], allow_zero: bool = False) -> float:
    """Codistance of a family of subspaces, in [1/n, 1].

    Computed as the top eigenvalue of the averaged projector (1/n) sum P_i,
    which agrees with the supremum of |u_1 + ... + u_n|^2 / (n sum |u_i|^2)
    over tuples u_i in U_i.  Equals 1/n exactly when the family is pairwise
    orthogonal, and 1 when the subspaces share a common vector.
    """
    _validated_family(subspaces, allow_zero)
    lam, _ = _top_eig_of_weighted_sum(subspaces, [1.0 / len(subspaces)] * len(subspaces))
    return float(min(1.0, max(0.0, lam)))


def codistance_witness(
    subspaces: Sequence[Subspace], allow_zero: bool = False
) -> tuple[float, np.ndarray, list[np.ndarray]]:
    """Codistance plus the achieving vector and its per-subspace components.

    The eigenvector v of the top eigenvalue decomposes as u_i = P_i(v), and the
    tuple (u_1, ..., u_n) attains the defining supremum.
    """
    _validated_family(subspaces, allow_zero)
    n = len(subspaces)
    lam, vec = _top_eig_of_weighted_sum(subspaces, [1.0 / n] * n)
    parts = [project(vec, s) for s in subspaces]
    return float(min(1.0, max(0.0, lam))), vec, parts


def weighted_codistance(subspaces: Sequence[Subspace], alpha: Sequence[float]) -> float:
    """Weighted codistance with positive vertex weights ``alpha``.

    Top eigenvalue of (sum 1/a_x)^(-1) sum (1/a_x) P_x; reduces to
    :func:`codistance` when every weight is 1.
    """
    lam, _ = _weighted_top(subspaces, alpha)
    return lam


def weighted_codistance_witness(
    subspaces: Sequence[Subspace], alpha: Sequence[float]
) -> tuple[float, np.ndarray]:
    """Weighted codistance together with the achieving unit vector."""
    return _weighted_top(subspaces, alpha)


def _weighted_top(
    subspaces: Sequence[Subspace], alpha: Sequence[float]
) -> tuple[float, np.ndarray]:
    if len(alpha) != len(subspaces):
        raise ValueError("one weight per subspace is required")
    if any(a <= 0 for a in alpha):
        raise ValueError("weights must be strictly positive")
    _validated_family(subspaces, allow_zero=False)
    inv = [1.0 / a for a in alpha]
    total = sum(inv)
    lam, vec = _top_eig_of_weighted_sum(subspaces, [w / total for w in inv])
    return float(min(1.0, max(0.0, lam))), vec


def residual_witness(
    subspaces: Sequence[Subspace], x: np.ndarray
) -> tuple[int, float]:
    """Index j maximizing |x - P_j(x)| together with that residual norm.

    The returned norm is at least sqrt(1 - rho) * |x| where rho is the
    codistance of the family.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    norm_x = float(np.linalg.norm(x))
    if norm_x == 0.0:
        raise ValueError("witness vector must be nonzero")
    best_j, best = 0, -1.0
    for j, s in enumerate(subspaces):
        if s.ambient_dim != x.size:
            raise ValueError("vector dimension does not match the subspaces")
        r = float(np.linalg.norm(x - project(x, s)))
        if r > best:
            best_j, best = j, r
    return best_j, best


# -- serialization ----------------------------------------------------------

def subspace_to_dict(s: Subspace) -> dict:
    cols = []
    for j in range(s.dim):
        col = s.basis[:, j]
        cols.append([[float(z.real), float(z.imag)] for z in col])
    return {"ambient_dim": s.ambient_dim, "columns": cols}


def subspace_from_dict(data: dict) -> Subspace:
    n = int(data["ambient_dim"])
    cols = data.get("columns", [])
    if not cols:
        return Subspace(np.zeros((n, 0), dtype=complex))
    mat = np.zeros((n, len(cols)), dtype=complex)
    for j, col in enumerate(cols):
        if len(col) != n:
            raise ValueError("column length does not match ambient_dim")
        mat[:, j] = [complex(re, im) for re, im in col]
    return Subspace(mat)


def load_subspaces(path: str) -> list[Subspace]:
    """Read a file holding {"subspaces": [...]} or a single subspace object."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "subspaces" in data:
        return [subspace_from_dict(d) for d in data["subspaces"]]
    if isinstance(data, dict):
        return [subspace_from_dict(data)]
    return [subspace_from_dict(d) for d in data]
