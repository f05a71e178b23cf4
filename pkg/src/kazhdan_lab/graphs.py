"""Finite graphs with paired directed edges, weighted Laplacians, and spectral gaps.

Graphs carry a positive vertex weight ``alpha`` and a positive directed edge
weight ``c``.  The Laplacian acts on vertex functions by

    (Lf)(y) = alpha(y) * sum over edges e with head y of
              (f(y) - f(tail(e))) / (c(e) + c(reverse(e)))

and is returned in the basis that makes it a symmetric matrix.  With
``alpha = 1`` and ``c = 1/2`` this is the usual combinatorial Laplacian, for
which an exact integer eigenvalue path is provided.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .subspaces import DEFAULT_TOL, Tolerance

__all__ = [
    "Topology",
    "WeightedGraph",
    "LaplacianMatrix",
    "standard_laplacian",
    "weighted_laplacian",
    "lambda1",
    "integer_spectrum",
    "integer_rank",
    "vertex_weights_from_local_codistance",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "edgeless_graph",
    "magic_graph",
    "MAGIC_VERTEX_LABELS",
    "graph_from_dict",
    "load_graph",
    "named_topology",
]


@dataclass(frozen=True)
class Topology:
    """Loop-free undirected graph on vertices 0..n-1."""

    vertex_count: int
    edges: frozenset[tuple[int, int]]  # stored with u < v

    @staticmethod
    def from_edges(vertex_count: int, pairs: Iterable[Sequence[int]]) -> "Topology":
        norm = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u} is not allowed")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            norm.add((min(u, v), max(u, v)))
        return Topology(vertex_count, frozenset(norm))

    def directed_edges(self) -> list[tuple[int, int]]:
        out = []
        for u, v in sorted(self.edges):
            out.append((u, v))
            out.append((v, u))
        return out

    def degree(self, y: int) -> int:
        return sum(1 for u, v in self.edges if u == y or v == y)

    def neighbors(self, y: int) -> list[int]:
        return sorted(
            {v for u, v in self.edges if u == y} | {u for u, v in self.edges if v == y}
        )

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            y = stack.pop()
            for z in self.neighbors(y):
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        return len(seen) == self.vertex_count

    def is_regular(self) -> int | None:
        degs = {self.degree(y) for y in range(self.vertex_count)}
        return degs.pop() if len(degs) == 1 else None


class WeightedGraph:
    """Connected loop-free graph with vertex weights alpha and edge weights c.

    ``c`` is defined on directed edges (both orientations of every undirected
    edge); defaults are alpha = 1 and c = 1/2, which give the standard
    Laplacian.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[Sequence[int]],
        alpha: Mapping[int, float] | Sequence[float] | None = None,
        c: Mapping[tuple[int, int], float] | None = None,
    ):
        self.topology = Topology.from_edges(vertex_count, edges)
        if not self.topology.is_connected():
            raise ValueError("graph must be connected")
        n = vertex_count
        if alpha is None:
            self.alpha = np.ones(n)
        else:
            arr = np.ones(n)
            if isinstance(alpha, Mapping):
                for k, v in alpha.items():
                    arr[int(k)] = float(v)
            else:
                arr = np.asarray([float(a) for a in alpha])
                if arr.size != n:
                    raise ValueError("alpha must give one weight per vertex")
            self.alpha = arr
        if np.any(self.alpha <= 0):
            raise ValueError("vertex weights must be strictly positive")
        directed = self.topology.directed_edges()
        if c is None:
            self.c = {e: 0.5 for e in directed}
        else:
            self.c = {}
            for e in directed:
                if e not in c:
                    raise ValueError(f"missing edge weight for directed edge {e}")
                w = float(c[e])
                if w <= 0:
                    raise ValueError(f"edge weight for {e} must be positive")
                self.c[e] = w
            extra = set(c) - set(directed)
            if extra:
                raise ValueError(f"edge weights given for non-edges: {sorted(extra)}")

    @property
    def vertex_count(self) -> int:
        return self.topology.vertex_count

    def is_standard(self) -> bool:
        return bool(np.all(self.alpha == 1.0)) and all(v == 0.5 for v in self.c.values())


@dataclass(frozen=True)
class LaplacianMatrix:
    """Laplacian in a symmetrizing basis, plus bookkeeping for exact paths."""

    matrix: np.ndarray
    basis_note: str  # "standard" or "alpha-weighted (symmetrized)"
    integer_entries: bool = False


def standard_laplacian(g: WeightedGraph | Topology) -> LaplacianMatrix:
    """Combinatorial Laplacian deg(y) f(y) - sum of neighbor values, over the integers."""
    topo = g.topology if isinstance(g, WeightedGraph) else g
    if not topo.is_connected():
        raise ValueError("graph must be connected")
    n = topo.vertex_count
    mat = np.zeros((n, n), dtype=np.int64)
    for u, v in topo.edges:
        mat[u, u] += 1
        mat[v, v] += 1
        mat[u, v] -= 1
        mat[v, u] -= 1
    return LaplacianMatrix(mat, "standard", integer_entries=True)


def weighted_laplacian(g: WeightedGraph) -> LaplacianMatrix:
    """Weighted Laplacian, symmetrized by the similarity D^(-1/2) L D^(1/2).

    D = diag(alpha).  The spectrum is that of the operator in its natural
    weighted inner product, independent of the symmetrization.
    """
    n = g.vertex_count
    mat = np.zeros((n, n))
    for u, v in g.topology.edges:
        csum = g.c[(u, v)] + g.c[(v, u)]
        mat[u, u] += g.alpha[u] / csum
        mat[v, v] += g.alpha[v] / csum
        w = np.sqrt(g.alpha[u] * g.alpha[v]) / csum
        mat[u, v] -= w
        mat[v, u] -= w
    return LaplacianMatrix(mat, "alpha-weighted (symmetrized)")


def lambda1(lap: LaplacianMatrix | np.ndarray, tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest positive eigenvalue of a positive semidefinite matrix.

    Eigenvalues below ``eig_tol * dimension`` count as kernel; an error is
    raised when nothing lies above that threshold.
    """
    mat = lap.matrix if isinstance(lap, LaplacianMatrix) else np.asarray(lap)
    evals = np.linalg.eigvalsh(mat.astype(float))
    cut = tol.eig_tol * mat.shape[0]
    positive = evals[evals > cut]
    if positive.size == 0:
        raise ValueError("matrix has no eigenvalue above the kernel threshold")
    return float(positive[0])


def integer_rank(mat: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix via fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in row] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    prev = 1
    for col in range(cols):
        pivot_row = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        piv = m[rank][col]
        for r in range(rank + 1, rows):
            factor = m[r][col]
            for j in range(col, cols):
                m[r][j] = (m[r][j] * piv - factor * m[rank][j]) // prev
        prev = piv
        rank += 1
        if rank == rows:
            break
    return rank


def integer_spectrum(lap: LaplacianMatrix | np.ndarray) -> list[int] | None:
    """Exact spectrum of an integer symmetric matrix when it is integral.

    Floating eigenvalues propose integer candidates; each candidate's
    multiplicity is certified as the exact nullity of (M - k I) over the
    rationals.  If the certified multiplicities account for the whole
    dimension, the full spectrum (with multiplicity) is returned, otherwise
    None.  Diagonalizability of symmetric matrices makes the certificate
    sound: missing eigenvalues would leave the count short.
    """
    mat = lap.matrix if isinstance(lap, LaplacianMatrix) else np.asarray(lap)
    if isinstance(lap, LaplacianMatrix) and not lap.integer_entries:
        return None
    if not np.issubdtype(mat.dtype, np.integer):
        return None
    n = mat.shape[0]
    evals = np.linalg.eigvalsh(mat.astype(float))
    candidates = sorted({int(round(x)) for x in evals})
    if np.max(np.abs(evals - np.round(evals))) > 1e-6:
        return None
    base = [[int(x) for x in row] for row in mat]
    spectrum: list[int] = []
    total = 0
    for k in candidates:
        shifted = [
            [base[i][j] - (k if i == j else 0) for j in range(n)] for i in range(n)
        ]
        nullity = n - integer_rank(shifted)
        spectrum.extend([k] * nullity)
        total += nullity
    return sorted(spectrum) if total == n else None


def vertex_weights_from_local_codistance(
    topo: Topology,
    c: Mapping[tuple[int, int], float],
    rho_local: Mapping[int, float],
) -> dict[int, float]:
    """Vertex weights alpha(y) = 1 / (rho_local(y) * sum over head-y edges of 1/c(e)).

    ``rho_local(y)`` is the c-weighted codistance of the edge-subgroup data at
    the vertex, supplied by the caller; it must lie in (0, 1].
    """
    out: dict[int, float] = {}
    for y in range(topo.vertex_count):
        rho = float(rho_local[y])
        if not (0 < rho <= 1):
            raise ValueError(f"local codistance at vertex {y} must be in (0, 1]")
        inv_sum = 0.0
        for u, v in topo.directed_edges():
            if v == y:
                inv_sum += 1.0 / float(c[(u, v)])
        if inv_sum == 0:
            raise ValueError(f"vertex {y} has no incoming edges")
        out[y] = 1.0 / (rho * inv_sum)
    return out


# -- builders ---------------------------------------------------------------

def complete_graph(n: int) -> WeightedGraph:
    if n < 2:
        raise ValueError("complete graph needs at least 2 vertices")
    return WeightedGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> WeightedGraph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return WeightedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> WeightedGraph:
    if n < 2:
        raise ValueError("path needs at least 2 vertices")
    return WeightedGraph(n, [(i, i + 1) for i in range(n - 1)])


def edgeless_graph(n: int) -> Topology:
    """Topology with no edges (for presentation emitters; not connected)."""
    return Topology.from_edges(n, [])


MAGIC_VERTEX_LABELS: tuple[tuple[int, int], ...] = (
    (1, 2),
    (1, 3),
    (2, 1),
    (2, 3),
    (3, 1),
    (3, 2),
)


def magic_graph() -> WeightedGraph:
    """The 4-regular graph on ordered pairs (i, j), i != j in {1,2,3}.

    Vertices (i, j) and (k, l) are adjacent exactly when the four indices
    cover {1, 2, 3}; equivalently the complement of the perfect matching that
    pairs (i, j) with (j, i).
    """
    idx = {lab: i for i, lab in enumerate(MAGIC_VERTEX_LABELS)}
    edges = []
    for a in MAGIC_VERTEX_LABELS:
        for b in MAGIC_VERTEX_LABELS:
            if a < b and set(a) | set(b) == {1, 2, 3}:
                edges.append((idx[a], idx[b]))
    return WeightedGraph(6, edges)


def named_topology(name: str) -> WeightedGraph:
    """Named graphs for the CLI: K<n>, C<n>, P<n>, or 'magic'."""
    name = name.strip()
    if name.lower() == "magic":
        return magic_graph()
    kind, num = name[:1].upper(), name[1:]
    if not num.isdigit():
        raise ValueError(f"unrecognized graph name {name!r}")
    n = int(num)
    if kind == "K":
        return complete_graph(n)
    if kind == "C":
        return cycle_graph(n)
    if kind == "P":
        return path_graph(n)
    raise ValueError(f"unrecognized graph name {name!r}")


def graph_from_dict(data: dict) -> WeightedGraph:
    """Build a graph from {"vertices": n, "edges": [[u,v],...], "alpha": {...}, "c": {"u,v": w}}.

    Vertices are 0-based in files; reports use 1-based labels.
    """
    n = int(data["vertices"])
    edges = data.get("edges", [])
    alpha = None
    if "alpha" in data and data["alpha"] is not None:
        alpha = {int(k): float(v) for k, v in data["alpha"].items()}
    c = None
    if "c" in data and data["c"] is not None:
        c = {}
        for key, w in data["c"].items():
            u, v = key.split(",")
            c[(int(u), int(v))] = float(w)
    return WeightedGraph(n, edges, alpha=alpha, c=c)


def load_graph(path: str) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_dict(json.load(fh))
