"""Closed-form Kazhdan-constant bounds and spectral criteria as report-producing
evaluators.

Every evaluator validates its hypotheses, echoes inputs, exposes each
intermediate quantity in the report (so tests can pin subexpressions, not just
final numbers), and marks the report satisfied only when the hypotheses hold
and the resulting bound is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import WeightedGraph, lambda1, weighted_laplacian

__all__ = [
    "BoundReport",
    "EpsilonMatrix",
    "RingSpec",
    "kazhdan_from_codistance",
    "spectral_codistance_bound",
    "kazhdan_from_pairwise_eps",
    "kazhdan_from_triple_eps",
    "triangle_feasible",
    "TriangleSolution",
    "triangle_weight_solve",
    "triangle_graph",
    "posdef_check",
    "a2_kazhdan_constants",
    "eln_kazhdan_bound",
    "cover_kazhdan_bound",
    "kms_kazhdan_bound",
    "combine_relative",
    "relative_t_alpha",
    "relative_t_alpha_general",
    "weighted_spectral_report",
]

SQRT2 = math.sqrt(2.0)


@dataclass
class BoundReport:
    """Outcome of one criterion evaluation."""

    criterion: str
    inputs: dict
    intermediates: dict = field(default_factory=dict)
    bound: float | None = None
    satisfied: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "inputs": self.inputs,
            "intermediates": self.intermediates,
            "bound": self.bound,
            "satisfied": self.satisfied,
            "notes": self.notes,
        }


def _check_eps(value: float, name: str, upper_open: bool = True) -> float:
    value = float(value)
    if value < 0 or (value >= 1 if upper_open else value > 1):
        raise ValueError(f"{name} must lie in [0, 1{')' if upper_open else ']'}, got {value}")
    return value


def kazhdan_from_codistance(rho: float, delta: float | None = None) -> BoundReport:
    """kappa >= sqrt(2 (1 - rho)) for subgroups of codistance rho < 1.

    With generating sets of Kazhdan constant at least delta inside each
    subgroup, the union of the sets gives kappa >= delta sqrt(1 - rho).
    """
    rho = float(rho)
    if rho < 0:
        raise ValueError("codistance must be nonnegative")
    report = BoundReport("kazhdan_from_codistance", {"rho": rho, "delta": delta})
    if rho >= 1:
        report.notes.append("codistance >= 1: no positive bound")
        return report
    kappa = math.sqrt(2.0 * (1.0 - rho))
    report.intermediates["kappa_subgroup_union"] = kappa
    if delta is not None:
        report.intermediates["kappa_generating_union"] = float(delta) * math.sqrt(1.0 - rho)
    report.bound = kappa
    report.satisfied = kappa > 0
    return report


def spectral_codistance_bound(rho_local_max: float, k: int, lam1: float) -> BoundReport:
    """Codistance bound rho/(1-rho) (2k/lambda_1 - 1) for a k-regular decomposition.

    rho_local_max is the largest local codistance over the vertices; the bound
    is useful (below 1) exactly when rho_local_max < lambda_1 / (2k), and then
    kappa >= sqrt(2 (1 - bound)) over the union of the vertex subgroups.
    """
    if k < 2:
        raise ValueError("graph degree must be at least 2")
    if not (0 < rho_local_max < 1):
        raise ValueError("local codistance must lie in (0, 1)")
    if lam1 <= 0:
        raise ValueError("spectral gap must be positive")
    value = rho_local_max / (1.0 - rho_local_max) * (2.0 * k / lam1 - 1.0)
    threshold = lam1 / (2.0 * k)
    report = BoundReport(
        "spectral_codistance_bound",
        {"rho_local_max": rho_local_max, "k": k, "lambda1": lam1},
        intermediates={"threshold": threshold, "codistance_bound": value},
    )
    report.bound = value
    report.satisfied = rho_local_max < threshold
    if report.satisfied:
        report.intermediates["kappa_vertex_union"] = math.sqrt(2.0 * (1.0 - value))
    else:
        report.notes.append("local codistance reaches lambda1/(2k); bound >= 1")
    return report


def kazhdan_from_pairwise_eps(n: int, eps: float, delta: float | None = None) -> BoundReport:
    """Bounds for a group generated by n subgroups with pairwise constants <= eps.

    kappa over the union of the subgroups is at least sqrt(2 (1-(n-1) eps)/n)
    when eps < 1/(n-1); the report also carries the induction intermediates
    rho_m = (1+eps) / (m (1-(m-2) eps)) for m = 2..n.
    """
    if n < 2:
        raise ValueError("need at least two subgroups")
    eps = _check_eps(eps, "eps", upper_open=False)
    report = BoundReport("kazhdan_from_pairwise_eps", {"n": n, "eps": eps, "delta": delta})
    rho_chain = {}
    for m in range(2, n + 1):
        denom = m * (1.0 - (m - 2) * eps)
        rho_chain[m] = (1.0 + eps) / denom if denom > 0 else float("inf")
    report.intermediates["rho_chain"] = rho_chain
    if eps >= 1.0 / (n - 1):
        report.notes.append("eps >= 1/(n-1): hypotheses unmet")
        return report
    margin = (1.0 - (n - 1) * eps) / n
    report.intermediates["margin"] = margin
    kappa_a = math.sqrt(2.0 * margin)
    report.intermediates["kappa_subgroup_union"] = kappa_a
    if delta is not None:
        report.intermediates["kappa_generating_union"] = float(delta) * math.sqrt(margin)
    report.bound = kappa_a
    report.satisfied = True
    return report


def kazhdan_from_triple_eps(
    eps1: float, eps2: float, eps3: float, delta: float | None = None
) -> BoundReport:
    """Three-subgroup bound via eps0 = sqrt(2) max(eps1, eps2) / sqrt(1 - eps3).

    Satisfied when eps0 < 1; then kappa over the union of the subgroups is at
    least sqrt((1 - eps0)(1 - eps') / 2) with eps' the largest of the three.
    """
    e1, e2, e3 = (_check_eps(e, f"eps{i}") for i, e in enumerate((eps1, eps2, eps3), 1))
    eps0 = SQRT2 * max(e1, e2) / math.sqrt(1.0 - e3)
    eps_prime = max(e1, e2, e3)
    report = BoundReport(
        "kazhdan_from_triple_eps",
        {"eps1": e1, "eps2": e2, "eps3": e3, "delta": delta},
        intermediates={"eps0": eps0, "eps_prime": eps_prime},
    )
    if eps0 >= 1:
        report.notes.append("eps0 >= 1: hypotheses unmet")
        return report
    kappa_a = math.sqrt((1.0 - eps0) * (1.0 - eps_prime) / 2.0)
    report.intermediates["kappa_subgroup_union"] = kappa_a
    if delta is not None:
        report.intermediates["kappa_generating_union"] = (
            float(delta) / 2.0 * math.sqrt((1.0 - eps0) * (1.0 - eps_prime))
        )
    report.bound = kappa_a
    report.satisfied = True
    return report


# -- triangle weight system ---------------------------------------------------

def triangle_feasible(eps1: float, eps2: float, eps3: float) -> bool:
    """Strict inequality eps1^2 + eps2^2 + eps3^2 + 2 eps1 eps2 eps3 < 1."""
    return eps1 * eps1 + eps2 * eps2 + eps3 * eps3 + 2.0 * eps1 * eps2 * eps3 < 1.0


@dataclass
class TriangleSolution:
    """Solution of the triangle weight system and the induced edge weights."""

    eps: tuple[float, float, float]
    x0: float
    y0: float
    z0: float
    u0: float
    residuals: tuple[float, float, float, float]
    weights: dict  # directed (tail, head) on vertices 1..3 -> c(e)
    lambda1: float
    report: BoundReport


_BISECTION_STEPS = 200


def _triangle_u0(e1: float, e2: float, e3: float) -> float:
    """Unique root of u (u^2 - e1^2 - e2^2 - e3^2) = 2 e1 e2 e3 in [sqrt(sum), 1)."""
    s = e1 * e1 + e2 * e2 + e3 * e3
    rhs = 2.0 * e1 * e2 * e3
    f = lambda u: u * (u * u - s) - rhs
    lo, hi = math.sqrt(s), 1.0
    if f(lo) >= 0.0:
        return lo
    if f(hi) <= 0.0:
        raise ValueError("triangle inequality violated at the right endpoint")
    for _ in range(_BISECTION_STEPS):
        if hi - lo <= 1e-14:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    for _ in range(3):  # Newton polish; derivative is bounded away from 0 here
        slope = 3.0 * root * root - s
        if slope <= 0.0:
            break
        root = min(max(root - f(root) / slope, math.sqrt(s)), 1.0)
    return root


def triangle_weight_solve(eps1: float, eps2: float, eps3: float) -> TriangleSolution:
    """Solve x(u-z) = e1^2, y(u-x) = e2^2, z(u-y) = e3^2 with the cubic pinning u.

    Returns nonnegative x0, y0, z0 and u0 in [sqrt(e1^2+e2^2+e3^2), 1),
    the induced triangle edge weights with c(e) + c(reverse e) = 2 + u0, and
    the spectral gap 3 / (2 + u0) > 1 of the weighted Laplacian.  The cubic
    root is found by bisection; z0 then follows in closed form because the
    intermediate quadratic has vanishing discriminant.
    """
    e1, e2, e3 = (
        _check_eps(e, f"eps{i}") for i, e in enumerate((eps1, eps2, eps3), 1)
    )
    if not triangle_feasible(e1, e2, e3):
        raise ValueError("eps1^2 + eps2^2 + eps3^2 + 2 eps1 eps2 eps3 must be < 1")
    if e1 == e2 == e3 == 0.0:
        x0 = y0 = z0 = u0 = 0.0
    else:
        u0 = _triangle_u0(e1, e2, e3)
        denom_z = u0 * u0 - e2 * e2
        if denom_z > 1e-300:
            z0 = e3 * math.sqrt(max(0.0, u0 * u0 - e1 * e1) / denom_z)
        else:
            z0 = 0.0  # forces e1 = e3 = 0, so the first equation holds with x0 = 0
        dx = u0 - z0
        x0 = e1 * e1 / dx if dx > 1e-300 else 0.0
        dy = u0 - x0
        y0 = e2 * e2 / dy if dy > 1e-300 else 0.0
    residuals = (
        x0 * (u0 - z0) - e1 * e1,
        y0 * (u0 - x0) - e2 * e2,
        z0 * (u0 - y0) - e3 * e3,
        u0 * (u0 * u0 - e1 * e1 - e2 * e2 - e3 * e3) - 2.0 * e1 * e2 * e3,
    )
    weights = {
        (1, 2): 1.0 + u0 - x0,
        (1, 3): 1.0 + z0,
        (2, 1): 1.0 + x0,
        (2, 3): 1.0 + u0 - y0,
        (3, 1): 1.0 + u0 - z0,
        (3, 2): 1.0 + y0,
    }
    lam = 3.0 / (2.0 + u0)
    report = BoundReport(
        "triangle_weight_solve",
        {"eps1": e1, "eps2": e2, "eps3": e3},
        intermediates={
            "u0": u0,
            "x0": x0,
            "y0": y0,
            "z0": z0,
            "lambda1": lam,
            "max_residual": max(abs(r) for r in residuals),
        },
        bound=lam,
        satisfied=lam > 1.0,
    )
    return TriangleSolution((e1, e2, e3), x0, y0, z0, u0, residuals, weights, lam, report)


def triangle_graph(solution: TriangleSolution) -> WeightedGraph:
    """Weighted triangle carrying the solved edge weights (vertex weights 1)."""
    c = {(u - 1, v - 1): w for (u, v), w in solution.weights.items()}
    return WeightedGraph(3, [(0, 1), (1, 2), (0, 2)], alpha=None, c=c)


# -- positive definiteness ----------------------------------------------------

@dataclass(frozen=True)
class EpsilonMatrix:
    """Symmetric matrix of pairwise orthogonality constants, unit diagonal implied."""

    values: np.ndarray  # (n, n), zero diagonal, symmetric, entries in [0, 1]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 2:
            raise ValueError("need a square matrix of size at least 2")
        if np.max(np.abs(v - v.T)) > 1e-12:
            raise ValueError("epsilon matrix must be symmetric")
        off = v[~np.eye(v.shape[0], dtype=bool)]
        if off.size and (off.min() < 0 or off.max() > 1):
            raise ValueError("off-diagonal entries must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @staticmethod
    def uniform(n: int, eps: float) -> "EpsilonMatrix":
        v = np.full((n, n), float(eps))
        np.fill_diagonal(v, 0.0)
        return EpsilonMatrix(v)

    def comparison_matrix(self) -> np.ndarray:
        """The matrix with 1 on the diagonal and -eps_ij off it."""
        out = -self.values.copy()
        np.fill_diagonal(out, 1.0)
        return out


_PIVOT_TOL = 1e-12


def posdef_check(eps: EpsilonMatrix | np.ndarray) -> BoundReport:
    """Positive definiteness of the comparison matrix I - (eps_ij).

    Decided by symmetric elimination with pivot tolerance 1e-12; the smallest
    eigenvalue is reported alongside.  Positive definiteness implies a positive
    Kazhdan constant for the union of the subgroups.
    """
    if not isinstance(eps, EpsilonMatrix):
        eps = EpsilonMatrix(np.asarray(eps, dtype=float))
    mat = eps.comparison_matrix()
    work = mat.copy()
    n = eps.n
    definite = True
    pivots = []
    for k in range(n):
        piv = work[k, k]
        pivots.append(float(piv))
        if piv <= _PIVOT_TOL:
            definite = False
            break
        work[k + 1 :, k + 1 :] -= np.outer(work[k + 1 :, k], work[k + 1 :, k]) / piv
    evals = np.linalg.eigvalsh(mat)
    report = BoundReport(
        "posdef_check",
        {"n": n, "eps": eps.values.tolist()},
        intermediates={"pivots": pivots, "min_eigenvalue": float(evals[0])},
        bound=float(evals[0]),
        satisfied=definite,
    )
    if not definite:
        report.notes.append("comparison matrix is not positive definite")
    return report


# -- six-subgroup root system constants ---------------------------------------

def a2_kazhdan_constants() -> BoundReport:
    """Universal constants for groups with a six-subgroup root system.

    Recomputes the chain: local codistance bounds 1/2 and (1+sqrt2)/(4 sqrt2),
    the contraction bound (18-3 sqrt2)/(22-5 sqrt2) for the projected
    Laplacian image, the resulting codistance gap 2/(17+6 sqrt2), the vertex
    bound kappa >= 2/sqrt(17+6 sqrt2) >= 3/8, and the block bound >= 1/8 from
    bounded generation of each vertex group by three blocks.
    """
    rho_plain = 0.5
    rho_nofix = (1.0 + SQRT2) / (4.0 * SQRT2)
    # solve p <= (10+sqrt2)/12 - (2+5 sqrt2)(1-p)/24 for the fixed point
    coeff = (2.0 + 5.0 * SQRT2) / 24.0
    p_bound = ((10.0 + SQRT2) / 12.0 - coeff) / (1.0 - coeff)
    p_closed = (18.0 - 3.0 * SQRT2) / (22.0 - 5.0 * SQRT2)
    gap = 1.0 - p_bound
    gap_closed = 2.0 / (17.0 + 6.0 * SQRT2)
    kappa_vertex = SQRT2 * math.sqrt(gap)
    kappa_vertex_closed = 2.0 / math.sqrt(17.0 + 6.0 * SQRT2)
    kappa_block = kappa_vertex / 3.0
    # 2/sqrt(17+6 sqrt2) >= 3/8  <=>  256 >= 9 (17 + 6 sqrt2)  <=>  103^2 >= 2*54^2
    exact_vertex_ok = 103 * 103 >= 2 * 54 * 54
    report = BoundReport(
        "a2_kazhdan_constants",
        {},
        intermediates={
            "rho_local_plain": rho_plain,
            "rho_local_no_fixed_vectors": rho_nofix,
            "projected_image_bound": p_bound,
            "projected_image_bound_closed_form": p_closed,
            "codistance_gap": gap,
            "codistance_gap_closed_form": gap_closed,
            "kappa_vertex": kappa_vertex,
            "kappa_vertex_closed_form": kappa_vertex_closed,
            "bounded_generation_ratio": 1.0 / 3.0,
            "kappa_block": kappa_block,
            "vertex_bound_exceeds_3_8_exactly": exact_vertex_ok,
        },
        bound=kappa_vertex,
    )
    report.satisfied = (
        exact_vertex_ok
        and abs(p_bound - p_closed) < 1e-12
        and abs(gap - gap_closed) < 1e-12
        and kappa_vertex >= 3.0 / 8.0
        and kappa_block >= 1.0 / 8.0
    )
    return report


# -- explicit constants for elementary-matrix groups ---------------------------

def eln_kazhdan_bound(n: int, d: int, steinberg: bool = False) -> BoundReport:
    """kappa >= 1 / (8 (12 sqrt(2d) + 2 sqrt(3n) + 36 sqrt2)).

    Lower bound for the Kazhdan constant of the group generated by elementary
    matrices over a ring with d generators (same expression for its Steinberg
    cover), with respect to the n(n-1)(d+1) elementary generators.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if d < 0:
        raise ValueError("d must be nonnegative")
    denom_ratio = 12.0 * math.sqrt(2.0 * d) + 2.0 * math.sqrt(3.0 * n) + 36.0 * SQRT2
    bound = 1.0 / (8.0 * denom_ratio)
    return BoundReport(
        "eln_kazhdan_bound",
        {"n": n, "d": d, "steinberg": steinberg},
        intermediates={
            "block_union_kappa": 1.0 / 8.0,
            "relative_ratio": 1.0 / denom_ratio,
            "ratio_denominator": denom_ratio,
        },
        bound=bound,
        satisfied=True,
    )


@dataclass(frozen=True)
class RingSpec:
    """Base ring for the finitely presented cover: the integers or a finite field."""

    kind: str  # "Z" or "field"
    p: int | None = None
    s: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "field"):
            raise ValueError("ring kind must be 'Z' or 'field'")
        if self.kind == "field":
            if not self.p or self.p < 2 or not self.s or self.s < 1:
                raise ValueError("field spec needs a prime p and exponent s >= 1")

    @property
    def q(self) -> int:
        """Minimal index of a proper ideal: field size, or 2 over the integers."""
        return 2 if self.kind == "Z" else self.p**self.s

    @staticmethod
    def integers() -> "RingSpec":
        return RingSpec("Z")

    @staticmethod
    def finite_field(p: int, s: int = 1) -> "RingSpec":
        return RingSpec("field", p=p, s=s)


def cover_kazhdan_bound(n: int, d: int, r0: RingSpec) -> BoundReport:
    """Kazhdan bound for the finitely presented cover built from block subgroups.

    Over the integers (n >= 7):
        kappa >= C_n / (sqrt(d+1) (sqrt(20n/3 + 130) + 12)),
        C_7 = 1/6, C_8 = 1/4, C_n = sqrt(2/3 (1 - (1/2)^(floor(n/3)-1))) beyond.
    Over a field of size p^s >= 5 (n >= 3):
        kappa >= sqrt(2/3 (1 - 2 (1/p^s)^floor(n/3))) / (sqrt(d+1) floor((n+2)/3)^2 p s).
    """
    report = BoundReport(
        "cover_kazhdan_bound", {"n": n, "d": d, "r0": r0.kind, "p": r0.p, "s": r0.s}
    )
    if n < 3 or d < 0:
        raise ValueError("need n >= 3 and d >= 0")
    if r0.kind == "Z":
        if n < 7:
            report.notes.append("over the integers the bound needs n >= 7")
            return report
        if n == 7:
            c_n, case = 1.0 / 6.0, "Z, n=7"
        elif n == 8:
            c_n, case = 1.0 / 4.0, "Z, n=8"
        else:
            c_n, case = math.sqrt(2.0 / 3.0 * (1.0 - 0.5 ** (n // 3 - 1))), "Z, n>=9"
        denom = math.sqrt(d + 1.0) * (math.sqrt(20.0 * n / 3.0 + 130.0) + 12.0)
    else:
        q = r0.q
        if q < 5:
            report.notes.append("field case needs p^s >= 5")
            return report
        c_n, case = math.sqrt(2.0 / 3.0 * (1.0 - 2.0 * (1.0 / q) ** (n // 3))), "field"
        denom = math.sqrt(d + 1.0) * ((n + 2) // 3) ** 2 * r0.p * r0.s
    report.intermediates["case"] = case
    report.intermediates["c_n"] = c_n
    report.intermediates["block_generation_kappa"] = c_n / math.sqrt(d + 1.0)
    report.bound = c_n / denom
    report.satisfied = report.bound > 0
    return report


def kms_kazhdan_bound(d: int, m: float) -> BoundReport:
    """kappa >= sqrt((2/d)(1 - (d-1)/sqrt(m))) for graph-indexed class-two groups.

    d is the number of vertex subgroups and m the smallest of the minimal
    proper-ideal indices of the edge rings; the hypothesis is m > (d-1)^2.
    """
    if d < 2:
        raise ValueError("need at least two vertex subgroups")
    m = float(m)
    report = BoundReport("kms_kazhdan_bound", {"d": d, "m": m})
    report.intermediates["threshold"] = float((d - 1) ** 2)
    if m <= (d - 1) ** 2:
        report.notes.append("m <= (d-1)^2: hypotheses unmet")
        return report
    report.bound = math.sqrt(2.0 / d * (1.0 - (d - 1) / math.sqrt(m)))
    report.satisfied = True
    return report


def combine_relative(kappa_b: float, kappa_ratio: float) -> float:
    """kappa(G, S) >= kappa(G, B) * kappa_r(G, B; S)."""
    if kappa_b < 0 or kappa_ratio < 0:
        raise ValueError("both factors must be nonnegative")
    return float(kappa_b) * float(kappa_ratio)


def relative_t_alpha(s: float) -> float:
    """Distortion constant sqrt(10 s + 120) + 12 for a rank-s matrix pair."""
    return math.sqrt(10.0 * s + 120.0) + 12.0


def relative_t_alpha_general(d: float, s: float) -> float:
    """Distortion constant 6 sqrt2 (sqrt d + 3) + sqrt(3 s) over a d-generated ring."""
    return 6.0 * SQRT2 * (math.sqrt(d) + 3.0) + math.sqrt(3.0 * s)


def weighted_spectral_report(graph: WeightedGraph) -> BoundReport:
    """Qualitative weighted spectral criterion with its sharper optional bound.

    Given a weighted graph whose vertex weights come from the local-codistance
    formula, the criterion is satisfied when lambda_1 > 1, in which case the
    codistance of the vertex subgroups (in the weighted sense) is at most
    1/lambda_1 < 1.  The optional sharper bound uses
    rho = min over edges of c(e) / (alpha(head) deg(head)):
    rho_alpha <= (1/(1-rho)) (1/lambda_1 - rho), reported when rho < 1.
    """
    lam = lambda1(weighted_laplacian(graph))
    report = BoundReport(
        "weighted_spectral_report",
        {"vertices": graph.vertex_count},
        intermediates={"lambda1": lam},
    )
    rho = min(
        graph.c[(u, v)] / (graph.alpha[v] * graph.topology.degree(v))
        for (u, v) in graph.topology.directed_edges()
    )
    report.intermediates["codistance_bound"] = 1.0 / lam
    report.intermediates["remark_rho"] = rho
    if rho < 1.0:
        report.intermediates["remark_bound"] = max(0.0, (1.0 / lam - rho) / (1.0 - rho))
    report.bound = 1.0 / lam
    report.satisfied = lam > 1.0
    if not report.satisfied:
        report.notes.append("lambda1 <= 1: criterion inconclusive")
    return report
