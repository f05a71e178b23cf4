"""Finite presentation emitters and the Golod-Shafarevich condition.

Presentations are emitted in a fixed ASCII syntax, one relator per line:
powers as ``a^k``, commutators as ``[a,b]``, left-normed triple commutators
as ``[a,b,c]``, and relations between words as ``lhs = rhs``.  Degrees with
respect to the p-filtration are assigned by construction for the supported
relator shapes (power -> p, commutator -> 2, triple commutator -> 3); they
feed the Hilbert series H(t) = 1 - |X| t + sum r_i t^i whose negativity on
(0, 1) is the Golod-Shafarevich condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .graphs import Topology

__all__ = [
    "Relator",
    "Presentation",
    "HilbertSeries",
    "KmsRing",
    "CoverRing",
    "kms_basic_presentation",
    "kms_mixed_presentation",
    "gs2_construction",
    "gs2_partition",
    "eln_cover_presentation",
    "GSReport",
    "gs_check",
    "gs1_series",
    "gs2_series",
    "gs2_hypotheses",
    "series_from_dict",
]


@dataclass(frozen=True)
class Relator:
    """One relator line: rendered text, generators used, optional degree."""

    text: str
    gens_used: tuple[str, ...]
    degree: int | None = None


@dataclass
class Presentation:
    generators: list[str]
    relators: list[Relator]

    def __post_init__(self):
        declared = set(self.generators)
        for rel in self.relators:
            missing = [g for g in rel.gens_used if g not in declared]
            if missing:
                raise ValueError(f"relator {rel.text!r} uses undeclared generators {missing}")

    def degree_multiset(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rel in self.relators:
            if rel.degree is not None:
                out[rel.degree] = out.get(rel.degree, 0) + 1
        return out

    def render(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines.extend(rel.text for rel in self.relators)
        return "\n".join(lines) + "\n"

    def hilbert_series(self) -> "HilbertSeries":
        degrees = self.degree_multiset()
        if len([r for r in self.relators if r.degree is None]):
            raise ValueError("presentation has relators without assigned degrees")
        return HilbertSeries(len(self.generators), degrees)


@dataclass(frozen=True)
class HilbertSeries:
    """Coefficients of 1 - |X| t + sum r_i t^i."""

    gen_count: int
    coefficients: Mapping[int, int]

    def __post_init__(self):
        if self.gen_count < 0:
            raise ValueError("generator count must be nonnegative")
        for deg, cnt in self.coefficients.items():
            if deg < 1 or cnt < 0:
                raise ValueError("degrees must be >= 1 with nonnegative counts")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        total = 1.0 - self.gen_count * t
        for deg, cnt in self.coefficients.items():
            total = total + cnt * t**deg
        return total


# -- Kac-Moody-Steinberg style presentations ----------------------------------

@dataclass(frozen=True)
class KmsRing:
    """Coefficient ring for graph-indexed class-two presentations.

    Prime fields ('F', p) and modular rings ('Z', m) are supported; other
    finite fields would need polynomial arithmetic and are rejected.
    """

    kind: str  # "F" or "Z"
    size: int

    def __post_init__(self):
        if self.kind not in ("F", "Z") or self.size < 2:
            raise ValueError("ring must be F<p> with p prime or Z<m> with m >= 2")
        if self.kind == "F" and not _is_prime(self.size):
            raise ValueError(f"F{self.size} is unsupported (only prime fields); use a prime")

    @staticmethod
    def parse(text: str) -> "KmsRing":
        text = text.strip()
        if len(text) < 2 or text[0].upper() not in ("F", "Z"):
            raise ValueError(f"cannot parse ring {text!r}")
        return KmsRing(text[0].upper(), int(text[1:]))

    def mul(self, r: int, s: int) -> int:
        return (r * s) % self.size


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(math.isqrt(n)) + 1))


def _power_rel(gen: str, k: int) -> Relator:
    return Relator(f"{gen}^{k}", (gen,), degree=k)


def _comm2_rel(a: str, b: str) -> Relator:
    return Relator(f"[{a},{b}]", (a, b), degree=2)


def _comm3_rel(a: str, b: str, c: str) -> Relator:
    return Relator(f"[{a},{b},{c}]", (a, b, c), degree=3)


def kms_basic_presentation(topology: Topology, ring: KmsRing) -> Presentation:
    """Graph-indexed class-two presentation over a finite ring.

    One additively presented copy of the ring per vertex; vertices joined by
    an edge satisfy [x_i(r), x_j(s)] = [x_i(1), x_j(rs)] with central edge
    commutators, non-adjacent vertices commute.  Over a prime field on a
    complete graph the compact form <x_1..x_d | x_i^p, [x_i,x_j,x_i]> is
    emitted instead.
    """
    d = topology.vertex_count
    if d < 1:
        raise ValueError("graph needs at least one vertex")
    complete = len(topology.edges) == d * (d - 1) // 2
    if ring.kind == "F" and complete and d >= 2:
        p = ring.size
        gens = [f"x{i}" for i in range(1, d + 1)]
        relators = [_power_rel(g, p) for g in gens]
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                if i != j:
                    relators.append(_comm3_rel(f"x{i}", f"x{j}", f"x{i}"))
        return Presentation(gens, relators)

    m = ring.size
    gens = [f"x{i}({r})" for i in range(1, d + 1) for r in range(1, m)]
    relators: list[Relator] = []

    def gen(i: int, r: int) -> str:
        return f"x{i}({r % m})"

    for i in range(1, d + 1):
        for r in range(1, m):
            for s in range(r, m):
                total = (r + s) % m
                rhs = "1" if total == 0 else gen(i, total)
                used = [gen(i, r), gen(i, s)] + ([] if total == 0 else [rhs])
                relators.append(
                    Relator(f"{gen(i, r)} {gen(i, s)} = {rhs}", tuple(used), degree=None)
                )
    edge_set = {(min(u, v), max(u, v)) for u, v in topology.edges}
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            u, v = i - 1, j - 1
            if (u, v) not in edge_set:
                for r in range(1, m):
                    for s in range(1, m):
                        relators.append(_comm2_rel(gen(i, r), gen(j, s)))
                continue
            for r in range(2, m):  # r = 1 renders identically on both sides
                for s in range(1, m):
                    prod = ring.mul(r, s)
                    rhs = "1" if prod == 0 else f"[{gen(i,1)},{gen(j, prod)}]"
                    used = [gen(i, r), gen(j, s), gen(i, 1)] + (
                        [] if prod == 0 else [gen(j, prod)]
                    )
                    relators.append(
                        Relator(
                            f"[{gen(i,r)},{gen(j,s)}] = {rhs}",
                            tuple(dict.fromkeys(used)),
                            degree=None,
                        )
                    )
            for r in range(1, m):
                for s in range(1, m):
                    for t in range(1, m):
                        relators.append(_comm3_rel(gen(i, r), gen(j, s), gen(i, t)))
                        relators.append(_comm3_rel(gen(j, s), gen(i, r), gen(j, t)))
    return Presentation(gens, relators)


def kms_mixed_presentation(
    topology: Topology, dims: Sequence[int], p: int
) -> Presentation:
    """Class-two presentation with a rank-s_i elementary abelian group per vertex.

    Generators x<i>_<k>, k = 1..s_i; relators: p-th powers, commuting
    generators inside a vertex, and the central triple commutators
    [x_i_k, x_j_l, x_i_m] along edges (both orientations).  Non-adjacent
    vertices commute entrywise.
    """
    if not _is_prime(p):
        raise ValueError("p must be prime")
    d = topology.vertex_count
    if len(dims) != d:
        raise ValueError("one module dimension per vertex is required")
    if any(s < 1 for s in dims):
        raise ValueError("module dimensions must be >= 1")

    def gen(i: int, k: int) -> str:
        return f"x{i}_{k}"

    gens = [gen(i, k) for i in range(1, d + 1) for k in range(1, dims[i - 1] + 1)]
    relators: list[Relator] = [_power_rel(g, p) for g in gens]
    for i in range(1, d + 1):
        s_i = dims[i - 1]
        for k in range(1, s_i + 1):
            for l in range(k + 1, s_i + 1):
                relators.append(_comm2_rel(gen(i, k), gen(i, l)))
    edge_set = {(min(u, v), max(u, v)) for u, v in topology.edges}
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if i == j:
                continue
            u, v = min(i, j) - 1, max(i, j) - 1
            if (u, v) not in edge_set:
                if i < j:
                    for k in range(1, dims[i - 1] + 1):
                        for l in range(1, dims[j - 1] + 1):
                            relators.append(_comm2_rel(gen(i, k), gen(j, l)))
                continue
            for k in range(1, dims[i - 1] + 1):
                for l in range(1, dims[j - 1] + 1):
                    for mm in range(1, dims[i - 1] + 1):
                        relators.append(_comm3_rel(gen(i, k), gen(j, l), gen(i, mm)))
    return Presentation(gens, relators)


def gs2_partition(n: int) -> list[int]:
    """Split n = 9 s + u into nine parts: u parts of size s+1 and 9-u of size s."""
    s, u = divmod(n, 9)
    return [s + 1 if i < u else s for i in range(9)]


def gs2_construction(n: int, p: int) -> Presentation:
    """The n-generator instance on the complete graph with nine vertices."""
    if n < 9:
        raise ValueError("need at least nine generators")
    dims = gs2_partition(n)
    topo = Topology.from_edges(9, [(i, j) for i in range(9) for j in range(i + 1, 9)])
    return kms_mixed_presentation(topo, dims, p)


# -- explicit cover of the elementary matrix group -----------------------------

@dataclass(frozen=True)
class CoverRing:
    """Base ring given by an integral basis with structure constants.

    ``structure[t][t'][u]`` is the coefficient of basis element u in the
    product of basis elements t and t' (0-based); the first basis element must
    be the unit.  ``char`` is the additive order of 1 (0 over the integers).
    """

    char: int  # 0 for the integers, p for a field of characteristic p
    s: int
    structure: tuple  # s x s x s integers

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=np.int64)
        if c.shape != (self.s, self.s, self.s):
            raise ValueError("structure constants must be an s x s x s array")
        for t in range(self.s):
            for u in range(self.s):
                if c[0, t, u] != (1 if t == u else 0) or c[t, 0, u] != (1 if t == u else 0):
                    raise ValueError("first basis element must act as the unit")
        object.__setattr__(self, "structure", tuple(map(tuple, (map(tuple, row) for row in c))))

    @property
    def is_integers(self) -> bool:
        return self.char == 0

    @staticmethod
    def integers() -> "CoverRing":
        return CoverRing(0, 1, (((1,),),))

    @staticmethod
    def prime_field(p: int) -> "CoverRing":
        if not _is_prime(p):
            raise ValueError("p must be prime")
        return CoverRing(p, 1, (((1,),),))

    @staticmethod
    def parse(text: str) -> "CoverRing":
        text = text.strip()
        if text.upper() == "Z":
            return CoverRing.integers()
        if text[0].upper() == "F":
            return CoverRing.prime_field(int(text[1:]))
        raise ValueError(f"cannot parse base ring {text!r}")


def eln_cover_presentation(n: int, d: int, ring: CoverRing) -> Presentation:
    """Explicit finite presentation of a cover of the elementary matrix group.

    Generators e<i>_<j>(a<t>x<m>) for 1 <= i != j <= n, basis index t, and
    ring generator index m in 0..d (x0 = 1); n(n-1)(d+1)s of them.  Relator
    families: torsion powers over a field of characteristic p, commuting pairs
    with disjoint index overlap, the two structure-constant commutator
    families against m = 0 generators, centrality of inner commutators,
    independence of the middle index, and, over the integers only, the
    fourth-power braid relation on the first two indices.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if d < 0:
        raise ValueError("d must be nonnegative")
    s = ring.s
    c = np.asarray(ring.structure, dtype=np.int64)

    def gen(i: int, j: int, t: int, m: int) -> str:
        return f"e{i}_{j}(a{t}x{m})"

    gens = [
        gen(i, j, t, m)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
        for m in range(0, d + 1)
        for t in range(1, s + 1)
    ]
    relators: list[Relator] = []

    if not ring.is_integers:
        for g in gens:
            relators.append(Relator(f"{g}^{ring.char}", (g,), degree=ring.char))

    positions = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    index_of = {g: k for k, g in enumerate(gens)}
    for (i, j) in positions:
        for (i2, j2) in positions:
            if {i, i2} & {j, j2}:
                continue
            for m in range(0, d + 1):
                for t in range(1, s + 1):
                    for m2 in range(0, d + 1):
                        for t2 in range(1, s + 1):
                            g1, g2 = gen(i, j, t, m), gen(i2, j2, t2, m2)
                            if index_of[g1] < index_of[g2]:
                                relators.append(_comm2_rel(g1, g2))

    def structure_product(i: int, k: int, t: int, t2: int, m: int) -> tuple[str, tuple[str, ...]]:
        factors = []
        used = []
        for u in range(1, s + 1):
            coeff = int(c[t - 1, t2 - 1, u - 1])
            if coeff == 0:
                continue
            g = gen(i, k, u, m)
            used.append(g)
            factors.append(g if coeff == 1 else f"{g}^{coeff}")
        return (" ".join(factors) if factors else "1"), tuple(used)

    triples = [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        for k in range(1, n + 1)
        if len({i, j, k}) == 3
    ]
    for (i, j, k) in triples:
        for t in range(1, s + 1):
            for t2 in range(1, s + 1):
                for m in range(0, d + 1):
                    rhs, used = structure_product(i, k, t, t2, m)
                    lhs_used = (gen(i, j, t, m), gen(j, k, t2, 0))
                    relators.append(
                        Relator(
                            f"[{lhs_used[0]},{lhs_used[1]}] = {rhs}",
                            tuple(dict.fromkeys(lhs_used + used)),
                            degree=None,
                        )
                    )
                    lhs_used = (gen(i, j, t2, 0), gen(j, k, t, m))
                    relators.append(
                        Relator(
                            f"[{lhs_used[0]},{lhs_used[1]}] = {rhs}",
                            tuple(dict.fromkeys(lhs_used + used)),
                            degree=None,
                        )
                    )

    for (i, j, k) in triples:
        for (i2, k2) in positions:
            if {i, i2} & {k, k2}:
                continue
            for t in range(1, s + 1):
                for t2 in range(1, s + 1):
                    for t3 in range(1, s + 1):
                        for m in range(0, d + 1):
                            for m2 in range(0, d + 1):
                                for m3 in range(0, d + 1):
                                    a = gen(i, j, t, m)
                                    b = gen(j, k, t2, m2)
                                    cc = gen(i2, k2, t3, m3)
                                    relators.append(
                                        Relator(
                                            f"[[{a},{b}],{cc}]",
                                            tuple(dict.fromkeys((a, b, cc))),
                                            degree=None,
                                        )
                                    )

    for i in range(1, n + 1):
        for k in range(1, n + 1):
            if i == k:
                continue
            middles = [j for j in range(1, n + 1) if j not in (i, k)]
            for ji, j in enumerate(middles):
                for j2 in middles[ji + 1 :]:
                    for t in range(1, s + 1):
                        for t2 in range(1, s + 1):
                            for m in range(0, d + 1):
                                for m2 in range(0, d + 1):
                                    a, b = gen(i, j, t, m), gen(j, k, t2, m2)
                                    a2, b2 = gen(i, j2, t, m), gen(j2, k, t2, m2)
                                    relators.append(
                                        Relator(
                                            f"[{a},{b}] = [{a2},{b2}]",
                                            tuple(dict.fromkeys((a, b, a2, b2))),
                                            degree=None,
                                        )
                                    )

    if ring.is_integers:
        a, b = gen(1, 2, 1, 0), gen(2, 1, 1, 0)
        relators.append(
            Relator(f"({a} {b}^-1 {a})^4", (a, b), degree=None)
        )
    return Presentation(gens, relators)


# -- Golod-Shafarevich checking -------------------------------------------------

@dataclass(frozen=True)
class GSReport:
    satisfied: bool
    best_t: float
    h_best: float
    t_hint: float | None = None
    h_hint: float | None = None

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "best_t": self.best_t,
            "h_best": self.h_best,
            "t_hint": self.t_hint,
            "h_hint": self.h_hint,
        }


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section_min(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def gs_check(series: HilbertSeries, t_hint: float | None = None) -> GSReport:
    """Search (0, 1) for H(t) < 0: dense grid refined by golden section.

    The grid has step 1e-4; golden-section refinement around the best grid
    point sharpens the minimizer to 1e-10.  A hint point is evaluated and
    reported verbatim when given.
    """
    if series.gen_count == 0 and not series.coefficients:
        raise ValueError("empty series")
    grid = np.arange(1e-4, 1.0, 1e-4)
    values = series.evaluate(grid)
    best_idx = int(np.argmin(values))
    lo = grid[max(0, best_idx - 1)]
    hi = grid[min(len(grid) - 1, best_idx + 1)]
    f = lambda t: float(series.evaluate(t))
    refined = _golden_section_min(f, float(lo), float(hi))
    h_best, best_t = min(
        (f(refined), refined), (float(values[best_idx]), float(grid[best_idx]))
    )
    h_hint = f(t_hint) if t_hint is not None else None
    return GSReport(h_best < 0.0, float(best_t), float(h_best), t_hint, h_hint)


def gs1_series(d: int, p: int) -> HilbertSeries:
    """Series 1 - d t + d(d-1) t^3 + d t^p of the complete-graph presentation."""
    coeffs = {3: d * (d - 1)}
    coeffs[p] = coeffs.get(p, 0) + d
    return HilbertSeries(d, coeffs)


def gs2_series(n: int, p: int) -> HilbertSeries:
    """Series of the nine-vertex mixed construction with n generators."""
    dims = gs2_partition(n)
    deg2 = sum(s * (s - 1) // 2 for s in dims)
    deg3 = sum(
        dims[i] * dims[i] * dims[j] for i in range(9) for j in range(9) if i != j
    )
    coeffs = {2: deg2, 3: deg3}
    coeffs[p] = coeffs.get(p, 0) + n
    return HilbertSeries(n, coeffs)


def gs2_hypotheses(n: int, p: int) -> dict:
    """The two hypothesis sets for the nine-vertex construction, kept separate.

    The headline statement needs n >= 99 and p > 64; the witness-point
    inequality H(1/(s sqrt 24)) < 0 only needs s = n // 9 >= 11 and p >= 5.
    Both are reported; no reconciliation is attempted.
    """
    s = n // 9
    return {
        "statement": {"n_ge_99": n >= 99, "p_gt_64": p > 64},
        "witness_inequality": {"s_ge_11": s >= 11, "p_ge_5": p >= 5},
        "s": s,
    }


def series_from_dict(data: dict) -> HilbertSeries:
    """Parse {"gens": n, "relations": {"2": r2, "3": r3, "p": rp}, "p": p}."""
    gens = int(data["gens"])
    p = data.get("p")
    coeffs: dict[int, int] = {}
    for key, cnt in data.get("relations", {}).items():
        if key == "p":
            if p is None:
                raise ValueError("relations use the symbolic degree p but no p is given")
            deg = int(p)
        else:
            deg = int(key)
        coeffs[deg] = coeffs.get(deg, 0) + int(cnt)
    return HilbertSeries(gens, coeffs)
