"""Heisenberg-type groups over Z/m and their explicit unitary representations.

The block group with shape (a, b, c) over Z/m consists of triples
(A, B, C) with A an a x b block, B a b x c block, C an a x c block, multiplied
by (A, B, C)(A', B', C') = (A+A', B+B', C+C'+A B') mod m.  Shape (1, 1, 1)
is the Heisenberg group of order m^3, generated by x = (1,0,0) and
y = (0,1,0) with the commutator z = [x, y] central.

For prime p the module also enumerates the full irreducible census of the
order-p^3 group: p^2 characters and p-1 representations of degree p built
from a primitive p-th root of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, Subgroup

__all__ = [
    "BlockHeisenbergGroup",
    "HeisenbergModel",
    "heisenberg",
    "block_heisenberg",
    "heisenberg_irreps",
    "class_two_corpus",
    "is_prime",
]

_HEISENBERG_P_CAP = 13


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(math.isqrt(n)) + 1))


class BlockHeisenbergGroup(FiniteGroup):
    """Unitriangular block group over Z/m with blocks of shape (a, b) / (b, c) / (a, c)."""

    def __init__(self, a: int, b: int, c: int, m: int):
        super().__init__()
        if min(a, b, c) < 1 or m < 2:
            raise ValueError("block sizes must be >= 1 and modulus >= 2")
        self.a, self.b, self.c, self.m = a, b, c, m
        self.nA, self.nB, self.nC = a * b, b * c, a * c
        digits = self.nA + self.nB + self.nC
        self.order = m**digits
        self.identity = 0
        # cached component arrays, one row of digits per element
        self._powers = m ** np.arange(digits, dtype=np.int64)
        codes = np.arange(self.order, dtype=np.int64)
        comp = (codes[:, None] // self._powers[None, :]) % m
        self._A = comp[:, : self.nA].reshape(self.order, a, b)
        self._B = comp[:, self.nA : self.nA + self.nB].reshape(self.order, b, c)
        self._C = comp[:, self.nA + self.nB :].reshape(self.order, a, c)
        self.validate()

    def _encode(self, A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
        digits = np.concatenate(
            [
                A.reshape(*A.shape[:-2], self.nA),
                B.reshape(*B.shape[:-2], self.nB),
                C.reshape(*C.shape[:-2], self.nC),
            ],
            axis=-1,
        )
        return (digits % self.m) @ self._powers

    def element(self, A, B, C) -> int:
        A = np.asarray(A, dtype=np.int64).reshape(self.a, self.b)
        B = np.asarray(B, dtype=np.int64).reshape(self.b, self.c)
        C = np.asarray(C, dtype=np.int64).reshape(self.a, self.c)
        return int(self._encode(A, B, C))

    def components(self, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._A[i], self._B[i], self._C[i]

    def _mul(self, i: int, j: int) -> int:
        A = self._A[i] + self._A[j]
        B = self._B[i] + self._B[j]
        C = self._C[i] + self._C[j] + self._A[i] @ self._B[j]
        return int(self._encode(A, B, C))

    def _inv(self, i: int) -> int:
        A, B, C = self._A[i], self._B[i], self._C[i]
        return int(self._encode(-A, -B, A @ B - C))

    def _mul_row_impl(self, i: int) -> np.ndarray:
        A = self._A[i][None, :, :] + self._A
        B = self._B[i][None, :, :] + self._B
        C = self._C[i][None, :, :] + self._C + np.einsum("ab,nbc->nac", self._A[i], self._B)
        return self._encode(A, B, C)

    def label(self, i: int) -> str:
        A, B, C = self.components(i)
        if self.a == self.b == self.c == 1:
            return f"({int(A[0,0])},{int(B[0,0])},{int(C[0,0])})"
        fmt = lambda M: "".join(str(int(x)) for x in M.flat)
        return f"({fmt(A)}|{fmt(B)}|{fmt(C)})"

    # marked generating subgroups
    def left_block_subgroup(self) -> Subgroup:
        """All (A, 0, 0)."""
        codes = [
            int(self._encode(M.reshape(self.a, self.b), self._zero_b(), self._zero_c()))
            for M in self._all_blocks(self.nA)
        ]
        return Subgroup(self, tuple(codes))

    def right_block_subgroup(self) -> Subgroup:
        """All (0, B, 0)."""
        codes = [
            int(self._encode(self._zero_a(), M.reshape(self.b, self.c), self._zero_c()))
            for M in self._all_blocks(self.nB)
        ]
        return Subgroup(self, tuple(codes))

    def center_block_subgroup(self) -> Subgroup:
        """All (0, 0, C); the commutator subgroup."""
        codes = [
            int(self._encode(self._zero_a(), self._zero_b(), M.reshape(self.a, self.c)))
            for M in self._all_blocks(self.nC)
        ]
        return Subgroup(self, tuple(codes))

    def _all_blocks(self, size: int):
        pw = self.m ** np.arange(size, dtype=np.int64)
        for code in range(self.m**size):
            yield (code // pw) % self.m

    def _zero_a(self):
        return np.zeros((self.a, self.b), dtype=np.int64)

    def _zero_b(self):
        return np.zeros((self.b, self.c), dtype=np.int64)

    def _zero_c(self):
        return np.zeros((self.a, self.c), dtype=np.int64)


@dataclass(frozen=True)
class HeisenbergModel:
    """Heisenberg group with its marked generators and abelian subgroups."""

    group: BlockHeisenbergGroup
    x: int
    y: int
    z: int
    X: Subgroup
    Y: Subgroup
    Z: Subgroup


def block_heisenberg(a: int, b: int, c: int, m: int) -> HeisenbergModel:
    g = BlockHeisenbergGroup(a, b, c, m)
    ea = np.zeros((a, b), dtype=np.int64)
    ea[0, 0] = 1
    eb = np.zeros((b, c), dtype=np.int64)
    eb[0, 0] = 1
    ec = np.zeros((a, c), dtype=np.int64)
    ec[0, 0] = 1
    return HeisenbergModel(
        group=g,
        x=g.element(ea, g._zero_b(), g._zero_c()),
        y=g.element(g._zero_a(), eb, g._zero_c()),
        z=g.element(g._zero_a(), g._zero_b(), ec),
        X=g.left_block_subgroup(),
        Y=g.right_block_subgroup(),
        Z=g.center_block_subgroup(),
    )


def heisenberg(p: int) -> HeisenbergModel:
    """Heisenberg group over the field with p elements (p prime, desk scale)."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p > _HEISENBERG_P_CAP:
        raise ValueError(f"p = {p} exceeds the desk-scale cap {_HEISENBERG_P_CAP}")
    return block_heisenberg(1, 1, 1, p)


def heisenberg_zm(m: int) -> HeisenbergModel:
    """Heisenberg group over Z/m (any modulus >= 2)."""
    return block_heisenberg(1, 1, 1, m)


def heisenberg_irreps(p: int, model: HeisenbergModel | None = None):
    """Full irreducible census of the order-p^3 Heisenberg group over F_p.

    Returns p^2 one-dimensional representations (characters trivial on the
    center) followed by p-1 representations of degree p, one per nontrivial
    p-th root of unity zeta, acting by

        rho(a, b, c) e_i = zeta^(c + a i) e_(i + b mod p).

    The sum of squared degrees is p^2 + (p-1) p^2 = p^3.  Pass the model whose
    subgroups you plan to analyse so the representations share its group
    object.
    """
    from .reps import UnitaryRep

    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if model is None:
        model = heisenberg(p)
    elif model.group.a != 1 or model.group.b != 1 or model.group.c != 1 or model.group.m != p:
        raise ValueError("model is not the Heisenberg group over F_p")
    g = model.group
    a_of = g._A[:, 0, 0].astype(np.int64)
    b_of = g._B[:, 0, 0].astype(np.int64)
    c_of = g._C[:, 0, 0].astype(np.int64)
    # exact roots of unity via (cos, sin) of 2 pi k / p
    angles = 2.0 * np.pi * np.arange(p) / p
    roots = np.cos(angles) + 1j * np.sin(angles)

    reps = []
    for mu in range(p):
        for nu in range(p):
            vals = roots[(mu * a_of + nu * b_of) % p]
            mats = vals.reshape(g.order, 1, 1)
            reps.append(UnitaryRep(g, 1, mats, name=f"chi({mu},{nu})"))
    for k in range(1, p):
        mats = np.zeros((g.order, p, p), dtype=complex)
        cols = np.arange(p)
        for idx in range(g.order):
            a, b, c = int(a_of[idx]), int(b_of[idx]), int(c_of[idx])
            rows = (cols + b) % p
            mats[idx, rows, cols] = roots[(c + a * cols) % p]
        reps.append(UnitaryRep(g, p, mats, name=f"rho(zeta^{k})"))
    return reps


def class_two_corpus() -> list[tuple[str, HeisenbergModel]]:
    """Nilpotency-class-two groups generated by two abelian subgroups.

    Heisenberg groups over Z/q for every prime power q <= 16, plus block
    variants over small moduli; all orders stay within the dense-analysis cap.
    """
    corpus: list[tuple[str, HeisenbergModel]] = []
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16):
        corpus.append((f"H(Z/{q})", heisenberg_zm(q)))
    blocks = [
        (1, 1, 2, 2),
        (1, 2, 1, 2),
        (2, 1, 1, 2),
        (1, 2, 2, 2),
        (2, 1, 2, 2),
        (2, 2, 1, 2),
        (1, 1, 3, 2),
        (1, 3, 1, 2),
        (3, 1, 1, 2),
        (1, 2, 3, 2),
        (2, 2, 2, 2),
        (1, 1, 2, 3),
        (1, 2, 1, 3),
        (2, 1, 1, 3),
        (1, 1, 2, 4),
    ]
    for a, b, c, m in blocks:
        corpus.append((f"H[{a},{b},{c}](Z/{m})", block_heisenberg(a, b, c, m)))
    return corpus
