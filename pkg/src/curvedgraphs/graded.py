"""Z/2-graded linear algebra over the rationals.

Everything downstream works with finite-dimensional super vector spaces
over Q: basis parities, Koszul signs, parity reversion and nondegenerate
even inner products.  All arithmetic is exact (`fractions.Fraction`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

EVEN = 0
ODD = 1


class GradedError(ValueError):
    """Raised when graded data violates its invariants."""


@dataclass(frozen=True)
class GradedSpace:
    """A finite-dimensional Z/2-graded vector space with an ordered basis.

    ``parities[b]`` is 0 for an even basis vector and 1 for an odd one.
    By convention freshly constructed spaces list even vectors first;
    parity reversion keeps labels and flips every parity.
    """

    dim_even: int
    dim_odd: int
    parities: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dim_even < 0 or self.dim_odd < 0:
            raise GradedError("negative dimension")
        if len(self.parities) != self.dim_even + self.dim_odd:
            raise GradedError("parity sequence has wrong length")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise GradedError("parities must be 0 or 1")
        if sum(1 for p in self.parities if p == EVEN) != self.dim_even:
            raise GradedError("parity counts disagree with dimensions")

    @classmethod
    def of(cls, dim_even: int, dim_odd: int) -> "GradedSpace":
        return cls(dim_even, dim_odd, (EVEN,) * dim_even + (ODD,) * dim_odd)

    @property
    def dim(self) -> int:
        return self.dim_even + self.dim_odd

    def reversed(self) -> "GradedSpace":
        """Parity reversion: same labels, every parity flipped."""
        return GradedSpace(
            self.dim_odd, self.dim_even, tuple(1 - p for p in self.parities)
        )

    def parity(self, b: int) -> int:
        return self.parities[b]

    def word_parity(self, word: Sequence[int]) -> int:
        return sum(self.parities[b] for b in word) % 2


def koszul_sign(perm: Sequence[int], parities: Sequence[int]) -> int:
    """Sign picked up by permuting homogeneous elements of given parities.

    ``perm[i]`` is the position that the element in slot ``i`` moves to, so
    ``x_1 x_2 ... x_n  ->  +/- x_{perm^-1(1)} ... x_{perm^-1(n)}``.
    Each inversion of two odd elements contributes a factor of -1.
    """
    n = len(perm)
    if len(parities) != n:
        raise GradedError("permutation and parity sequence lengths differ")
    if sorted(perm) != list(range(n)):
        raise GradedError("not a permutation of 0..n-1")
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j] and parities[i] == ODD and parities[j] == ODD:
                sign = -sign
    return sign


def perm_sign(perm: Sequence[int]) -> int:
    """Ordinary sign of a permutation (all slots treated as odd)."""
    n = len(perm)
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _invert_matrix(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination; raises if singular."""
    n = len(rows)
    aug = [list(row) + [Fraction(i == j) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise GradedError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class InnerProduct:
    """Nondegenerate even supersymmetric bilinear form on a GradedSpace.

    Even: ``gram[i][j] == 0`` unless ``parity(i) == parity(j)``.
    Supersymmetric: ``gram[j][i] == (-1)^{|i||j|} gram[i][j]``.
    """

    space: GradedSpace
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = self.space.dim
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise GradedError("gram matrix has wrong shape")
        par = self.space.parities
        for i in range(n):
            for j in range(n):
                if par[i] != par[j] and self.gram[i][j] != 0:
                    raise GradedError("inner product is not even")
                expected = self.gram[i][j] if (par[i] * par[j]) % 2 == 0 else -self.gram[i][j]
                if self.gram[j][i] != expected:
                    raise GradedError("inner product is not supersymmetric")
        # nondegeneracy; stash the inverse for inverse_pairing
        inv = _invert_matrix([list(row) for row in self.gram])
        object.__setattr__(self, "_inv", tuple(tuple(row) for row in inv))

    @classmethod
    def from_rows(cls, space: GradedSpace, rows: Sequence[Sequence]) -> "InnerProduct":
        return cls(space, tuple(tuple(Fraction(x) for x in row) for row in rows))

    def pair(self, i: int, j: int) -> Fraction:
        return self.gram[i][j]

    def pair_vectors(self, u: dict[int, Fraction], v: dict[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for i, a in u.items():
            for j, b in v.items():
                g = self.gram[i][j]
                if g:
                    total += a * b * g
        return total


def inverse_pairing(ip: InnerProduct) -> dict[tuple[int, int], Fraction]:
    """The two-tensor f with sum_j f[i,j] * gram[j,k] = delta_{ik}.

    Contracting f against the pairing in either slot gives the identity;
    f is even and supersymmetric in the same sense as the gram matrix.
    """
    inv = ip._inv  # type: ignore[attr-defined]
    n = ip.space.dim
    return {
        (i, j): inv[i][j]
        for i in range(n)
        for j in range(n)
        if inv[i][j] != 0
    }
