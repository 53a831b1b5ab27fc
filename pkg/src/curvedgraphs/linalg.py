"""Exact sparse linear algebra over the rationals.

Rank via fraction-free (Bareiss) elimination with Markowitz-style pivot
selection; linear systems solved by exact sparse Gaussian elimination.
No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm


class LinalgError(ValueError):
    pass


@dataclass
class SparseRationalMatrix:
    """Coordinate-listed sparse matrix of exact rationals."""

    nrows: int
    ncols: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise LinalgError("entry out of bounds")
            v = Fraction(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    def set(self, r: int, c: int, v: Fraction) -> None:
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise LinalgError("entry out of bounds")
        if v:
            self.entries[(r, c)] = Fraction(v)
        else:
            self.entries.pop((r, c), None)

    def rows(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(
            self.ncols, self.nrows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def rank(self) -> int:
        return rank(self)


def _integer_rows(m: SparseRationalMatrix) -> list[dict[int, int]]:
    """Rows rescaled to integers (rank is unchanged by row scaling)."""
    rows: list[dict[int, Fraction]] = m.rows()
    out: list[dict[int, int]] = []
    for row in rows:
        if not row:
            out.append({})
            continue
        denom = 1
        for v in row.values():
            denom = lcm(denom, v.denominator)
        ints = {c: int(v * denom) for c, v in row.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, abs(v))
        if g > 1:
            ints = {c: v // g for c, v in ints.items()}
        out.append(ints)
    return out


def rank(m: SparseRationalMatrix) -> int:
    """Exact rank by one-step fraction-free elimination.

    Pivots are chosen by the Markowitz count (nnz_row - 1)(nnz_col - 1),
    ties broken by position for determinism; the Bareiss division by the
    previous pivot keeps all intermediate values integral.
    """
    rows = [row for row in _integer_rows(m) if row]
    rank_count = 0
    prev_pivot = 1
    while rows:
        col_count: dict[int, int] = {}
        for row in rows:
            for c in row:
                col_count[c] = col_count.get(c, 0) + 1
        best = None
        for ri, row in enumerate(rows):
            rweight = len(row) - 1
            for c, v in row.items():
                score = rweight * (col_count[c] - 1)
                key = (score, ri, c)
                if best is None or key < best[0]:
                    best = (key, ri, c, v)
        _, pi, pc, pv = best
        pivot_row = rows.pop(pi)
        rank_count += 1
        new_rows = []
        for row in rows:
            x = row.get(pc)
            if x is None:
                new_rows.append(row)
                continue
            out: dict[int, int] = {}
            for c in set(row) | set(pivot_row):
                if c == pc:
                    continue
                val = pv * row.get(c, 0) - x * pivot_row.get(c, 0)
                if val:
                    out[c] = val // prev_pivot
            if out:
                new_rows.append(out)
        rows = new_rows
        prev_pivot = pv
    return rank_count


def solve(m: SparseRationalMatrix, rhs: dict[int, Fraction]) -> dict[int, Fraction] | None:
    """One exact solution of m x = rhs, or None when inconsistent.

    Free variables are set to zero; elimination order is deterministic.
    """
    rows = m.rows()
    b = [Fraction(rhs.get(r, 0)) for r in range(m.nrows)]
    aug = [(dict(row), b[r]) for r, row in enumerate(rows)]
    aug = [(row, bv) for row, bv in aug if row or bv]
    pivots: list[tuple[int, dict[int, Fraction], Fraction]] = []
    while aug:
        # deterministic sparse pivot: fewest entries, then lowest column
        best = None
        for ri, (row, bv) in enumerate(aug):
            if not row:
                continue
            c = min(row)
            key = (len(row), c, ri)
            if best is None or key < best[0]:
                best = (key, ri, c)
        if best is None:
            # only zero rows remain; consistent iff rhs parts vanish
            if any(bv for row, bv in aug):
                return None
            break
        _, ri, pc = best
        row, bv = aug.pop(ri)
        pv = row[pc]
        row = {c: v / pv for c, v in row.items()}
        bv = bv / pv
        pivots.append((pc, row, bv))
        nxt = []
        for r2, b2 in aug:
            x = r2.get(pc)
            if x:
                r2 = {
                    c: v
                    for c in set(r2) | set(row)
                    if (v := r2.get(c, Fraction(0)) - x * row.get(c, Fraction(0)))
                }
                b2 = b2 - x * bv
            if r2 or b2:
                nxt.append((r2, b2))
        aug = nxt
    # back substitution with free variables zero
    solution: dict[int, Fraction] = {}
    for pc, row, bv in reversed(pivots):
        val = bv
        for c, v in row.items():
            if c != pc and c in solution:
                val -= v * solution[c]
        if val:
            solution[pc] = val
    # verify (cheap and certifies consistency)
    residual: dict[int, Fraction] = {}
    for (r, c), v in m.entries.items():
        x = solution.get(c)
        if x:
            residual[r] = residual.get(r, Fraction(0)) + v * x
    for r in range(m.nrows):
        if residual.get(r, Fraction(0)) != Fraction(rhs.get(r, 0)):
            return None
    return solution
