"""Exact linear algebra over the rationals.

Dense matrices of ``fractions.Fraction`` entries with reduced row echelon
form, nullspaces and linear solving.  Everything is exact; no floating
point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

QZERO = Fraction(0)
QONE = Fraction(1)


@dataclass(frozen=True)
class QMatrix:
    """Dense row-major rational matrix."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match rows*cols")

    @staticmethod
    def from_rows(rows) -> "QMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        entries = tuple(Fraction(x) for r in rows for x in r)
        return QMatrix(n, m, entries)

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix.from_rows(
            [[QONE if i == j else QZERO for j in range(n)] for i in range(n)]
        )

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "QMatrix":
        return QMatrix.from_rows(
            [[self.at(i, j) for i in range(self.rows)] for j in range(self.cols)]
        )

    def mul_vec(self, v) -> list:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [
            sum((self.at(i, j) * v[j] for j in range(self.cols)), QZERO)
            for i in range(self.rows)
        ]


def _rref_rows(rows):
    """In-place Gauss-Jordan on a list of row lists; returns pivot columns."""
    if not rows:
        return []
    n, m = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(m):
        if r == n:
            break
        pr = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = QONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: QMatrix):
    """Reduced row echelon form.  Returns (R, pivot column indices)."""
    rows = M.to_rows()
    pivots = _rref_rows(rows)
    return QMatrix.from_rows(rows) if rows else M, pivots


def rank(M: QMatrix) -> int:
    return len(rref(M)[1])


def nullspace(M: QMatrix):
    """Basis of {x : Mx = 0}, one vector per free column (set to 1)."""
    R, pivots = rref(M)
    pivot_set = set(pivots)
    free = [c for c in range(M.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [QZERO] * M.cols
        v[fc] = QONE
        for r, pc in enumerate(pivots):
            v[pc] = -R.at(r, fc)
        basis.append(v)
    return basis


def solve(M: QMatrix, b):
    """Solve Mx = b exactly.

    Returns (particular solution, nullspace basis) or None when the
    system is inconsistent.
    """
    if len(b) != M.rows:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug_rows = [M.row(i) + [Fraction(b[i])] for i in range(M.rows)]
    pivots = _rref_rows(aug_rows)
    if M.cols in pivots:
        return None
    x = [QZERO] * M.cols
    for r, pc in enumerate(pivots):
        x[pc] = aug_rows[r][M.cols]
    return x, nullspace(M)
