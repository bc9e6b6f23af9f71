"""Exact rational linear algebra and LP feasibility.

Everything here runs over ``fractions.Fraction``: arbitrary precision,
always in lowest terms with a positive denominator, so equality is
structural and no tolerance appears anywhere.

The single solver entry point is :func:`solve_feasibility`, which decides
whether ``{x >= 0 : A x = b}`` is nonempty using a phase-1 simplex with
Bland's anti-cycling pivot rule (termination is then unconditional).  The
answer always carries a certificate: a feasible point, or a Farkas vector
``y`` with ``y^T A <= 0`` and ``y^T b > 0``.  Certificates are re-checked
by plain substitution before they are returned, so callers never have to
trust the tableau bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InputError, VerificationError

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce ints, strings like '3/4' or '-2', and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """'p/q', or just 'p' for integers.  Inverse of :func:`rat`."""
    return str(q)


class RationalMatrix:
    """Immutable dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(rat(e) for e in entries)
        if len(entries) != rows * cols:
            raise InputError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self._entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise InputError("ragged rows")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise InputError(f"index {key} out of range for {self.rows}x{self.cols}")
        return self._entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._entries[i * self.cols: (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self._entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows,
            [self[i, j] for j in range(self.cols) for i in range(self.rows)],
        )

    def flatten(self) -> tuple:
        return self._entries

    def matvec(self, x: Sequence[Fraction]) -> list:
        if len(x) != self.cols:
            raise InputError("matvec dimension mismatch")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum((self._entries[base + j] * x[j] for j in range(self.cols)), ZERO))
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix({self.rows}x{self.cols}: {body})"


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of :func:`solve_feasibility` with its certificate.

    Exactly one of ``x`` (feasible point, componentwise >= 0, A x = b) and
    ``farkas`` (y with y^T A <= 0 and y^T b > 0) is set.
    """

    feasible: bool
    x: Optional[tuple] = None
    farkas: Optional[tuple] = None


def _verify_feasible(A: RationalMatrix, b: Sequence[Fraction], x: Sequence[Fraction]) -> None:
    if any(v < 0 for v in x):
        raise VerificationError("feasible certificate has a negative component")
    if A.matvec(x) != list(b):
        raise VerificationError("feasible certificate does not satisfy A x = b")


def _verify_farkas(A: RationalMatrix, b: Sequence[Fraction], y: Sequence[Fraction]) -> None:
    for j in range(A.cols):
        s = sum((y[i] * A[i, j] for i in range(A.rows)), ZERO)
        if s > 0:
            raise VerificationError("Farkas certificate violates y^T A <= 0")
    if sum((y[i] * b[i] for i in range(A.rows)), ZERO) <= 0:
        raise VerificationError("Farkas certificate violates y^T b > 0")


def solve_feasibility(A: RationalMatrix, b: Sequence[Fraction]) -> FeasibilityResult:
    """Decide {x >= 0 : A x = b} exactly, with a verified certificate.

    A system with zero rows is vacuously feasible at x = 0.
    """
    b = [rat(v) for v in b]
    m, n = A.rows, A.cols
    if len(b) != m:
        raise InputError(f"b has {len(b)} entries but A has {m} rows")
    if m == 0:
        result = FeasibilityResult(True, x=tuple([ZERO] * n))
        _verify_feasible(A, b, result.x)
        return result

    # Sign-normalize so the right-hand side is nonnegative; remember the
    # flips to map the Farkas vector back to the original rows.
    signs = [ONE if v >= 0 else -ONE for v in b]
    tab = []
    for i in range(m):
        row = [signs[i] * e for e in A.row(i)]
        row.extend(ONE if t == i else ZERO for t in range(m))  # artificials
        row.append(signs[i] * b[i])
        tab.append(row)

    total = n + m  # columns before the rhs
    rhs = total

    # Reduced-cost row for minimizing the sum of artificials, already
    # priced out against the initial artificial basis.
    red = [ZERO] * (total + 1)
    for j in range(n):
        red[j] = -sum((tab[i][j] for i in range(m)), ZERO)
    red[rhs] = -sum((tab[i][rhs] for i in range(m)), ZERO)  # = -objective

    basis = list(range(n, n + m))

    while True:
        enter = -1
        for j in range(total):  # Bland: lowest eligible index enters
            if red[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave_row = -1
        best = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][rhs] / coef
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave_row]
                ):
                    best = ratio
                    leave_row = i
        if leave_row < 0:
            raise VerificationError("phase-1 objective unbounded; invariant broken")
        piv = tab[leave_row][enter]
        prow = [v / piv for v in tab[leave_row]]
        tab[leave_row] = prow
        for i in range(m):
            if i != leave_row and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * p for a, p in zip(tab[i], prow)]
        f = red[enter]
        if f != 0:
            red = [a - f * p for a, p in zip(red, prow)]
        basis[leave_row] = enter

    objective = -red[rhs]
    if objective == 0:
        x = [ZERO] * n
        for i, bv in enumerate(basis):
            if bv < n:
                x[bv] = tab[i][rhs]
        result = FeasibilityResult(True, x=tuple(x))
        _verify_feasible(A, b, result.x)
        return result

    # Simplex multipliers: reduced cost of artificial i is 1 - y'_i, and
    # y' certifies the sign-normalized system; undo the row flips.
    y = tuple(signs[i] * (ONE - red[n + i]) for i in range(m))
    result = FeasibilityResult(False, farkas=y)
    _verify_farkas(A, b, result.farkas)
    return result


def rank(A: RationalMatrix) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    if A.rows == 0 or A.cols == 0:
        return 0
    # Clear denominators row by row; scaling a row by a positive integer
    # does not change the rank.
    M = []
    for i in range(A.rows):
        row = list(A.row(i))
        scale = math.lcm(*(e.denominator for e in row))
        M.append([int(e * scale) for e in row])

    rows, cols = A.rows, A.cols
    r = 0
    prev = 1
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if M[i][c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == rows:
            break
    return r
