"""Exact rational linear algebra and a two-phase simplex solver.

There is no tolerance anywhere.  Hot loops run on ``gmpy2.mpq``; public
results are handed back as :class:`fractions.Fraction`.  The simplex method
always uses Bland's rule, since the polytopes of interest are highly
degenerate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

log = logging.getLogger(__name__)

Matrix = list[list]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[q(v) for v in row] for row in rows]


def rref(M: Sequence[Sequence], augmented: bool = False) -> tuple[list[list[Fraction]], list[int]]:
    R, pivots = rref_q(M, augmented)
    return [[frac(v) for v in row] for row in R], pivots


def rref_q(M: Sequence[Sequence], augmented: bool = False) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns.

    With ``augmented=True`` the last column is treated as a right-hand side and
    never chosen as a pivot; a zero row with nonzero right-hand side then
    signals an inconsistent system (see :func:`is_consistent`).
    """
    R = to_matrix(M)
    if not R:
        return R, []
    ncols = len(R[0]) - (1 if augmented else 0)
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == len(R):
            break
        piv = next((r for r in range(row, len(R)) if R[r][col] != 0), None)
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        p = R[row][col]
        if p != 1:
            R[row] = [v / p for v in R[row]]
        prow = R[row]
        for r in range(len(R)):
            f = R[r][col]
            if r != row and f != 0:
                R[r] = [a - f * b for a, b in zip(R[r], prow)]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not len(M[0]):
        return 0
    return len(rref_q(M)[1])


def is_consistent(R: Matrix, pivots: list[int]) -> bool:
    return all(v == 0 for row in R[len(pivots):] for v in row[-1:])


def transpose(M: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*M)]


@dataclass(frozen=True)
class AffineSolution:
    particular: tuple[Fraction, ...]
    nullspace: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.nullspace)


def solve_affine(A: Sequence[Sequence], b: Sequence) -> AffineSolution | None:
    """Parametrize ``{x : Ax = b}``; returns ``None`` when the system is inconsistent."""
    n = len(A[0]) if A else 0
    if not A:
        return AffineSolution(tuple([Fraction(0)] * n), ())
    R, pivots = rref_q([list(row) + [bi] for row, bi in zip(A, b)], augmented=True)
    if not is_consistent(R, pivots):
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = frac(R[r][-1])
    pivot_set = set(pivots)
    basis = []
    for f in (j for j in range(n) if j not in pivot_set):
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -frac(R[r][f])
        basis.append(tuple(v))
    return AffineSolution(tuple(x), tuple(basis))


def independent_rows(A: Sequence[Sequence], b: Sequence) -> tuple[Matrix, list[Fraction]] | None:
    """Row-reduce ``[A|b]`` to an equivalent system with independent rows, or ``None`` if inconsistent."""
    if not A:
        return [], []
    R, pivots = rref_q([list(row) + [bi] for row, bi in zip(A, b)], augmented=True)
    if not is_consistent(R, pivots):
        return None
    k = len(pivots)
    return [row[:-1] for row in R[:k]], [row[-1] for row in R[:k]]


@dataclass(frozen=True)
class LPProblem:
    """Optimize ``c.x`` subject to ``Ax = b`` and ``x >= 0``."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    maximize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(Fraction(v) for v in row) for row in self.A))
        object.__setattr__(self, "b", tuple(Fraction(v) for v in self.b))
        object.__setattr__(self, "c", tuple(Fraction(v) for v in self.c))
        if len(self.A) != len(self.b):
            raise ValueError("A and b have different row counts")
        if any(len(row) != len(self.c) for row in self.A):
            raise ValueError("every row of A must have len(c) entries")


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense simplex tableau; row ``m`` holds reduced costs and ``-objective``."""

    def __init__(self, rows: Matrix, basis: list[int]):
        self.T = rows
        self.basis = basis

    @property
    def m(self):
        return len(self.basis)

    def pivot(self, r: int, col: int):
        T = self.T
        p = T[r][col]
        if p != 1:
            T[r] = [v / p for v in T[r]]
        prow = T[r]
        nz = [j for j, v in enumerate(prow) if v != 0]
        for i in range(len(T)):
            f = T[i][col]
            if i != r and f != 0:
                row = T[i]
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = col

    def run(self, allowed: int) -> str:
        """Minimize over columns ``< allowed`` with Bland's rule."""
        T = self.T
        obj = T[self.m]
        while True:
            col = next((j for j in range(allowed) if obj[j] < 0), None)
            if col is None:
                return OPTIMAL
            best = None
            for i in range(self.m):
                a = T[i][col]
                if a > 0:
                    key = (T[i][-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            if log.isEnabledFor(logging.DEBUG):
                log.debug("pivot row %d col %d; basis %s; objective %s", best[1], col, self.basis, -obj[-1])
            self.pivot(best[1], col)


def lp_solve(problem: LPProblem) -> LPResult:
    """Exact two-phase simplex with Bland's anti-cycling rule."""
    A = to_matrix(problem.A)
    b = [q(v) for v in problem.b]
    m, n = len(A), len(problem.c)
    c = [q(-v if problem.maximize else v) for v in problem.c]
    zero = mpq(0)

    # phase 1: artificial identity basis after flipping rows to b >= 0
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        art = [zero] * m
        art[i] = mpq(1)
        rows.append([sign * v for v in A[i]] + art + [sign * b[i]])
    obj = [-sum((rows[i][j] for i in range(m)), zero) for j in range(n)] + [zero] * m
    obj.append(-sum((rows[i][-1] for i in range(m)), zero))
    tab = _Tableau(rows + [obj], list(range(n, n + m)))
    tab.run(n + m)
    if tab.T[m][-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis; drop redundant rows
    r = 0
    while r < tab.m:
        if tab.basis[r] >= n:
            col = next((j for j in range(n) if tab.T[r][j] != 0), None)
            if col is None:
                del tab.T[r]
                del tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    m2 = tab.m
    T = [row[:n] + row[-1:] for row in tab.T[:m2]]
    obj = c + [zero]
    for i, bv in enumerate(tab.basis):
        f = obj[bv]
        if f != 0:
            obj = [o - f * t for o, t in zip(obj, T[i])]
    tab = _Tableau(T + [obj], tab.basis)
    if tab.run(n) == UNBOUNDED:
        return LPResult(UNBOUNDED)

    x = [zero] * n
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.T[i][-1]
    x = tuple(frac(v) for v in x)
    value = sum((ci * xi for ci, xi in zip(problem.c, x)), Fraction(0))
    min_value = -frac(tab.T[m2][-1])
    _certify(problem, x, value, -min_value if problem.maximize else min_value)
    return LPResult(OPTIMAL, value, x)


def _certify(problem: LPProblem, x, value, tableau_value):
    if any(v < 0 for v in x):
        raise AssertionError("simplex returned a negative coordinate")
    for row, bi in zip(problem.A, problem.b):
        if sum((a * v for a, v in zip(row, x)), Fraction(0)) != bi:
            raise AssertionError("simplex solution violates an equality")
    if value != tableau_value:
        raise AssertionError("objective value disagrees with the tableau")


def linprog(A, b, c, maximize: bool = False) -> LPResult:
    return lp_solve(LPProblem(A, b, c, maximize))


def max_min_coordinate(A: Sequence[Sequence], b: Sequence, support: Iterable[int]) -> tuple[Fraction, tuple[Fraction, ...]] | None:
    """Maximize ``t`` with ``x_i >= t`` on ``support``, ``x_j = 0`` elsewhere, ``0 <= t <= 1``.

    Substitutes ``x_i = t + y_i`` so the problem is in standard form.  Returns
    ``(t, x)`` or ``None`` when the restricted equality system is infeasible.
    """
    n = len(A[0]) if A else 0
    cols = sorted(set(support))
    k = len(cols)
    # variables: y (k), t, slack for t <= 1
    rows = [[row[j] for j in cols] + [sum((row[j] for j in cols), 0), 0] for row in A]
    rows.append([0] * k + [1, 1])
    res = linprog(rows, list(b) + [1], [0] * k + [1, 0], maximize=True)
    if res.status == INFEASIBLE:
        return None
    assert res.optimal, "max-min problem is bounded by construction"
    t = res.x[k]
    x = [Fraction(0)] * n
    for pos, j in enumerate(cols):
        x[j] = t + res.x[pos]
    return t, tuple(x)
