"""Standard-form polytopes ``P = {x >= 0 : Ax = b}``.

Faces are keyed by supports.  A support ``sigma`` is an int bitmask over the
columns; the empty face is represented by ``None`` and never by the zero
mask, because ``0`` may well be a point of a general standard-form polytope.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .model import support_indices, support_of
from .scenario import Scenario, assignments_on, cell_index

NORMALIZATION = "normalization"
NO_SIGNALLING = "no-signalling"
USER = "user"


class PolytopeError(ValueError):
    pass


class UnboundedPolytopeError(PolytopeError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    """Equations ``Ax = b`` over labelled nonnegative columns.

    ``tags`` records where each row came from: ``("normalization", C)``,
    ``("no-signalling", C, C', shared)`` or ``("user",)``.
    """

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    labels: tuple[str, ...]
    tags: tuple[tuple, ...] = ()
    scenario: Scenario | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(Fraction(v) for v in row) for row in self.A))
        object.__setattr__(self, "b", tuple(Fraction(v) for v in self.b))
        if not self.tags:
            object.__setattr__(self, "tags", tuple((USER,) for _ in self.A))
        if len(self.A) != len(self.b) or len(self.tags) != len(self.A):
            raise PolytopeError("row counts of A, b and tags differ")
        if any(len(row) != len(self.labels) for row in self.A):
            raise PolytopeError("every row of A needs one entry per column label")

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def reduced(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        """Equivalent system with linearly independent rows."""
        red = linalg.independent_rows(self.A, self.b)
        if red is None:
            return [[Fraction(0)] * self.n], [Fraction(1)]  # 0 = 1: empty polytope
        return red

    @cached_property
    def sparse_rows(self) -> list[list[tuple[int, object]]]:
        return [[(j, linalg.q(v)) for j, v in enumerate(row) if v] for row in self.A]

    @cached_property
    def rank(self) -> int:
        return linalg.rank(self.A) if self.A else 0

    @cached_property
    def dimension(self) -> int:
        """Dimension of P (``-1`` when empty)."""
        top = support_closure(self, (1 << self.n) - 1)
        if top.support is None:
            return -1
        return face_dimension(self, top.support)

    def restricted(self, sigma: int) -> tuple[list[list[Fraction]], list[Fraction], list[int]]:
        """Reduced system on the columns in ``sigma`` (other coordinates fixed at zero)."""
        A, b = self.reduced
        cols = support_indices(sigma)
        return [[row[j] for j in cols] for row in A], list(b), cols


def assemble_constraints(scenario: Scenario) -> ConstraintSystem:
    """Normalization and no-signalling equations of the scenario's polytope."""
    n = scenario.n_cells
    rows, rhs, tags = [], [], []
    for pos, ctx in enumerate(scenario.contexts):
        row = [0] * n
        for i in scenario.context_cells(pos):
            row[i] = 1
        rows.append(row)
        rhs.append(1)
        tags.append((NORMALIZATION, ctx))
    outcomes = scenario.outcomes
    for (p, c), (q, c2) in itertools.combinations(enumerate(scenario.contexts), 2):
        shared = tuple(v for v in c if v in c2)
        if not shared:
            continue
        for s in assignments_on(shared, outcomes):
            row = [0] * n
            for t in assignments_on(c, outcomes):
                if t.restrict(shared) == s:
                    row[cell_index(scenario, c, t)] += 1
            for t in assignments_on(c2, outcomes):
                if t.restrict(shared).reorder(shared) == s:
                    row[cell_index(scenario, c2, t)] -= 1
            rows.append(row)
            rhs.append(0)
            tags.append((NO_SIGNALLING, c, c2, s.label()))
    labels = tuple(f"{' '.join(ctx)}:{a.label()}" for ctx in scenario.contexts for a in assignments_on(ctx, outcomes))
    return ConstraintSystem(tuple(map(tuple, rows)), tuple(rhs), labels, tuple(tags), scenario)


def check_bounded(system: ConstraintSystem) -> None:
    """Raise :class:`UnboundedPolytopeError` unless every coordinate is bounded above on P."""
    A, b = system.reduced
    for i in range(system.n):
        c = [0] * system.n
        c[i] = 1
        if linalg.linprog(A, b, c, maximize=True).status == linalg.UNBOUNDED:
            raise UnboundedPolytopeError(f"coordinate {system.labels[i]} is unbounded; not a polytope")


def user_system(A: Sequence[Sequence], b: Sequence, labels: Sequence[str] | None = None) -> ConstraintSystem:
    """A general standard-form system, checked for boundedness."""
    n = len(A[0]) if A else len(labels or ())
    system = ConstraintSystem(tuple(map(tuple, A)), tuple(b), tuple(labels or (f"x{j}" for j in range(n))))
    check_bounded(system)
    return system


def membership(system: ConstraintSystem, x: Sequence) -> bool:
    if len(x) != system.n:
        raise PolytopeError(f"expected a vector of length {system.n}, got {len(x)}")
    if any(v < 0 for v in x):
        return False
    xq = [linalg.q(v) for v in x]
    return all(sum((a * xq[j] for j, a in row), 0) == bi for row, bi in zip(system.sparse_rows, system.b))


@dataclass(frozen=True)
class Closure:
    """Result of :func:`support_closure`.

    ``support`` is ``None`` when no point of P vanishes off the requested
    support (the empty face).  ``maxima[i]`` is the LP maximum of coordinate
    ``i``; it is zero outside the request and everywhere when the face is empty.
    """

    requested: int
    support: int | None
    witness: tuple[Fraction, ...] | None
    maxima: tuple[Fraction, ...]


def support_closure(system: ConstraintSystem, sigma: int) -> Closure:
    """Largest achievable support below ``sigma``, by one LP per coordinate."""
    A, b, cols = system.restricted(sigma)
    zero = tuple([Fraction(0)] * system.n)
    maxima = [Fraction(0)] * system.n
    points = []
    for pos, j in enumerate(cols):
        c = [0] * len(cols)
        c[pos] = 1
        res = linalg.linprog(A, b, c, maximize=True)
        if res.status == linalg.INFEASIBLE:
            return Closure(sigma, None, None, zero)
        if res.status == linalg.UNBOUNDED:
            raise UnboundedPolytopeError(f"coordinate {system.labels[j]} is unbounded")
        maxima[j] = res.value
        if res.value > 0:
            points.append(res.x)
    if not cols:
        # only the zero vector can vanish everywhere
        if all(v == 0 for v in b):
            return Closure(sigma, 0, zero, zero)
        return Closure(sigma, None, None, zero)
    if not points:
        # feasible but every coordinate is forced to zero: the point 0
        return Closure(sigma, 0, zero, tuple(maxima))
    avg = [sum((p[k] for p in points), Fraction(0)) / len(points) for k in range(len(cols))]
    witness = [Fraction(0)] * system.n
    for pos, j in enumerate(cols):
        witness[j] = avg[pos]
    witness = tuple(witness)
    closed = support_of(witness)
    assert membership(system, witness) and all(maxima[j] > 0 for j in support_indices(closed))
    return Closure(sigma, closed, witness, tuple(maxima))


def is_achievable(system: ConstraintSystem, sigma: int) -> bool:
    """Whether some point of P has support exactly ``sigma``."""
    return support_closure(system, sigma).support == sigma


def achievability_precheck(system: ConstraintSystem, sigma: int) -> Fraction:
    """Optimal max-min coordinate ``t*``; positive iff ``sigma`` is achievable."""
    A, b = system.reduced
    res = linalg.max_min_coordinate(A, b, support_indices(sigma))
    return Fraction(0) if res is None else res[0]


@dataclass(frozen=True)
class Face:
    support: int | None
    dimension: int
    witness: tuple[Fraction, ...] | None

    @property
    def is_empty(self) -> bool:
        return self.support is None


EMPTY_FACE = Face(None, -1, None)


def restricted_rank(system: ConstraintSystem, sigma: int) -> int:
    A, _, cols = system.restricted(sigma)
    if not cols:
        return 0
    return linalg.rank(A)


def face_dimension(system: ConstraintSystem, sigma: int | None, check: bool = False) -> int:
    """``|sigma| - rank(A_sigma)`` for an achievable support; ``-1`` for the empty face.

    A point strictly positive on ``sigma`` exists, so the face's affine hull is
    the whole solution set of the restricted equations.
    """
    if sigma is None:
        return -1
    if check and not is_achievable(system, sigma):
        raise PolytopeError("support is not achievable")
    return bin(sigma).count("1") - restricted_rank(system, sigma)


def carrier_face(system: ConstraintSystem, x: Sequence) -> Face:
    x = tuple(Fraction(v) for v in x)
    if not membership(system, x):
        raise PolytopeError("point is not in the polytope")
    sigma = support_of(x)
    return Face(sigma, face_dimension(system, sigma), x)


def extension_limit(x: Sequence, y: Sequence) -> Fraction | None:
    """Largest ``mu`` with ``mu*x + (1-mu)*y >= 0``; ``None`` when unbounded.

    This is the one-variable LP behind the relative-interior test, solved by
    its ratio test.
    """
    best = None
    for xi, yi in zip(x, y):
        if xi < yi:
            r = Fraction(yi) / (yi - xi)
            if best is None or r < best:
                best = r
    return best


def face_vertices(vertices, sigma: int) -> list:
    return [v for v in vertices if v.support & ~sigma == 0]


def relint_membership(system: ConstraintSystem, x: Sequence, sigma: int, vertices=None) -> bool:
    """Whether ``x`` lies in the relative interior of the face with support ``sigma``.

    Checks that the segment from every vertex of the face through ``x`` extends
    past ``x`` inside P; by convexity the vertices suffice.
    """
    x = tuple(Fraction(v) for v in x)
    if not membership(system, x):
        raise PolytopeError("point is not in the polytope")
    if support_of(x) & ~sigma:
        raise PolytopeError("point does not lie in the face")
    if vertices is None:
        from .lattice import enumerate_vertices

        vertices = enumerate_vertices(system)
    for v in face_vertices(vertices, sigma):
        mu = extension_limit(x, v.point)
        if mu is not None and mu <= 1:
            return False
    return True


def cone_maxima(system: ConstraintSystem, sigma: int) -> tuple[Fraction, ...]:
    """Per-coordinate maxima over the homogeneous cone cut out by the non-normalization rows.

    Normalization rows are dropped and replaced by the single cap
    ``sum_i x_i <= 1``.  All maxima are zero exactly when the homogeneous
    equations restricted to ``sigma`` have no nonzero nonnegative solution.
    """
    rows = [row for row, tag in zip(system.A, system.tags) if tag[0] != NORMALIZATION]
    cols = support_indices(sigma)
    A = [[row[j] for j in cols] + [Fraction(0)] for row in rows]
    A.append([Fraction(1)] * len(cols) + [Fraction(1)])
    b = [Fraction(0)] * len(rows) + [Fraction(1)]
    out = [Fraction(0)] * system.n
    for pos, j in enumerate(cols):
        c = [0] * (len(cols) + 1)
        c[pos] = 1
        out[j] = linalg.linprog(A, b, c, maximize=True).value
    return tuple(out)
