"""Vertices, the support lattice, and an independent face-lattice oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from . import linalg
from .linalg import frac
from .model import support_bits, support_indices, support_of
from .polytope import (
    ConstraintSystem,
    PolytopeError,
    check_bounded,
    face_dimension,
    is_achievable,
    membership,
    support_closure,
)


@dataclass(frozen=True)
class Vertex:
    support: int
    point: tuple[Fraction, ...]


def _vertex_order(vertices, n):
    # by support bitstring, cell 0 first
    return sorted(vertices, key=lambda v: support_bits(v.support, n), reverse=True)


class _Echelon:
    """Incremental Gauss-Jordan state for a set of chosen columns."""

    __slots__ = ("vecs", "pivots", "coeffs", "cols")

    def __init__(self):
        self.vecs: list[list] = []  # reduced column vectors
        self.pivots: list[int] = []  # pivot row of each vector
        self.coeffs: list[dict] = []  # vec_k = sum coeffs[k][j] * A[:, j]
        self.cols: list[int] = []

    def extend(self, j: int, column: list) -> _Echelon | None:
        v = list(column)
        comb = {j: mpq(1)}
        for vec, p, co in zip(self.vecs, self.pivots, self.coeffs):
            f = v[p]
            if f:
                v = [a - f * b for a, b in zip(v, vec)]
                for c, w in co.items():
                    comb[c] = comb.get(c, 0) - f * w
        p = next((r for r, a in enumerate(v) if a != 0), None)
        if p is None:
            return None
        piv = v[p]
        v = [a / piv for a in v]
        comb = {c: w / piv for c, w in comb.items()}
        new = _Echelon()
        for vec, pp, co in zip(self.vecs, self.pivots, self.coeffs):
            f = vec[p]
            if f:
                vec = [a - f * b for a, b in zip(vec, v)]
                co = dict(co)
                for c, w in comb.items():
                    co[c] = co.get(c, 0) - f * w
            new.vecs.append(vec)
            new.pivots.append(pp)
            new.coeffs.append(co)
        new.vecs.append(v)
        new.pivots.append(p)
        new.coeffs.append(comb)
        new.cols = self.cols + [j]
        return new

    def solve(self, b: list) -> dict | None:
        """Coefficients ``y`` with ``A_cols y = b``, or ``None`` if b is outside the span."""
        r = list(b)
        y = {c: mpq(0) for c in self.cols}
        for vec, p, co in zip(self.vecs, self.pivots, self.coeffs):
            f = r[p]
            if f:
                r = [a - f * bb for a, bb in zip(r, vec)]
                for c, w in co.items():
                    y[c] += f * w
        if any(r):
            return None
        return y


def enumerate_vertices(system: ConstraintSystem, prune: bool = True, lp_prune_depth: int = 2) -> list[Vertex]:
    """All vertices of a bounded standard-form polytope, sorted by support bitstring.

    Depth-first search over column sets with independent columns (supersets of
    dependent sets are dependent, so those branches are cut).  A set is a vertex
    support when the unique solution on its columns is strictly positive.  With
    ``prune``, branches up to ``lp_prune_depth`` columns deep are also abandoned
    when the max-min LP shows no point is positive on the chosen columns while
    vanishing on the skipped ones.
    """
    check_bounded(system)
    A, b = system.reduced
    n, r = system.n, len(A)
    if all(v == 0 for v in b):
        # homogeneous + bounded means P = {0}
        return [Vertex(0, tuple([Fraction(0)] * n))]
    columns = [[linalg.q(row[j]) for row in A] for j in range(n)]
    bq = [linalg.q(v) for v in b]
    found: dict[int, Vertex] = {}

    def visit(state: _Echelon, start: int):
        for j in range(start, n):
            nxt = state.extend(j, columns[j])
            if nxt is None:
                continue
            y = nxt.solve(bq)
            if y is not None and all(v > 0 for v in y.values()):
                point = [Fraction(0)] * n
                for c, v in y.items():
                    point[c] = frac(v)
                mask = support_of(point)
                found.setdefault(mask, Vertex(mask, tuple(point)))
            if len(nxt.cols) >= r:
                continue
            if prune and len(nxt.cols) <= lp_prune_depth:
                allowed = sum(1 << c for c in nxt.cols) | (((1 << n) - 1) >> (j + 1) << (j + 1))
                if not _positive_within(A, b, nxt.cols, allowed):
                    continue
            visit(nxt, j + 1)

    visit(_Echelon(), 0)
    return _vertex_order(found.values(), n)


def _positive_within(A, b, required: list[int], allowed: int) -> bool:
    """Is there x in P, zero off ``allowed``, with every ``required`` coordinate positive?"""
    cols = support_indices(allowed)
    req = set(required)
    # x_c = t + y_c for required columns, x_c = y_c for the rest
    rows = []
    for row in A:
        rows.append([row[c] for c in cols] + [sum((row[c] for c in req), Fraction(0)), Fraction(0)])
    rows.append([Fraction(0)] * len(cols) + [Fraction(1), Fraction(1)])
    obj = [Fraction(0)] * len(cols) + [Fraction(1), Fraction(0)]
    res = linalg.linprog(rows, list(b) + [Fraction(1)], obj, maximize=True)
    return res.optimal and res.value > 0


def basic_solutions_oracle(system: ConstraintSystem) -> list[Vertex]:
    """Vertices as the distinct basic feasible solutions, by exhaustive basis search.

    Every ``rank(A)``-subset of columns is tried with its own exact solve; no
    pruning and no shared state.  Kept as an independent cross-check of
    :func:`enumerate_vertices`.
    """
    A, b = system.reduced
    n, r = system.n, len(A)
    if all(v == 0 for v in b):
        return [Vertex(0, tuple([Fraction(0)] * n))]
    found = {}
    for cols in itertools.combinations(range(n), r):
        R, pivots = linalg.rref_q([[row[j] for j in cols] + [bi] for row, bi in zip(A, b)], augmented=True)
        if len(pivots) < r:
            continue  # singular basis
        x = [R[k][-1] for k in range(r)]
        if any(v < 0 for v in x):
            continue
        point = [Fraction(0)] * n
        for j, v in zip(cols, x):
            point[j] = frac(v)
        mask = support_of(point)
        if mask not in found:
            assert membership(system, point)
            found[mask] = Vertex(mask, tuple(point))
    return _vertex_order(found.values(), n)


@dataclass(frozen=True)
class Node:
    support: int | None
    dimension: int
    witness: tuple[Fraction, ...] | None
    is_atom: bool = False


def leq(a: int | None, b: int | None) -> bool:
    """Order of the support lattice with adjoined bottom ``None``."""
    if a is None:
        return True
    if b is None:
        return False
    return a & ~b == 0


@dataclass(frozen=True)
class SupportLattice:
    system: ConstraintSystem
    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, int], ...]
    vertices: tuple[Vertex, ...] = ()
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {nd.support: i for i, nd in enumerate(self.nodes)})

    @property
    def bottom(self) -> int:
        return self._index[None]

    @property
    def top(self) -> int:
        return max(range(len(self.nodes)), key=lambda i: -1 if self.nodes[i].support is None else bin(self.nodes[i].support).count("1"))

    @property
    def supports(self) -> list[int | None]:
        return [nd.support for nd in self.nodes]

    def index(self, sigma: int | None) -> int:
        try:
            return self._index[sigma]
        except KeyError:
            raise PolytopeError(f"{support_bits(sigma, self.system.n)} is not a node of the lattice") from None

    def __contains__(self, sigma) -> bool:
        return sigma in self._index

    def __len__(self):
        return len(self.nodes)

    def atoms(self) -> list[int]:
        return [nd.support for nd in self.nodes if nd.is_atom]

    def without(self, sigma: int | None) -> SupportLattice:
        """Copy with one node removed and covers recomputed (used to build mutants)."""
        nodes = tuple(nd for nd in self.nodes if nd.support != sigma)
        return SupportLattice(self.system, nodes, hasse_edges([nd.support for nd in nodes]), self.vertices)


def hasse_edges(supports: Sequence[int | None]) -> tuple[tuple[int, int], ...]:
    """Covering pairs ``(lower, upper)`` by pairwise comparison and transitive reduction."""
    size = [-1 if s is None else bin(s).count("1") for s in supports]
    order = sorted(range(len(supports)), key=lambda i: size[i])
    edges = []
    for i in range(len(supports)):
        a = supports[i]
        ups = [j for j in order if j != i and size[j] > size[i] and leq(a, supports[j])]
        minimal: list[int] = []
        for j in ups:
            if not any(leq(supports[k], supports[j]) for k in minimal):
                minimal.append(j)
        edges.extend((i, j) for j in minimal)
    return tuple(sorted(edges))


def support_lattice(system: ConstraintSystem, vertices: Sequence[Vertex] | None = None, verify: bool = False) -> SupportLattice:
    """The lattice of achievable supports plus bottom, built as the join-closure of vertex supports.

    Each node's witness is the barycentre of the vertices below it, whose
    support is exactly the node; it is checked for membership in P.  With
    ``verify`` every node is also re-derived by :func:`is_achievable`.
    """
    if vertices is None:
        vertices = enumerate_vertices(system)
    n = system.n
    atoms = sorted({v.support for v in vertices})
    nodes = set(atoms)
    frontier = set(atoms)
    while frontier:
        new = {x | a for x in frontier for a in atoms} - nodes
        nodes |= new
        frontier = new
    out = [Node(None, -1, None)]
    atom_set = set(atoms)
    qpoints = [(v.support, [linalg.q(x) for x in v.point]) for v in vertices]
    for sigma in sorted(nodes, key=lambda s: (bin(s).count("1"), support_bits(s, n)[::-1])):
        below = [p for s, p in qpoints if s & ~sigma == 0]
        witness = tuple(frac(sum((p[i] for p in below), mpq(0)) / len(below)) for i in range(n))
        if support_of(witness) != sigma or not membership(system, witness):
            raise AssertionError("barycentre witness failed; the vertex list is incomplete")
        if verify and not is_achievable(system, sigma):
            raise AssertionError(f"join {support_bits(sigma, n)} not achievable")
        out.append(Node(sigma, face_dimension(system, sigma), witness, sigma in atom_set))
    return SupportLattice(system, tuple(out), hasse_edges([nd.support for nd in out]), tuple(vertices))


def join(sigma: int | None, tau: int | None) -> int | None:
    if sigma is None:
        return tau
    if tau is None:
        return sigma
    return sigma | tau


def meet(lattice: SupportLattice, sigma: int | None, tau: int | None) -> int | None:
    """Greatest common lower bound: the support closure of the componentwise AND."""
    for s in (sigma, tau):
        if s not in lattice:
            raise PolytopeError(f"{support_bits(s, lattice.system.n)} is not a node of the lattice")
    if sigma is None or tau is None:
        return None
    return support_closure(lattice.system, sigma & tau).support


def combinatorial_meet(lattice: SupportLattice, sigma: int | None, tau: int | None) -> int | None:
    """Meet read off the node set alone: the join of all common lower bounds."""
    out = None
    for s in lattice.supports:
        if leq(s, sigma) and leq(s, tau):
            out = join(out, s)
    return out


@dataclass(frozen=True)
class FaceLattice:
    """Faces identified by the set of vertices they contain (bitmask over ``vertices``)."""

    vertices: tuple[Vertex, ...]
    faces: tuple[int, ...]

    def support_of_face(self, face: int) -> int | None:
        out = None
        for k, v in enumerate(self.vertices):
            if face >> k & 1:
                out = join(out, v.support)
        return out


class OracleTooLarge(PolytopeError):
    pass


def face_lattice_oracle(system: ConstraintSystem, vertices: Sequence[Vertex] | None = None,
                        max_cells: int = 20, force: bool = False) -> FaceLattice:
    """Faces ``{x in P : x_i = 0 for i in Z}`` over every zero-set ``Z``.

    Each face is recorded by the vertices it contains; each distinct vertex set
    is confirmed by an LP feasibility test on one of its zero-sets.  Interior
    points and their supports are never consulted.
    """
    n = system.n
    if n > max_cells and not force:
        raise OracleTooLarge(f"face oracle refuses n = {n} > {max_cells} cells (pass force=True)")
    if vertices is None:
        vertices = basic_solutions_oracle(system)
    vertices = tuple(vertices)
    A, b = system.reduced
    everything = (1 << len(vertices)) - 1
    # vertices vanishing at each single cell; faces of larger zero-sets are intersections
    avoiding = [sum(1 << k for k, v in enumerate(vertices) if not v.support >> i & 1) for i in range(n)]
    face_of = [everything] * (1 << n)
    seen: dict[int, int] = {everything: 0}
    for zero_set in range(1, 1 << n):
        low = zero_set & -zero_set
        face = face_of[zero_set ^ low] & avoiding[low.bit_length() - 1]
        face_of[zero_set] = face
        seen.setdefault(face, zero_set)
    faces = []
    for face, zero_set in seen.items():
        cols = support_indices(((1 << n) - 1) & ~zero_set)
        if cols:
            feasible = linalg.linprog([[row[j] for j in cols] for row in A], b, [0] * len(cols)).optimal
        else:
            feasible = all(v == 0 for v in b)
        if feasible != (face != 0):
            raise AssertionError("LP feasibility disagrees with vertex containment")
        faces.append(face)
    return FaceLattice(vertices, tuple(sorted(faces, key=lambda f: (bin(f).count("1"), f))))


@dataclass(frozen=True)
class IsomorphismReport:
    bijective: bool
    order_preserving: bool
    order_reflecting: bool
    n_faces: int
    n_supports: int

    @property
    def ok(self) -> bool:
        return self.bijective and self.order_preserving and self.order_reflecting


def compare_with_oracle(lattice: SupportLattice, oracle: FaceLattice) -> IsomorphismReport:
    """Check that face -> join of its vertex supports is an order-isomorphism onto the support lattice."""
    image = [oracle.support_of_face(f) for f in oracle.faces]
    nodes = set(lattice.supports)
    bijective = len(set(image)) == len(image) == len(nodes) and set(image) == nodes
    preserving = reflecting = True
    for (f, s), (g, t) in itertools.product(zip(oracle.faces, image), repeat=2):
        face_le = f & ~g == 0
        supp_le = leq(s, t)
        if face_le and not supp_le:
            preserving = False
        if supp_le and not face_le:
            reflecting = False
    return IsomorphismReport(bijective, preserving, reflecting, len(oracle.faces), len(nodes))


@dataclass(frozen=True)
class LatticeReport:
    join_closed: bool
    atomistic: bool
    coatomistic: bool
    graded: bool
    unique_bottom_top: bool
    chain_length: int | None = None

    def items(self):
        return [("join-closure", self.join_closed), ("atomisticity", self.atomistic),
                ("coatomisticity", self.coatomistic), ("gradedness", self.graded),
                ("unique top and bottom", self.unique_bottom_top)]

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.items())


def check_lattice_properties(lattice: SupportLattice) -> LatticeReport:
    """Join-closure, atomisticity, coatomisticity, gradedness, unique top and bottom.

    Covers are taken from ``lattice.edges``.  Gradedness also requires every
    cover to raise the dimension by one, and the chain length to be ``dim P + 2``.
    """
    sups = lattice.supports
    node_set = set(sups)
    N = len(sups)
    bottoms = [i for i in range(N) if all(leq(sups[i], s) for s in sups)]
    tops = [i for i in range(N) if all(leq(s, sups[i]) for s in sups)]
    unique = len(bottoms) == 1 and len(tops) == 1
    bottom = bottoms[0] if bottoms else None
    top = tops[0] if tops else None

    ups: dict[int, list[int]] = {i: [] for i in range(N)}
    downs: dict[int, list[int]] = {i: [] for i in range(N)}
    for lo, hi in lattice.edges:
        ups[lo].append(hi)
        downs[hi].append(lo)
    atoms = [sups[j] for j in ups[bottom]] if bottom is not None else []
    coatoms = [sups[j] for j in downs[top]] if top is not None else []

    def atom_join(sigma):
        acc = None
        for a in atoms:
            if leq(a, sigma):
                acc = join(acc, a)
        return acc

    atomistic = all(atom_join(s) == s for i, s in enumerate(sups) if i != bottom)
    if atomistic:
        # every node is a join of atoms, so closure under joins with atoms suffices
        join_closed = all(join(s, a) in node_set for s in sups for a in atoms)
    else:
        join_closed = all(join(a, b) in node_set for a, b in itertools.combinations(sups, 2))

    coatomistic = unique
    for i, s in enumerate(sups):
        if not coatomistic or i == top:
            continue
        above = [c for c in coatoms if leq(s, c)]
        if not above:
            coatomistic = False
            continue
        common = above[0]
        for c in above[1:]:
            common &= c
        if atomistic and join_closed:
            # the largest node below every coatom above s is the join of atoms under their AND
            greatest = atom_join(common)
            coatomistic = greatest is None or leq(greatest, s)
        else:
            coatomistic = all(leq(t, s) for t in sups if t is not None and leq(t, common))

    graded = unique
    chain = None
    if unique:
        order = sorted(range(N), key=lambda i: -1 if sups[i] is None else bin(sups[i]).count("1"))
        lo = {bottom: 0}
        hi = {bottom: 0}
        for i in order:
            if i == bottom:
                continue
            preds = downs[i]
            if not preds:
                graded = False
                break
            lo[i] = min(lo[p] for p in preds) + 1
            hi[i] = max(hi[p] for p in preds) + 1
            if lo[i] != hi[i]:
                graded = False
        if graded:
            chain = hi[top] + 1
            dims = [nd.dimension for nd in lattice.nodes]
            graded = all(dims[h] - dims[l] == 1 for l, h in lattice.edges) and chain == dims[top] + 2
    return LatticeReport(join_closed, atomistic, coatomistic, graded, unique, chain)
