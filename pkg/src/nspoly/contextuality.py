"""Local, strongly and logically contextual models; vertex classification; realizability."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import linalg
from .lattice import Vertex, enumerate_vertices
from .model import (
    BOOLEAN,
    RATIONAL,
    EmpiricalModel,
    ModelError,
    check_no_signalling,
    check_normalization,
    deterministic_model,
    possibilistic_collapse,
    support_of,
)
from .polytope import Closure, assemble_constraints, cone_maxima, support_closure
from .scenario import Assignment, Scenario, assignments_on, global_assignments

log = logging.getLogger(__name__)

MAX_GLOBAL_ASSIGNMENTS = 65536

LD = "LD"
MSC = "MSC"


class GuardError(RuntimeError):
    """A size guard refused a computation."""


def _guard(scenario: Scenario, limit: int):
    count = len(scenario.outcomes) ** len(scenario.variables)
    if count > limit:
        raise GuardError(f"{count} global assignments exceed the limit {limit}")


def local_deterministic_models(scenario: Scenario, limit: int = MAX_GLOBAL_ASSIGNMENTS) -> list[tuple[list[Assignment], EmpiricalModel]]:
    """Deterministic models, deduplicated; each keeps every global assignment that induces it.

    Only variables used by some context are enumerated; unused ones cannot
    influence the model and are reported with the first outcome.
    """
    used = scenario.used_variables()
    count = len(scenario.outcomes) ** len(used)
    if count > limit:
        raise GuardError(f"{count} deterministic models exceed the limit {limit}")
    first = scenario.outcomes[0]
    out: dict[tuple, tuple[list[Assignment], EmpiricalModel]] = {}
    for partial in assignments_on(used, scenario.outcomes):
        d = partial.as_dict()
        g = Assignment(scenario.variables, tuple(d.get(v, first) for v in scenario.variables))
        m = deterministic_model(scenario, g)
        out.setdefault(m.entries, ([], m))[0].append(g)
    return list(out.values())


@dataclass(frozen=True)
class LocalDecomposition:
    assignments: tuple[Assignment, ...]
    weights: tuple[Fraction, ...]

    def reconstruct(self, scenario: Scenario) -> tuple[Fraction, ...]:
        acc = [Fraction(0)] * scenario.n_cells
        for g, w in zip(self.assignments, self.weights):
            for i, v in enumerate(deterministic_model(scenario, g).entries):
                if v:
                    acc[i] += w * v
        return tuple(acc)


def _require_ns(model: EmpiricalModel):
    bad = check_normalization(model) or check_no_signalling(model)
    if bad:
        raise ModelError(f"model is not no-signalling: {bad[0]}")


def is_local(model: EmpiricalModel, limit: int = MAX_GLOBAL_ASSIGNMENTS) -> LocalDecomposition | None:
    """Exact LP feasibility of a mixture of deterministic models equal to ``model``."""
    _require_ns(model)
    lds = local_deterministic_models(model.scenario, limit)
    n = model.scenario.n_cells
    rows = [[m.entries[i] for _, m in lds] for i in range(n)]
    rows.append([1] * len(lds))
    res = linalg.linprog(rows, list(model.entries) + [1], [0] * len(lds))
    if not res.optimal:
        return None
    picked = [(gs[0], w) for (gs, _), w in zip(lds, res.x) if w]
    return LocalDecomposition(tuple(g for g, _ in picked), tuple(w for _, w in picked))


def _as_boolean(model: EmpiricalModel) -> EmpiricalModel:
    return model if model.is_boolean else possibilistic_collapse(model)


class _Search:
    """Backtracking over global assignments consistent with a boolean model's support."""

    def __init__(self, model: EmpiricalModel):
        sc = model.scenario
        self.outcomes = sc.outcomes
        self.order = list(sc.variables)
        self.contexts = []
        for ctx in sc.contexts:
            sections = [tuple(a.values) for a in model.possible_sections(ctx)]
            self.contexts.append((ctx, sections))
        self.touching = {v: [k for k, (c, _) in enumerate(self.contexts) if v in c] for v in self.order}

    def _ok(self, partial: dict, var: str) -> bool:
        for k in self.touching[var]:
            ctx, sections = self.contexts[k]
            fixed = [(pos, partial[v]) for pos, v in enumerate(ctx) if v in partial]
            if not any(all(s[pos] == o for pos, o in fixed) for s in sections):
                return False
        return True

    def solutions(self, partial: dict | None = None) -> Iterator[dict]:
        partial = dict(partial or {})
        for v in partial:
            if not self._ok(partial, v):
                return
        free = [v for v in self.order if v not in partial]
        yield from self._extend(partial, free, 0)

    def _extend(self, partial, free, k):
        if k == len(free):
            yield dict(partial)
            return
        var = free[k]
        for o in self.outcomes:
            partial[var] = o
            if self._ok(partial, var):
                yield from self._extend(partial, free, k + 1)
            del partial[var]


def consistent_global_assignment(model: EmpiricalModel, fixed: Assignment | None = None) -> Assignment | None:
    """First (in scenario order) global assignment consistent with the support, optionally extending ``fixed``."""
    search = _Search(_as_boolean(model))
    sol = next(search.solutions(fixed.as_dict() if fixed else None), None)
    if sol is None:
        return None
    return Assignment(model.scenario.variables, tuple(sol[v] for v in model.scenario.variables))


def is_strongly_contextual(model: EmpiricalModel) -> tuple[bool, Assignment | None]:
    """``(True, None)`` if no global assignment is consistent with the support, else ``(False, witness)``."""
    b = _as_boolean(model)
    if check_no_signalling(b):
        log.warning("model is signalling; strong contextuality is still decided")
    g = consistent_global_assignment(b)
    return g is None, g


def is_logically_contextual(model: EmpiricalModel) -> tuple[bool, tuple[tuple[str, ...], Assignment] | None]:
    """Whether some possible section extends to no support-consistent global assignment.

    This is the logical level of the standard contextuality hierarchy; the
    witness is the first such ``(context, section)``.
    """
    b = _as_boolean(model)
    for ctx in b.scenario.contexts:
        for s in b.possible_sections(ctx):
            if consistent_global_assignment(b, s) is None:
                return True, (ctx, s)
    return False, None


@dataclass(frozen=True)
class VertexClass:
    tag: str
    witness: Assignment | None = None


def classify_vertices(scenario: Scenario, vertices: Sequence[Vertex] | None = None) -> list[tuple[Vertex, VertexClass]]:
    """Tag every vertex as local deterministic or minimal strongly contextual."""
    if vertices is None:
        vertices = enumerate_vertices(assemble_constraints(scenario))
    det = {}
    for gs, m in local_deterministic_models(scenario):
        det[m.entries] = gs[0]
    out = []
    for v in vertices:
        g = det.get(v.point)
        if g is not None:
            out.append((v, VertexClass(LD, g)))
            continue
        sc, _ = is_strongly_contextual(EmpiricalModel(scenario, BOOLEAN, tuple(x > 0 for x in v.point)))
        if not sc:
            raise AssertionError("non-deterministic vertex whose support admits a global section")
        out.append((v, VertexClass(MSC)))
    assert len(out) == len(vertices)
    return out


def _boolean_ns_check(model: EmpiricalModel):
    if not model.is_boolean:
        raise ModelError("expected a boolean model")
    bad = check_normalization(model) or check_no_signalling(model)
    if bad:
        raise ModelError(f"boolean model is not no-signalling, so it is no collapse: {bad[0]}")


@dataclass(frozen=True)
class RealizabilityCertificate:
    """Outcome of a realizability decision with its exact evidence.

    ``closure`` holds the per-coordinate LP maxima over the polytope;
    ``cone_maxima`` the maxima with normalization dropped (all zero means the
    consistency equations admit only the zero solution on this support).
    """

    realizable: bool
    witness: EmpiricalModel | None
    closure: Closure
    cone_maxima: tuple[Fraction, ...]


def realizability_certificate(model: EmpiricalModel) -> RealizabilityCertificate:
    _boolean_ns_check(model)
    system = assemble_constraints(model.scenario)
    sigma = model.support()
    closure = support_closure(system, sigma)
    cone = cone_maxima(system, sigma)
    if closure.support == sigma:
        witness = EmpiricalModel(model.scenario, RATIONAL, closure.witness)
        return RealizabilityCertificate(True, witness, closure, cone)
    return RealizabilityCertificate(False, None, closure, cone)


def is_realizable(model: EmpiricalModel) -> EmpiricalModel | None:
    """A rational no-signalling model whose support is exactly ``model``, or ``None``."""
    return realizability_certificate(model).witness


def greatest_ns_submodel(model: EmpiricalModel, removed: int = 0) -> EmpiricalModel | None:
    """Largest boolean no-signalling model below ``model`` minus the cells in ``removed``.

    Unions of boolean no-signalling models are no-signalling, so the greatest
    one exists; it is reached by deleting sections whose overlap marginal has
    no counterpart in a neighbouring context, until nothing changes.  Returns
    ``None`` if some context runs out of sections.
    """
    sc = model.scenario
    alive = [bool(v) and not removed >> i & 1 for i, v in enumerate(model.entries)]
    cells = []
    for pos, ctx in enumerate(sc.contexts):
        cells.append(list(zip(sc.context_cells(pos), assignments_on(ctx, sc.outcomes))))
    pairs = []
    for p, c in enumerate(sc.contexts):
        for q, c2 in enumerate(sc.contexts):
            shared = tuple(v for v in c if v in c2)
            if p != q and shared:
                pairs.append((p, q, shared))
    changed = True
    while changed:
        changed = False
        for p, q, shared in pairs:
            there = {a.restrict(shared).reorder(shared) for i, a in cells[q] if alive[i]}
            for i, a in cells[p]:
                if alive[i] and a.restrict(shared) not in there:
                    alive[i] = False
                    changed = True
    for pos in range(len(sc.contexts)):
        if not any(alive[i] for i, _ in cells[pos]):
            return None
    return EmpiricalModel(sc, BOOLEAN, tuple(alive))


def is_minimal_boolean_ns(model: EmpiricalModel) -> bool:
    """True iff no boolean no-signalling model lies strictly below ``model``.

    Each possible cell is switched off in turn and the consequences propagated
    to a fixed point; since the fixed point is the greatest no-signalling model
    left, no further branching is needed.
    """
    _boolean_ns_check(model)
    for i, v in enumerate(model.entries):
        if v and greatest_ns_submodel(model, 1 << i) is not None:
            return False
    return True


def boolean_submodels(model: EmpiricalModel) -> list[EmpiricalModel]:
    """All boolean no-signalling models below ``model`` reachable by repeated cell removal and propagation."""
    start = greatest_ns_submodel(model)
    if start is None:
        return []
    seen = {start.support(): start}
    stack = [start]
    while stack:
        m = stack.pop()
        for i, v in enumerate(m.entries):
            if v:
                sub = greatest_ns_submodel(m, 1 << i)
                if sub is not None and sub.support() not in seen:
                    seen[sub.support()] = sub
                    stack.append(sub)
    return [seen[k] for k in sorted(seen)]


def has_local_part(vertex_point: Sequence, det_point: Sequence, system) -> bool:
    """Whether ``v = lam*d + (1-lam)*x`` for some ``lam`` in (0, 1] and ``x`` in P.

    LP in ``w = v - lam*d``: maximize ``lam`` subject to ``w >= 0``,
    ``A w + lam*b = b`` and ``lam <= 1``.  The optimum is zero iff no such
    decomposition exists.
    """
    n = len(vertex_point)
    rows, rhs = [], []
    for i in range(n):
        row = [0] * (n + 2)
        row[i] = 1
        row[n] = det_point[i]
        rows.append(row)
        rhs.append(vertex_point[i])
    for arow, bi in zip(system.A, system.b):
        rows.append(list(arow) + [bi, 0])
        rhs.append(bi)
    rows.append([0] * n + [1, 1])
    rhs.append(1)
    res = linalg.linprog(rows, rhs, [0] * n + [1, 0], maximize=True)
    return res.optimal and res.value > 0
