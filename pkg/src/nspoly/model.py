"""Empirical models over a commutative semiring.

Two semirings ship: exact nonnegative rationals (probabilistic models) and
booleans (possibilistic models).  A model is stored as a flat tuple of
entries in cell order, so it doubles as its own vector representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .scenario import Assignment, Scenario, ScenarioError, assignments_on, cell_index


class ModelError(ValueError):
    """Raised for malformed empirical models."""


@dataclass(frozen=True)
class Semiring:
    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any] = field(repr=False)
    mul: Callable[[Any, Any], Any] = field(repr=False)
    coerce: Callable[[Any], Any] = field(repr=False)

    def sum(self, values: Iterable[Any]):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total


def _rational(value) -> Fraction:
    q = Fraction(value)
    if q < 0:
        raise ModelError(f"negative entry {q} in a probabilistic model")
    return q


def _boolean(value) -> bool:
    if isinstance(value, bool):
        return value
    if value in (0, 1):
        return bool(value)
    raise ModelError(f"boolean entry must be 0 or 1, got {value!r}")


RATIONAL = Semiring("rational", Fraction(0), Fraction(1), lambda a, b: a + b, lambda a, b: a * b, _rational)
BOOLEAN = Semiring("boolean", False, True, lambda a, b: a or b, lambda a, b: a and b, _boolean)

SEMIRINGS = {s.name: s for s in (RATIONAL, BOOLEAN)}


@dataclass(frozen=True)
class EmpiricalModel:
    """A family of semiring-valued distributions, one per context."""

    scenario: Scenario
    semiring: Semiring
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.semiring.coerce(v) for v in self.entries)
        if len(entries) != self.scenario.n_cells:
            raise ModelError(f"expected {self.scenario.n_cells} entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    def table(self, context: Iterable[str]) -> dict[Assignment, Any]:
        pos = self.scenario.context_position(context)
        ctx = self.scenario.contexts[pos]
        cells = self.scenario.context_cells(pos)
        return dict(zip(assignments_on(ctx, self.scenario.outcomes), (self.entries[i] for i in cells)))

    def __getitem__(self, key: tuple[Iterable[str], Assignment]):
        context, assignment = key
        return self.entries[cell_index(self.scenario, context, assignment)]

    def possible_sections(self, context: Iterable[str]) -> list[Assignment]:
        return [s for s, v in self.table(context).items() if v]

    def support(self) -> int:
        return support_of(self.entries)

    @property
    def is_boolean(self) -> bool:
        return self.semiring is BOOLEAN


def support_of(vector: Sequence) -> int:
    """Support of a nonnegative vector as a bitmask (bit i set iff entry i > 0)."""
    mask = 0
    for i, v in enumerate(vector):
        if v:
            if v < 0:
                raise ModelError(f"negative entry {v} at cell {i}")
            mask |= 1 << i
    return mask


def support_bits(mask: int | None, n: int) -> str:
    """Bitstring of a support with cell 0 first; ``None`` (bottom) renders as '_'."""
    if mask is None:
        return "_"
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


def parse_support_bits(bits: str) -> int | None:
    if bits == "_":
        return None
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a support bitstring: {bits!r}")
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


def support_indices(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def from_tables(scenario: Scenario, tables: Mapping, semiring: Semiring = RATIONAL) -> EmpiricalModel:
    """Build a model from ``{context: {assignment-or-label: value}}``; missing entries are zero.

    Assignments may be given as :class:`Assignment` objects, as strings of
    outcome labels in the context's listed order (``"01"``), or as tuples.
    """
    entries = [semiring.zero] * scenario.n_cells
    for context, table in tables.items():
        ctx = tuple(context.split()) if isinstance(context, str) else tuple(context)
        for key, value in table.items():
            if isinstance(key, Assignment):
                a = key
            else:
                labels = tuple(key.split(",")) if isinstance(key, str) and "," in key else tuple(key)
                a = Assignment(ctx, labels)
            entries[cell_index(scenario, ctx, a)] = semiring.coerce(value)
    return EmpiricalModel(scenario, semiring, tuple(entries))


def from_sections(scenario: Scenario, sections: Mapping) -> EmpiricalModel:
    """Possibilistic model from ``{context: [possible section labels]}``."""
    return from_tables(scenario, {c: {s: 1 for s in secs} for c, secs in sections.items()}, BOOLEAN)


def marginalize(model: EmpiricalModel, context: Iterable[str], subset: Iterable[str]) -> dict[Assignment, Any]:
    """Marginal of ``e_C`` on ``U``; keys are assignments on ``U`` in the context's variable order."""
    pos = model.scenario.context_position(context)
    ctx = model.scenario.contexts[pos]
    sub = set(subset)
    if not sub <= set(ctx):
        raise ModelError(f"{sorted(sub)} is not contained in context {ctx}")
    u = tuple(v for v in ctx if v in sub)
    sr = model.semiring
    out = {a: sr.zero for a in assignments_on(u, model.scenario.outcomes)}
    for t, value in model.table(ctx).items():
        key = t.restrict(u)
        out[key] = sr.add(out[key], value)
    return out


@dataclass(frozen=True)
class NormalizationViolation:
    context: tuple[str, ...]
    total: Any


@dataclass(frozen=True)
class SignallingViolation:
    context: tuple[str, ...]
    other: tuple[str, ...]
    shared: Assignment
    left: Any
    right: Any


def check_normalization(model: EmpiricalModel) -> list[NormalizationViolation]:
    sr = model.semiring
    out = []
    for pos, ctx in enumerate(model.scenario.contexts):
        total = sr.sum(model.entries[i] for i in model.scenario.context_cells(pos))
        if total != sr.one:
            out.append(NormalizationViolation(ctx, total))
    return out


def check_no_signalling(model: EmpiricalModel) -> list[SignallingViolation]:
    """Compare marginals on every overlapping pair of contexts.

    Pairs with an empty overlap are skipped: their common marginal is the
    total mass, already pinned by normalization.
    """
    out = []
    contexts = model.scenario.contexts
    for i, c in enumerate(contexts):
        for c2 in contexts[i + 1:]:
            shared = [v for v in c if v in c2]
            if not shared:
                continue
            left = marginalize(model, c, shared)
            right = marginalize(model, c2, shared)
            for s, lv in left.items():
                rv = right[s]
                if lv != rv:
                    out.append(SignallingViolation(c, c2, s, lv, rv))
    return out


def is_no_signalling(model: EmpiricalModel) -> bool:
    return not check_normalization(model) and not check_no_signalling(model)


def possibilistic_collapse(model: EmpiricalModel) -> EmpiricalModel:
    """Apply the homomorphism Q>=0 -> B pointwise (positive entries become possible)."""
    if model.is_boolean:
        return model
    for v in model.entries:
        if v < 0:
            raise ModelError(f"negative entry {v}")
    return EmpiricalModel(model.scenario, BOOLEAN, tuple(v > 0 for v in model.entries))


def deterministic_model(scenario: Scenario, g: Assignment | Mapping[str, str]) -> EmpiricalModel:
    gd = g.as_dict() if isinstance(g, Assignment) else dict(g)
    missing = set(scenario.variables) - set(gd)
    if missing:
        raise ScenarioError(f"global assignment is missing variables {sorted(missing)}")
    entries = [Fraction(0)] * scenario.n_cells
    for ctx in scenario.contexts:
        a = Assignment(ctx, tuple(gd[v] for v in ctx))
        entries[cell_index(scenario, ctx, a)] = Fraction(1)
    return EmpiricalModel(scenario, RATIONAL, tuple(entries))


def uniform_model(scenario: Scenario) -> EmpiricalModel:
    k = len(scenario.outcomes)
    entries = []
    for ctx in scenario.contexts:
        entries.extend([Fraction(1, k ** len(ctx))] * k ** len(ctx))
    return EmpiricalModel(scenario, RATIONAL, tuple(entries))


def model_to_vector(model: EmpiricalModel) -> tuple:
    return model.entries


def vector_to_model(scenario: Scenario, vector: Sequence, semiring: Semiring = RATIONAL) -> EmpiricalModel:
    model = EmpiricalModel(scenario, semiring, tuple(vector))
    bad = check_normalization(model)
    if bad:
        raise ModelError(f"vector is not normalized on context {bad[0].context} (sum {bad[0].total})")
    return model


def convex_combination(models: Sequence[EmpiricalModel], weights: Sequence) -> EmpiricalModel:
    if not models or len(models) != len(weights):
        raise ModelError("need one weight per model")
    ws = [Fraction(w) for w in weights]
    if any(w < 0 for w in ws) or sum(ws) != 1:
        raise ModelError(f"weights must be nonnegative and sum to 1, got {ws}")
    scenario = models[0].scenario
    if any(m.scenario != scenario for m in models):
        raise ModelError("models live on different scenarios")
    entries = [sum(w * m.entries[i] for w, m in zip(ws, models)) for i in range(scenario.n_cells)]
    return EmpiricalModel(scenario, RATIONAL, tuple(entries))
