"""Finite measurement scenarios and the canonical cell indexing of model coordinates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class ScenarioError(ValueError):
    """Raised for malformed scenarios, contexts or assignments."""


@dataclass(frozen=True)
class Assignment:
    """An assignment of outcomes to an ordered tuple of variables."""

    domain: tuple[str, ...]
    values: tuple[str, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.values):
            raise ScenarioError("assignment domain and values differ in length")
        if len(set(self.domain)) != len(self.domain):
            raise ScenarioError(f"repeated variable in assignment domain {self.domain}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str], order: Sequence[str] | None = None) -> Assignment:
        keys = tuple(order) if order is not None else tuple(mapping)
        return cls(keys, tuple(mapping[k] for k in keys))

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.domain, self.values))

    def __getitem__(self, var: str) -> str:
        try:
            return self.values[self.domain.index(var)]
        except ValueError:
            raise KeyError(var) from None

    def restrict(self, subset: Iterable[str]) -> Assignment:
        """Restriction to ``subset``, keeping this assignment's variable order."""
        wanted = set(subset)
        missing = wanted.difference(self.domain)
        if missing:
            raise ScenarioError(f"cannot restrict to variables outside the domain: {sorted(missing)}")
        pairs = [(v, o) for v, o in zip(self.domain, self.values) if v in wanted]
        return Assignment(tuple(v for v, _ in pairs), tuple(o for _, o in pairs))

    def reorder(self, order: Sequence[str]) -> Assignment:
        if set(order) != set(self.domain) or len(order) != len(self.domain):
            raise ScenarioError(f"{tuple(order)} is not a permutation of {self.domain}")
        d = self.as_dict()
        return Assignment(tuple(order), tuple(d[v] for v in order))

    def agrees_with(self, other: Assignment) -> bool:
        d = other.as_dict()
        return all(d.get(v, o) == o for v, o in zip(self.domain, self.values))

    def label(self) -> str:
        """Compact label: outcomes concatenated, comma separated if any label is longer than one char."""
        sep = "" if all(len(o) == 1 for o in self.values) else ","
        return sep.join(self.values)

    def __str__(self):
        return ", ".join(f"{v}->{o}" for v, o in zip(self.domain, self.values)) or "(empty)"


@dataclass(frozen=True)
class Scenario:
    """Measurement scenario: variables, outcomes and the family of contexts.

    Cells are ordered by context (input order) and then by assignment rank,
    lexicographic in outcome indices with the first context variable most
    significant.
    """

    variables: tuple[str, ...]
    outcomes: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]
    _offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "contexts", tuple(tuple(c) for c in self.contexts))
        if not self.variables:
            raise ScenarioError("scenario needs at least one variable")
        if not self.outcomes:
            raise ScenarioError("scenario needs at least one outcome")
        if len(set(self.variables)) != len(self.variables):
            raise ScenarioError("duplicate variable")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ScenarioError("duplicate outcome")
        known = set(self.variables)
        lookup = {}
        offsets = [0]
        for pos, ctx in enumerate(self.contexts):
            if not ctx:
                raise ScenarioError(f"context {pos} is empty")
            if len(set(ctx)) != len(ctx):
                raise ScenarioError(f"context {ctx} repeats a variable")
            unknown = set(ctx) - known
            if unknown:
                raise ScenarioError(f"context {ctx} references unknown variables {sorted(unknown)}")
            key = frozenset(ctx)
            if key in lookup:
                raise ScenarioError(f"duplicate context {ctx}")
            lookup[key] = pos
            offsets.append(offsets[-1] + len(self.outcomes) ** len(ctx))
        object.__setattr__(self, "_offsets", tuple(offsets))
        object.__setattr__(self, "_lookup", lookup)

    @property
    def n_cells(self) -> int:
        return self._offsets[-1]

    def context_position(self, context: Iterable[str]) -> int:
        try:
            return self._lookup[frozenset(context)]
        except KeyError:
            raise ScenarioError(f"unknown context {tuple(context)}") from None

    def context_cells(self, context: Iterable[str] | int) -> range:
        pos = context if isinstance(context, int) else self.context_position(context)
        return range(self._offsets[pos], self._offsets[pos + 1])

    def used_variables(self) -> tuple[str, ...]:
        used = {v for c in self.contexts for v in c}
        return tuple(v for v in self.variables if v in used)

    def assignment_rank(self, context: Sequence[str], assignment: Assignment) -> int:
        a = assignment.reorder(context) if assignment.domain != tuple(context) else assignment
        k = len(self.outcomes)
        rank = 0
        for o in a.values:
            try:
                rank = rank * k + self.outcomes.index(o)
            except ValueError:
                raise ScenarioError(f"unknown outcome {o!r}") from None
        return rank


def new_scenario(variables: Iterable[str], outcomes: Iterable[str], contexts: Iterable[Iterable[str]]) -> Scenario:
    """Build a scenario; a context repeating an earlier one as a set is dropped."""
    kept, seen = [], set()
    for c in contexts:
        c = tuple(c)
        if frozenset(c) not in seen:
            seen.add(frozenset(c))
            kept.append(c)
    return Scenario(tuple(variables), tuple(outcomes), tuple(kept))


def _enumerate(domain: tuple[str, ...], outcomes: tuple[str, ...]) -> Iterator[Assignment]:
    for values in itertools.product(outcomes, repeat=len(domain)):
        yield Assignment(domain, values)


def assignments(scenario: Scenario, context: Iterable[str]) -> list[Assignment]:
    """All assignments on a context of the scenario, in rank order."""
    ctx = scenario.contexts[scenario.context_position(context)]
    return list(_enumerate(ctx, scenario.outcomes))


def assignments_on(variables: Sequence[str], outcomes: Sequence[str]) -> list[Assignment]:
    """All assignments on an arbitrary variable tuple, lexicographic."""
    return list(_enumerate(tuple(variables), tuple(outcomes)))


def restrict(assignment: Assignment, subset: Iterable[str]) -> Assignment:
    return assignment.restrict(subset)


def global_assignments(scenario: Scenario) -> Iterator[Assignment]:
    """Stream all |O|^|X| global assignments, lexicographic; nothing is materialized."""
    return _enumerate(scenario.variables, scenario.outcomes)


def cell_index(scenario: Scenario, context: Iterable[str], assignment: Assignment) -> int:
    pos = scenario.context_position(context)
    ctx = scenario.contexts[pos]
    return scenario._offsets[pos] + scenario.assignment_rank(ctx, assignment)


def index_cell(scenario: Scenario, index: int) -> tuple[tuple[str, ...], Assignment]:
    if not 0 <= index < scenario.n_cells:
        raise IndexError(f"cell index {index} out of range [0, {scenario.n_cells})")
    offsets = scenario._offsets
    # contexts are few; a linear scan keeps this obvious
    pos = next(p for p in range(len(scenario.contexts)) if offsets[p + 1] > index)
    ctx = scenario.contexts[pos]
    rank = index - offsets[pos]
    k = len(scenario.outcomes)
    digits = []
    for _ in ctx:
        rank, d = divmod(rank, k)
        digits.append(scenario.outcomes[d])
    return ctx, Assignment(ctx, tuple(reversed(digits)))
