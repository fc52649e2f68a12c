"""Bell-type doubling of a possibilistic model on a complete pairwise scenario.

Variable ``P`` becomes ``P|1`` (first party) and ``P|2`` (second party); the
contexts are every pair ``{P|1, Q|2}``.
"""
from __future__ import annotations

import itertools

from .model import BOOLEAN, EmpiricalModel, ModelError, check_no_signalling, from_tables, marginalize
from .scenario import Scenario, ScenarioError, new_scenario


def party(var: str, k: int) -> str:
    return f"{var}|{k}"


def marginal_support(model: EmpiricalModel, var: str) -> frozenset[str]:
    """Outcomes of ``var`` possible in the model, agreed on by every context containing it."""
    if not model.is_boolean:
        raise ModelError("expected a boolean model")
    found = None
    for ctx in model.scenario.contexts:
        if var not in ctx:
            continue
        here = frozenset(a.values[0] for a, v in marginalize(model, ctx, [var]).items() if v)
        if found is None:
            found = here
        elif here != found:
            raise ModelError(f"contexts disagree on the marginal of {var}; the model is signalling")
    if found is None:
        raise ScenarioError(f"variable {var} occurs in no context")
    return found


def _check_pairwise(scenario: Scenario):
    if any(len(c) != 2 for c in scenario.contexts):
        raise ScenarioError("bellization needs every context to have exactly two variables")
    have = {frozenset(c) for c in scenario.contexts}
    want = {frozenset(p) for p in itertools.combinations(scenario.variables, 2)}
    if have != want:
        raise ScenarioError("bellization needs the complete family of variable pairs as contexts")


def bellize_scenario(scenario: Scenario) -> Scenario:
    _check_pairwise(scenario)
    first = [party(v, 1) for v in scenario.variables]
    second = [party(v, 2) for v in scenario.variables]
    contexts = [(p, q) for p in first for q in second]
    return new_scenario(first + second, scenario.outcomes, contexts)


def bellize_model(model: EmpiricalModel) -> EmpiricalModel:
    """Doubled model: off-diagonal contexts copy the original pair's sections, diagonal ones carry ``oo``."""
    if not model.is_boolean:
        raise ModelError("bellization applies to boolean models")
    bad = check_no_signalling(model)
    if bad:
        raise ModelError(f"model is signalling: {bad[0]}")
    scenario = bellize_scenario(model.scenario)
    tables = {}
    for p in model.scenario.variables:
        for q in model.scenario.variables:
            ctx = (party(p, 1), party(q, 2))
            if p == q:
                tables[ctx] = {(o, o): 1 for o in marginal_support(model, p)}
            else:
                tables[ctx] = {(s[p], s[q]): 1 for s in model.possible_sections((p, q))}
    return from_tables(scenario, tables, BOOLEAN)
