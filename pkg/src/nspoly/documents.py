"""Canonical JSON documents: scenario, model, system, lattice and report.

Rationals are strings ``"p/q"`` or ``"p"``.  Model tables list only nonzero
entries; a missing entry is the semiring zero.  Serialization sorts keys and
is byte-deterministic, so ``dumps(loads(doc)) == doc`` for canonical input.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .lattice import SupportLattice
from .model import BOOLEAN, SEMIRINGS, EmpiricalModel, ModelError, from_tables, support_bits
from .polytope import ConstraintSystem, PolytopeError, user_system
from .scenario import Assignment, Scenario, ScenarioError, new_scenario

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class DocumentError(ValueError):
    """Malformed document; the message names the offending field."""


def parse_rational(text: Any, where: str = "value") -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DocumentError(f"{where}: expected a rational string, got {text!r}")
    text = str(text).strip()
    if not _RATIONAL.match(text):
        raise DocumentError(f"{where}: malformed rational {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise DocumentError(f"{where}: zero denominator in {text!r}")
    return Fraction(int(num), int(den or 1))


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("top level: expected an object with a 'kind' field")
    return doc


def _field(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise DocumentError(f"{where}: missing field '{key}'")
    value = doc[key]
    if not isinstance(value, kind):
        raise DocumentError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _strings(values, where):
    if not all(isinstance(v, str) for v in values):
        raise DocumentError(f"{where}: expected a list of strings")
    return values


# scenario

def scenario_to_doc(scenario: Scenario) -> dict:
    return {"kind": "scenario", "variables": list(scenario.variables),
            "outcomes": list(scenario.outcomes), "contexts": [list(c) for c in scenario.contexts]}


def scenario_from_doc(doc: dict, where: str = "scenario") -> Scenario:
    variables = _strings(_field(doc, "variables", list, where), f"{where}.variables")
    outcomes = _strings(_field(doc, "outcomes", list, where), f"{where}.outcomes")
    contexts = _field(doc, "contexts", list, where)
    for k, c in enumerate(contexts):
        if not isinstance(c, list):
            raise DocumentError(f"{where}.contexts[{k}]: expected a list")
        _strings(c, f"{where}.contexts[{k}]")
    try:
        return new_scenario(variables, outcomes, contexts)
    except ScenarioError as exc:
        raise DocumentError(f"{where}: {exc}") from None


# model

def _joiner(scenario: Scenario) -> str:
    return "" if all(len(o) == 1 for o in scenario.outcomes) else ","


def section_key(scenario: Scenario, a: Assignment) -> str:
    return _joiner(scenario).join(a.values)


def _split_key(scenario: Scenario, key: str) -> tuple[str, ...]:
    return tuple(key.split(",")) if _joiner(scenario) else tuple(key)


def model_to_doc(model: EmpiricalModel) -> dict:
    tables = []
    for ctx in model.scenario.contexts:
        entries = {}
        for a, v in model.table(ctx).items():
            if v:
                entries[section_key(model.scenario, a)] = "1" if model.is_boolean else format_rational(v)
        tables.append({"context": list(ctx), "entries": entries})
    return {"kind": "model", "semiring": model.semiring.name,
            "scenario": scenario_to_doc(model.scenario), "tables": tables}


def model_from_doc(doc: dict) -> EmpiricalModel:
    semiring = SEMIRINGS.get(_field(doc, "semiring", str, "model"))
    if semiring is None:
        raise DocumentError(f"model.semiring: unknown semiring {doc['semiring']!r}")
    scenario = scenario_from_doc(_field(doc, "scenario", dict, "model"), "model.scenario")
    tables = {}
    for k, t in enumerate(_field(doc, "tables", list, "model")):
        where = f"model.tables[{k}]"
        if not isinstance(t, dict):
            raise DocumentError(f"{where}: expected an object")
        ctx = tuple(_strings(_field(t, "context", list, where), f"{where}.context"))
        entries = {}
        for key, raw in _field(t, "entries", dict, where).items():
            labels = _split_key(scenario, key)
            if len(labels) != len(ctx):
                raise DocumentError(f"{where}.entries[{key!r}]: section does not match context {ctx}")
            if semiring is BOOLEAN:
                if str(raw) not in ("0", "1"):
                    raise DocumentError(f"{where}.entries[{key!r}]: boolean entry must be 1 or 0")
                entries[labels] = int(str(raw))
            else:
                entries[labels] = parse_rational(raw, f"{where}.entries[{key!r}]")
        tables[ctx] = entries
    try:
        return from_tables(scenario, tables, semiring)
    except (ScenarioError, ModelError) as exc:
        raise DocumentError(f"model: {exc}") from None


# system

def system_to_doc(system: ConstraintSystem) -> dict:
    return {"kind": "system", "A": [[format_rational(v) for v in row] for row in system.A],
            "b": [format_rational(v) for v in system.b], "labels": list(system.labels)}


def system_from_doc(doc: dict) -> ConstraintSystem:
    A = _field(doc, "A", list, "system")
    b = _field(doc, "b", list, "system")
    rows = []
    for i, row in enumerate(A):
        if not isinstance(row, list):
            raise DocumentError(f"system.A[{i}]: expected a list")
        rows.append([parse_rational(v, f"system.A[{i}][{j}]") for j, v in enumerate(row)])
    rhs = [parse_rational(v, f"system.b[{i}]") for i, v in enumerate(b)]
    labels = doc.get("labels")
    if labels is not None:
        _strings(labels, "system.labels")
    try:
        return user_system(rows, rhs, labels)
    except PolytopeError as exc:
        raise DocumentError(f"system: {exc}") from None


# lattice

def lattice_to_doc(lattice: SupportLattice) -> dict:
    n = lattice.system.n
    nodes = []
    for nd in lattice.nodes:
        nodes.append({"support": support_bits(nd.support, n), "dimension": nd.dimension,
                      "atom": nd.is_atom,
                      "witness": None if nd.witness is None else [format_rational(v) for v in nd.witness]})
    return {"kind": "lattice", "labels": list(lattice.system.labels), "nodes": nodes,
            "edges": [list(e) for e in lattice.edges]}


def lattice_to_dot(lattice: SupportLattice) -> str:
    n = lattice.system.n
    lines = ["digraph support_lattice {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for i, nd in enumerate(lattice.nodes):
        lines.append(f'  n{i} [label="{support_bits(nd.support, n)}/{nd.dimension}"];')
    for lo, hi in lattice.edges:
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def report(command: str, holds: bool | None, **fields) -> dict:
    doc = {"kind": "report", "command": command}
    if holds is not None:
        doc["holds"] = holds
    doc.update(fields)
    return doc


def load_document(doc: dict):
    """Turn a parsed document into the matching object."""
    kind = doc.get("kind")
    if kind == "scenario":
        return scenario_from_doc(doc)
    if kind == "model":
        return model_from_doc(doc)
    if kind == "system":
        return system_from_doc(doc)
    raise DocumentError(f"kind: cannot load a {kind!r} document as input")

