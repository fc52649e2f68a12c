"""Built-in scenarios and models, plus the ``uniform:`` and ``det:`` generators.

Extra entries are picked up from ``*.json`` documents in the directory named
by ``$NSPOLY_CORPUS_DIR``; the file stem is the entry name.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction as F
from pathlib import Path

from .model import (
    EmpiricalModel,
    ModelError,
    check_no_signalling,
    check_normalization,
    deterministic_model,
    from_sections,
    from_tables,
    uniform_model,
)
from .scenario import Assignment, Scenario, new_scenario

CORPUS_ENV = "NSPOLY_CORPUS_DIR"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    scenario: Scenario
    model: EmpiricalModel | None
    note: str


def bell_scenario() -> Scenario:
    return new_scenario(["a", "a'", "b", "b'"], ["0", "1"],
                        [("a", "b"), ("a'", "b"), ("a", "b'"), ("a'", "b'")])


def bell_qm_model() -> EmpiricalModel:
    # columns of the table are (0,0), (1,0), (0,1), (1,1)
    cols = ["00", "10", "01", "11"]
    rows = {
        ("a", "b"): [F(0), F(1, 2), F(1, 2), F(0)],
        ("a'", "b"): [F(3, 8), F(1, 8), F(1, 8), F(3, 8)],
        ("a", "b'"): [F(3, 8), F(1, 8), F(1, 8), F(3, 8)],
        ("a'", "b'"): [F(3, 8), F(1, 8), F(1, 8), F(3, 8)],
    }
    return from_tables(bell_scenario(), {c: dict(zip(cols, vals)) for c, vals in rows.items()})


KS_COLUMNS = [
    "ABCD", "AEFG", "HICJ", "HKGL", "BEMN", "IKNO", "PQDJ", "PRFL", "QRMO",
]


def ks18_scenario() -> Scenario:
    return new_scenario(list("ABCDEFGHIJKLMNOPQR"), ["0", "1"], [tuple(c) for c in KS_COLUMNS])


def ks18_model() -> EmpiricalModel:
    one_hot = ["1000", "0100", "0010", "0001"]
    return from_sections(ks18_scenario(), {tuple(c): one_hot for c in KS_COLUMNS})


def model_s_scenario() -> Scenario:
    return new_scenario(list("ABCD"), ["0", "1", "2"],
                        [tuple("AB"), tuple("AC"), tuple("AD"), tuple("BC"), tuple("BD"), tuple("CD")])


MODEL_S_SECTIONS = {
    "AB": ["00", "10", "21"],
    "AC": ["00", "11", "21"],
    "AD": ["01", "10", "21"],
    "BC": ["00", "11"],
    "BD": ["00", "11"],
    "CD": ["01", "10"],
}


def model_s() -> EmpiricalModel:
    return from_sections(model_s_scenario(), {tuple(k): v for k, v in MODEL_S_SECTIONS.items()})


def model_s_bell_scenario() -> Scenario:
    first = [f"{v}|1" for v in "ABCD"]
    second = [f"{v}|2" for v in "ABCD"]
    return new_scenario(first + second, ["0", "1", "2"], [(p, q) for p in first for q in second])


# the listing of the doubled model, context by context (variables in listed order)
MODEL_S_BELL_SECTIONS = [
    (["A|1 A|2"], ["00", "11", "22"]),
    (["B|1 B|2", "C|1 C|2", "D|1 D|2"], ["00", "11"]),
    (["A|1 B|2", "A|2 B|1"], ["00", "10", "21"]),
    (["A|1 C|2", "A|2 C|1"], ["00", "11", "21"]),
    (["A|1 D|2", "A|2 D|1"], ["01", "10", "21"]),
    (["B|1 C|2", "B|2 C|1"], ["00", "11"]),
    (["B|1 D|2", "B|2 D|1"], ["00", "11"]),
    (["C|1 D|2", "C|2 D|1"], ["01", "10"]),
]


def model_s_bell() -> EmpiricalModel:
    sections = {}
    for contexts, secs in MODEL_S_BELL_SECTIONS:
        for c in contexts:
            sections[tuple(c.split())] = secs
    return from_sections(model_s_bell_scenario(), sections)


def simplex_scenario() -> Scenario:
    return new_scenario(["x"], ["0", "1"], [("x",)])


def tetrahedron_scenario() -> Scenario:
    return new_scenario(["a", "b"], ["0", "1"], [("a", "b")])


def _validated(entry: CorpusEntry) -> CorpusEntry:
    if entry.model is not None:
        bad = check_normalization(entry.model) or check_no_signalling(entry.model)
        if bad:
            raise ModelError(f"corpus entry {entry.name} fails validation: {bad[0]}")
    return entry


_BUILTIN = {
    "bell": lambda: CorpusEntry("bell", bell_scenario(), None, "(2,2,2) Bell scenario"),
    "bell-qm": lambda: CorpusEntry("bell-qm", bell_scenario(), bell_qm_model(), "quantum Bell table"),
    "ks-18": lambda: CorpusEntry("ks-18", ks18_scenario(), ks18_model(), "18-variable Kochen-Specker set, one-hot supports"),
    "model-s": lambda: CorpusEntry("model-s", model_s_scenario(), model_s(), "minimal possibilistic model with no probabilistic realization"),
    "model-s-bell": lambda: CorpusEntry("model-s-bell", model_s_bell_scenario(), model_s_bell(), "Bell-type doubling of model-s"),
    "simplex": lambda: CorpusEntry("simplex", simplex_scenario(), None, "one variable, one context: a segment"),
    "tetrahedron": lambda: CorpusEntry("tetrahedron", tetrahedron_scenario(), None, "one two-variable context: a tetrahedron"),
}


def names() -> list[str]:
    extra = []
    directory = os.environ.get(CORPUS_ENV)
    if directory and Path(directory).is_dir():
        extra = sorted(p.stem for p in Path(directory).glob("*.json"))
    return sorted(set(_BUILTIN) | set(extra))


def get(name: str) -> CorpusEntry:
    """Look up an entry; ``uniform:NAME`` and ``det:NAME:OUTCOMES`` build models on the fly."""
    kind, _, rest = name.partition(":")
    if kind == "uniform" and rest:
        base = get(rest)
        return CorpusEntry(name, base.scenario, uniform_model(base.scenario), f"uniform model on {rest}")
    if kind == "det" and rest:
        base_name, _, values = rest.rpartition(":")
        base = get(base_name)
        sc = base.scenario
        labels = values.split(",") if "," in values else list(values)
        if len(labels) != len(sc.variables):
            raise KeyError(f"det:{base_name} needs {len(sc.variables)} outcomes, got {values!r}")
        g = Assignment(sc.variables, tuple(labels))
        return CorpusEntry(name, sc, deterministic_model(sc, g), f"deterministic model {g}")
    if name in _BUILTIN:
        return _validated(_BUILTIN[name]())
    directory = os.environ.get(CORPUS_ENV)
    if directory:
        path = Path(directory) / f"{name}.json"
        if path.is_file():
            from .documents import load_document, loads

            obj = load_document(loads(path.read_text()))
            if isinstance(obj, EmpiricalModel):
                return _validated(CorpusEntry(name, obj.scenario, obj, str(path)))
            if isinstance(obj, Scenario):
                return CorpusEntry(name, obj, None, str(path))
    raise KeyError(f"unknown corpus entry {name!r}")
