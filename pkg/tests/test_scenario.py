import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nspoly import corpus
from nspoly.documents import scenario_from_doc, scenario_to_doc
from nspoly.scenario import (
    Assignment,
    Scenario,
    ScenarioError,
    assignments,
    cell_index,
    global_assignments,
    index_cell,
    new_scenario,
    restrict,
)


def test_bell_scenario_has_16_cells(bell):
    assert bell.n_cells == 16


def test_ks18_has_144_cells():
    sc = corpus.ks18_scenario()
    assert len(sc.variables) == 18
    assert sc.n_cells == 9 * 2 ** 4


def test_one_variable_simplex():
    assert new_scenario(["x"], ["0", "1"], [["x"]]).n_cells == 2


@pytest.mark.parametrize("variables, outcomes, contexts", [
    (["a", "a"], ["0"], [["a"]]),
    (["a"], ["0", "0"], [["a"]]),
    (["a"], ["0"], [["z"]]),
    (["a"], ["0"], [[]]),
    (["a"], ["0"], [["a", "a"]]),
    ([], ["0"], []),
    (["a"], [], [["a"]]),
])
def test_invalid_scenarios_rejected(variables, outcomes, contexts):
    with pytest.raises(ScenarioError):
        new_scenario(variables, outcomes, contexts)


def test_duplicate_contexts_are_dropped():
    sc = new_scenario("ab", "01", [["a", "b"], ["b"], ["b", "a"]])
    assert sc.contexts == (("a", "b"), ("b",))
    with pytest.raises(ScenarioError):
        Scenario(("a", "b"), ("0", "1"), (("a", "b"), ("b", "a")))


def test_assignments_are_lexicographic(bell):
    labels = [a.label() for a in assignments(bell, ["a", "b"])]
    assert labels == ["00", "01", "10", "11"]


def test_assignments_three_outcomes():
    sc = new_scenario(["A", "B"], ["0", "1", "2"], [["A", "B"]])
    got = [a.values for a in assignments(sc, ["A", "B"])]
    assert got == list(itertools.product("012", repeat=2))
    assert len(got) == 9


def test_assignments_context_of_four():
    sc = corpus.ks18_scenario()
    assert len(assignments(sc, "ABCD")) == 16


def test_assignments_unknown_context(bell):
    with pytest.raises(ScenarioError):
        assignments(bell, ["a", "a'"])


def test_restrict():
    a = Assignment(("a", "b"), ("1", "0"))
    assert restrict(a, ["a"]) == Assignment(("a",), ("1",))
    assert restrict(a, []) == Assignment((), ())
    assert restrict(Assignment(("A", "D"), ("0", "1")), ["D"]) == Assignment(("D",), ("1",))
    with pytest.raises(ScenarioError):
        restrict(a, ["c"])


def test_global_assignment_counts():
    assert sum(1 for _ in global_assignments(new_scenario("abcd", "01", [["a"]]))) == 16
    assert sum(1 for _ in global_assignments(new_scenario("abcd", "012", [["a"]]))) == 81


def test_global_assignments_stream_ks18():
    it = global_assignments(corpus.ks18_scenario())
    assert not isinstance(it, (list, tuple))
    assert sum(1 for _ in it) == 2 ** 18


def test_cell_index_examples(bell):
    assert cell_index(bell, ["a", "b"], Assignment(("a", "b"), ("0", "0"))) == 0
    assert cell_index(bell, ["a'", "b'"], Assignment(("a'", "b'"), ("1", "1"))) == 15
    # order of the context's variables in the query does not matter
    assert cell_index(bell, ["b", "a"], Assignment(("b", "a"), ("0", "1"))) == 2
    with pytest.raises(IndexError):
        index_cell(bell, 16)


@st.composite
def scenarios(draw):
    nv = draw(st.integers(1, 4))
    variables = [f"v{i}" for i in range(nv)]
    outcomes = [str(k) for k in range(draw(st.integers(1, 3)))]
    subsets = [c for r in range(1, nv + 1) for c in itertools.combinations(variables, r)]
    picked = draw(st.lists(st.sampled_from(subsets), min_size=1, max_size=4, unique=True))
    shuffled = [tuple(draw(st.permutations(c))) for c in picked]
    return new_scenario(variables, outcomes, shuffled)


@given(scenarios())
@settings(max_examples=60, deadline=None)
def test_cell_index_round_trip(sc):
    seen = set()
    for i in range(sc.n_cells):
        ctx, a = index_cell(sc, i)
        assert cell_index(sc, ctx, a) == i
        seen.add((ctx, a))
    assert len(seen) == sc.n_cells
    assert sc.n_cells == sum(len(sc.outcomes) ** len(c) for c in sc.contexts)


@given(scenarios())
@settings(max_examples=40, deadline=None)
def test_restrictions_land_in_sub_assignments(sc):
    for ctx in sc.contexts:
        got = assignments(sc, ctx)
        assert len(got) == len(sc.outcomes) ** len(ctx)
        u = ctx[:1]
        subs = {a.restrict(u) for a in got}
        assert subs == {Assignment(u, (o,)) for o in sc.outcomes}


@given(scenarios())
@settings(max_examples=40, deadline=None)
def test_serialization_preserves_cell_order(sc):
    again = scenario_from_doc(scenario_to_doc(sc))
    assert again == sc
    assert [index_cell(again, i) for i in range(again.n_cells)] == [index_cell(sc, i) for i in range(sc.n_cells)]
