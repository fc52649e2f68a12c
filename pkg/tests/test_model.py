import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nspoly import corpus
from nspoly.model import (
    BOOLEAN,
    RATIONAL,
    EmpiricalModel,
    ModelError,
    check_no_signalling,
    check_normalization,
    convex_combination,
    deterministic_model,
    from_tables,
    marginalize,
    model_to_vector,
    possibilistic_collapse,
    support_bits,
    support_of,
    uniform_model,
    vector_to_model,
)
from nspoly.scenario import Assignment, global_assignments, new_scenario

rationals = st.fractions(min_value=0, max_value=5, max_denominator=12)
booleans = st.booleans()


@pytest.mark.parametrize("sr, elems", [(RATIONAL, rationals), (BOOLEAN, booleans)])
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_semiring_laws(sr, elems, data):
    a, b, c = (data.draw(elems) for _ in range(3))
    assert sr.add(a, b) == sr.add(b, a)
    assert sr.mul(a, b) == sr.mul(b, a)
    assert sr.add(sr.add(a, b), c) == sr.add(a, sr.add(b, c))
    assert sr.mul(sr.mul(a, b), c) == sr.mul(a, sr.mul(b, c))
    assert sr.add(a, sr.zero) == a
    assert sr.mul(a, sr.one) == a
    assert sr.mul(a, sr.add(b, c)) == sr.add(sr.mul(a, b), sr.mul(a, c))


def test_boolean_addition_is_idempotent():
    for a in (False, True):
        assert BOOLEAN.add(a, a) == a


def test_rationals_are_canonical():
    x = RATIONAL.coerce("6/8")
    assert (x.numerator, x.denominator) == (3, 4)
    y = RATIONAL.coerce(F(10, 4))
    assert (y.numerator, y.denominator) == (5, 2)
    with pytest.raises(ModelError):
        RATIONAL.coerce(F(-1, 2))


def test_bell_table_vector(qm):
    assert model_to_vector(qm)[:8] == (0, F(1, 2), F(1, 2), 0, F(3, 8), F(1, 8), F(1, 8), F(3, 8))


def test_bell_table_normalized(qm):
    assert check_normalization(qm) == []


def test_bell_table_no_signalling(qm):
    assert check_no_signalling(qm) == []
    e = qm.entries
    # c + e = k + m: the a -> 0 marginal seen from ab and from ab'
    assert e[0] + e[1] == F(1, 2) == e[8] + e[9]
    assert e[8] == F(3, 8) and e[9] == F(1, 8)


def test_normalization_violation(bell):
    m = from_tables(bell, {("a", "b"): {"00": F(1, 2), "01": F(1, 2), "10": F(1, 2)}})
    bad = [v for v in check_normalization(m) if v.context == ("a", "b")]
    assert len(bad) == 1 and bad[0].total == F(3, 2)


def test_boolean_models_with_a_section_are_normalized(bell):
    rng = random.Random(3)
    for _ in range(30):
        bits = [rng.random() < 0.5 for _ in range(16)]
        for k in range(4):
            bits[4 * k + rng.randrange(4)] = True
        m = EmpiricalModel(bell, BOOLEAN, tuple(bits))
        assert check_normalization(m) == []


def test_signalling_violation(qm):
    entries = list(qm.entries)
    entries[0:4] = [F(1), F(0), F(0), F(0)]
    bad = check_no_signalling(EmpiricalModel(qm.scenario, RATIONAL, tuple(entries)))
    hit = [v for v in bad if {v.context, v.other} == {("a", "b"), ("a", "b'")}
           and v.shared == Assignment(("a",), ("0",))]
    assert len(hit) == 1
    assert {hit[0].left, hit[0].right} == {F(1), F(1, 2)}


def test_model_s_boolean_no_signalling(model_s):
    assert model_s.semiring is BOOLEAN
    assert check_normalization(model_s) == []
    assert check_no_signalling(model_s) == []


def test_marginalize_identity(qm):
    ctx = ("a'", "b")
    assert marginalize(qm, ctx, ctx) == qm.table(ctx)


def test_marginalize_functorial():
    m = uniform_model(corpus.ks18_scenario())
    mixed = convex_combination(
        [m, deterministic_model(m.scenario, dict.fromkeys("ABCDEFGHIJKLMNOPQR", "1"))],
        [F(1, 3), F(2, 3)])
    ctx = tuple("ABCD")
    direct = marginalize(mixed, ctx, "A")
    via = {}
    for t, v in marginalize(mixed, ctx, "AC").items():
        k = t.restrict("A")
        via[k] = via.get(k, 0) + v
    assert direct == via


def test_bell_support(qm):
    sm = possibilistic_collapse(qm)
    assert [a.label() for a in sm.possible_sections(("a", "b"))] == ["01", "10"]
    for ctx in qm.scenario.contexts[1:]:
        assert len(sm.possible_sections(ctx)) == 4


def test_deterministic_model_example(bell):
    m = deterministic_model(bell, {"a": "1", "a'": "0", "b": "0", "b'": "1"})
    assert [v for v in m.table(("a", "b")).values()] == [0, 0, 1, 0]
    assert m.table(("a", "b"))[Assignment(("a", "b"), ("1", "0"))] == 1


@pytest.mark.parametrize("name", ["bell", "ks-18", "model-s", "tetrahedron"])
def test_deterministic_models_are_no_signalling(name):
    sc = corpus.get(name).scenario
    for i, g in enumerate(global_assignments(sc)):
        if i >= 64:
            break
        m = deterministic_model(sc, g)
        assert check_no_signalling(m) == [] and check_normalization(m) == []
        for ctx in sc.contexts:
            assert len(possibilistic_collapse(m).possible_sections(ctx)) == 1


def test_uniform_models(bell):
    assert set(uniform_model(bell).entries) == {F(1, 4)}
    assert uniform_model(new_scenario(["x"], "01", [["x"]])).entries == (F(1, 2), F(1, 2))
    assert set(uniform_model(corpus.model_s_scenario()).entries) == {F(1, 9)}
    assert support_bits(uniform_model(bell).support(), 16) == "1" * 16


def test_convex_combinations(bell):
    gs = list(global_assignments(bell))
    d1, d2 = deterministic_model(bell, gs[0]), deterministic_model(bell, gs[5])
    mix = convex_combination([d1, d2], [F(1, 2), F(1, 2)])
    assert mix.support() == d1.support() | d2.support()
    assert convex_combination([d1, d2], [1, 0]).entries == d1.entries
    every = convex_combination([deterministic_model(bell, g) for g in gs], [F(1, 16)] * 16)
    assert every.entries == uniform_model(bell).entries
    with pytest.raises(ModelError):
        convex_combination([d1, d2], [F(1, 2), F(1, 3)])


def test_vector_to_model_checks_normalization(bell):
    with pytest.raises(ModelError):
        vector_to_model(bell, [F(1, 3)] * 16)


def _random_mixture(rng, models):
    k = rng.randint(1, min(4, len(models)))
    picked = rng.sample(models, k)
    raw = [rng.randint(1, 9) for _ in picked]
    return convex_combination(picked, [F(r, sum(raw)) for r in raw])


def test_collapse_homomorphism_on_mixtures(bell_vertices, bell):
    rng = random.Random(11)
    models = [EmpiricalModel(bell, RATIONAL, v.point) for v in bell_vertices]
    for _ in range(200):
        m = _random_mixture(rng, models)
        assert check_no_signalling(m) == []
        assert check_no_signalling(possibilistic_collapse(m)) == []


@given(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=7), min_size=6, max_size=6),
       st.fractions(min_value=0, max_value=1, max_denominator=50))
@settings(max_examples=100, deadline=None)
def test_support_join_law(values, lam):
    x, y = values[:3], values[3:]
    if lam in (0, 1):
        return
    z = [lam * a + (1 - lam) * b for a, b in zip(x, y)]
    assert support_of(z) == support_of(x) | support_of(y)


def test_support_of_empty_vector():
    assert support_of([0, 0]) == 0
