import itertools
import random
from fractions import Fraction as F

import pytest

from nspoly import corpus
from nspoly.contextuality import (
    LD,
    MSC,
    GuardError,
    boolean_submodels,
    classify_vertices,
    consistent_global_assignment,
    greatest_ns_submodel,
    has_local_part,
    is_local,
    is_logically_contextual,
    is_minimal_boolean_ns,
    is_realizable,
    is_strongly_contextual,
    local_deterministic_models,
    realizability_certificate,
)
from nspoly.lattice import enumerate_vertices
from nspoly.model import (
    BOOLEAN,
    RATIONAL,
    EmpiricalModel,
    ModelError,
    check_no_signalling,
    convex_combination,
    deterministic_model,
    from_sections,
    possibilistic_collapse,
    uniform_model,
)
from nspoly.polytope import assemble_constraints
from nspoly.scenario import Assignment, assignments_on, global_assignments, new_scenario

from helpers import leq


def consistent(model, g):
    """Independent check that global assignment ``g`` restricts to a possible section everywhere."""
    sc = model.scenario
    gd = g.as_dict() if isinstance(g, Assignment) else g
    for ctx in sc.contexts:
        a = Assignment(ctx, tuple(gd[v] for v in ctx))
        if not model.table(ctx)[a]:
            return False
    return True


def exhaustive_sc(model):
    b = possibilistic_collapse(model)
    return not any(consistent(b, g) for g in global_assignments(b.scenario))


def test_bell_deterministic_models(bell):
    lds = local_deterministic_models(bell)
    assert len(lds) == 16
    assert len({m.entries for _, m in lds}) == 16


def test_single_context_deterministic_models():
    sc = new_scenario("ab", "01", ["ab"])
    assert len(local_deterministic_models(sc)) == 4


def test_unused_variable_is_invisible():
    sc = new_scenario("abz", "012", ["ab"])
    assert len(local_deterministic_models(sc)) == 3 ** 2


def test_guard():
    with pytest.raises(GuardError):
        local_deterministic_models(corpus.ks18_scenario(), limit=1000)


def test_is_local_on_deterministic(bell):
    g = next(iter(global_assignments(bell)))
    dec = is_local(deterministic_model(bell, g))
    assert dec.weights == (1,)
    assert deterministic_model(bell, dec.assignments[0]).entries == deterministic_model(bell, g).entries


def test_bell_table_is_nonlocal(qm):
    assert is_local(qm) is None


def test_uniform_is_local(bell):
    u = uniform_model(bell)
    dec = is_local(u)
    assert dec is not None and dec.reconstruct(bell) == u.entries


def test_decomposition_soundness(bell):
    rng = random.Random(7)
    lds = [m for _, m in local_deterministic_models(bell)]
    for _ in range(20):
        k = rng.randint(1, 5)
        picked = rng.sample(lds, k)
        raw = [rng.randint(1, 5) for _ in picked]
        m = convex_combination(picked, [F(r, sum(raw)) for r in raw])
        dec = is_local(m)
        assert dec.reconstruct(bell) == m.entries
        assert sum(dec.weights) == 1 and all(w > 0 for w in dec.weights)


def test_is_local_rejects_signalling(qm):
    entries = list(qm.entries)
    entries[0:4] = [F(1), 0, 0, 0]
    with pytest.raises(ModelError):
        is_local(EmpiricalModel(qm.scenario, RATIONAL, tuple(entries)))


def test_bell_table_collapse_not_sc(qm):
    sc, g = is_strongly_contextual(qm)
    assert not sc and consistent(possibilistic_collapse(qm), g)
    # the hand-derived witness is consistent as well
    assert consistent(possibilistic_collapse(qm), {"a": "1", "b": "0", "a'": "0", "b'": "0"})
    assert not exhaustive_sc(qm)


def test_ks18_is_sc():
    assert is_strongly_contextual(corpus.ks18_model()) == (True, None)


def test_model_s_is_sc(model_s):
    assert is_strongly_contextual(model_s) == (True, None)
    assert sum(1 for _ in global_assignments(model_s.scenario)) == 81
    assert exhaustive_sc(model_s)


def test_search_agrees_with_exhaustion_on_random_models():
    rng = random.Random(12)
    sc = corpus.model_s_scenario()
    for _ in range(60):
        bits = tuple(rng.random() < 0.5 for _ in range(sc.n_cells))
        m = EmpiricalModel(sc, BOOLEAN, bits)
        g = consistent_global_assignment(m)
        if g is None:
            assert not any(consistent(m, h) for h in global_assignments(sc))
        else:
            assert consistent(m, g)


def test_logical_contextuality_examples(qm, bell):
    assert is_logically_contextual(qm) == (False, None)
    for g in itertools.islice(global_assignments(bell), 4):
        assert is_logically_contextual(deterministic_model(bell, g)) == (False, None)


def test_hierarchy_on_corpus():
    for name in corpus.names():
        entry = corpus.get(name)
        if entry.model is None:
            continue
        sc, _ = is_strongly_contextual(entry.model)
        lc, witness = is_logically_contextual(entry.model)
        if sc:
            assert lc
        if lc:
            ctx, s = witness
            assert consistent_global_assignment(possibilistic_collapse(entry.model), s) is None
        if not lc:
            # every possible section extends to a consistent global assignment
            b = possibilistic_collapse(entry.model)
            for ctx in b.scenario.contexts:
                for s in b.possible_sections(ctx):
                    assert consistent_global_assignment(b, s) is not None


def test_bell_classification(bell, bell_vertices):
    classes = classify_vertices(bell, bell_vertices)
    tags = [c.tag for _, c in classes]
    assert tags.count(LD) == 16 and tags.count(MSC) == 8
    for v, c in classes:
        if c.tag == LD:
            assert deterministic_model(bell, c.witness).entries == v.point
        else:
            assert set(v.point) == {0, F(1, 2)}
            assert bin(v.support).count("1") == 8
            assert is_strongly_contextual(EmpiricalModel(bell, RATIONAL, v.point))[0]


@pytest.mark.parametrize("name", ["simplex", "tetrahedron"])
def test_single_context_vertices_are_ld(name):
    sc = corpus.get(name).scenario
    classes = classify_vertices(sc)
    assert classes and all(c.tag == LD for _, c in classes)


def test_realizability(model_s, qm):
    assert is_realizable(model_s) is None
    assert is_realizable(corpus.model_s_bell()) is None
    collapsed = possibilistic_collapse(qm)
    w = is_realizable(collapsed)
    assert w is not None and w.support() == collapsed.support()
    assert check_no_signalling(w) == []


def test_model_s_certificate(model_s):
    cert = realizability_certificate(model_s)
    assert not cert.realizable
    assert set(cert.closure.maxima) == {0} and set(cert.cone_maxima) == {0}


def test_realizability_rejects_signalling(bell):
    bad = from_sections(bell, {("a", "b"): ["00"], ("a", "b'"): ["11"], ("a'", "b"): ["00"], ("a'", "b'"): ["00"]})
    assert check_no_signalling(bad)
    with pytest.raises(ModelError):
        is_realizable(bad)


def test_minimality(model_s, bell, bell_vertices):
    assert is_minimal_boolean_ns(model_s)
    full = EmpiricalModel(bell, BOOLEAN, (True,) * 16)
    assert not is_minimal_boolean_ns(full)
    for v, c in classify_vertices(bell, bell_vertices):
        assert is_minimal_boolean_ns(possibilistic_collapse(EmpiricalModel(bell, RATIONAL, v.point)))


def test_minimality_agrees_with_brute_force_on_bell(bell):
    # every boolean NS model on the Bell scenario, by exhausting the nonempty
    # section sets of the four contexts and comparing marginals directly
    rng = random.Random(2)

    def marginals(block):
        first = frozenset(o for o in (0, 1) if block >> (2 * o) & 0b11)
        second = frozenset(o for o in (0, 1) if block >> o & 0b101)
        return first, second

    ns = []
    for ab, a2b, ab2, a2b2 in itertools.product(range(1, 16), repeat=4):
        m = [marginals(x) for x in (ab, a2b, ab2, a2b2)]
        if m[0][1] == m[1][1] and m[0][0] == m[2][0] and m[1][0] == m[3][0] and m[2][1] == m[3][1]:
            ns.append(ab | a2b << 4 | ab2 << 8 | a2b2 << 12)
    for bits in rng.sample(ns, 20):
        m = EmpiricalModel(bell, BOOLEAN, tuple(bool(bits >> i & 1) for i in range(16)))
        assert check_no_signalling(m) == []
    ns_set = set(ns)
    compared = 0
    for bits in rng.sample(ns, 60):
        m = EmpiricalModel(bell, BOOLEAN, tuple(bool(bits >> i & 1) for i in range(16)))
        brute = not any(o != bits and o & ~bits == 0 for o in ns_set)
        assert is_minimal_boolean_ns(m) == brute
        if bin(bits).count("1") <= 11:
            subs = {s.support() for s in boolean_submodels(m)}
            assert subs == {o for o in ns_set if o & ~bits == 0}
            compared += 1
    assert compared >= 5


def test_greatest_submodel_of_model_s_is_itself(model_s):
    assert greatest_ns_submodel(model_s).entries == model_s.entries
    assert boolean_submodels(model_s)[0].entries == model_s.entries


def test_sc_antitone_below_model_s_extensions(model_s):
    rng = random.Random(31)
    checked = 0
    for _ in range(40):
        bits = tuple(bool(a) or rng.random() < 0.1 for a in model_s.entries)
        m = greatest_ns_submodel(EmpiricalModel(model_s.scenario, BOOLEAN, bits))
        if not is_strongly_contextual(m)[0]:
            continue
        for sub in boolean_submodels(m):
            assert is_strongly_contextual(sub)[0]
            checked += 1
    assert checked > 20


def test_sc_antitone_on_bell_lattice(bell, bell_lattice):
    sups = bell_lattice.supports
    sc_nodes = [nd for nd in bell_lattice.nodes if nd.support is not None
                and is_strongly_contextual(EmpiricalModel(bell, RATIONAL, nd.witness))[0]]
    assert sc_nodes
    for top in sc_nodes:
        for nd in bell_lattice.nodes:
            if nd.support is not None and leq(nd.support, top.support):
                assert is_strongly_contextual(EmpiricalModel(bell, RATIONAL, nd.witness))[0]


def test_msc_vertices_have_no_local_part(bell, bell_system, bell_vertices):
    classes = classify_vertices(bell, bell_vertices)
    msc = [v.point for v, c in classes if c.tag == MSC]
    ld = [v.point for v, c in classes if c.tag == LD]
    for v in msc:
        for d in ld:
            assert not has_local_part(v, d, bell_system)
    u = uniform_model(bell).entries
    assert all(has_local_part(u, d, bell_system) for d in ld)
    assert has_local_part(ld[0], ld[0], bell_system)
