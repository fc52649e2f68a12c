"""Exact combinatorics of no-signalling polytopes from possibilistic data."""
from .bellize import bellize_model, bellize_scenario, marginal_support
from .contextuality import (
    classify_vertices,
    is_local,
    is_logically_contextual,
    is_minimal_boolean_ns,
    is_realizable,
    is_strongly_contextual,
    local_deterministic_models,
    realizability_certificate,
)
from .lattice import (
    basic_solutions_oracle,
    check_lattice_properties,
    compare_with_oracle,
    enumerate_vertices,
    face_lattice_oracle,
    join,
    meet,
    support_lattice,
)
from .model import (
    BOOLEAN,
    RATIONAL,
    EmpiricalModel,
    check_no_signalling,
    check_normalization,
    convex_combination,
    deterministic_model,
    from_sections,
    from_tables,
    marginalize,
    model_to_vector,
    possibilistic_collapse,
    uniform_model,
    vector_to_model,
)
from .polytope import (
    ConstraintSystem,
    Face,
    assemble_constraints,
    carrier_face,
    face_dimension,
    is_achievable,
    membership,
    relint_membership,
    support_closure,
    user_system,
)
from .scenario import Assignment, Scenario, assignments, cell_index, global_assignments, index_cell, new_scenario, restrict

__version__ = "0.1.0"
