import pytest

from nspoly import corpus
from nspoly.lattice import enumerate_vertices, support_lattice
from nspoly.polytope import assemble_constraints

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bell():
    return corpus.bell_scenario()


@pytest.fixture(scope="session")
def bell_system(bell):
    return assemble_constraints(bell)


@pytest.fixture(scope="session")
def bell_vertices(bell_system):
    return enumerate_vertices(bell_system)


@pytest.fixture(scope="session")
def bell_lattice(bell_system, bell_vertices):
    return support_lattice(bell_system, bell_vertices)


@pytest.fixture(scope="session")
def tetra_system():
    return assemble_constraints(corpus.tetrahedron_scenario())


@pytest.fixture(scope="session")
def simplex_system():
    return assemble_constraints(corpus.simplex_scenario())


@pytest.fixture
def qm():
    return corpus.bell_qm_model()


@pytest.fixture
def model_s():
    return corpus.model_s()
