import pytest

from diracmorse.cli import load_suite
from diracmorse.eigensolver import solve_energy
from diracmorse.morse_model import MorseProblem

ACCEPTANCE_LINES = []


def problem_from_entry(e):
    return MorseProblem.build(e["mode"], e["D"], e["r0"], e["a"], e["m0"], e["kappa"], e.get("A", 0.0))


@pytest.fixture(scope="session")
def suite():
    return load_suite()


@pytest.fixture(scope="session")
def suite_states(suite):
    """(entry, problem, closed-form E) for every committed suite state."""
    out = []
    for e in suite:
        p = problem_from_entry(e)
        out.append((e, p, solve_energy(p, e["n"]).roots[0].E))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
