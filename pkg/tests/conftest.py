import numpy as np
import pytest

from wassqec.cost import PipelineSpec
from wassqec.noise import NoiseSpec


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, num_qubits, rank=None):
    dim = 2 ** num_qubits
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


@pytest.fixture(scope="session")
def phase_spec():
    return PipelineSpec.default(NoiseSpec("phase_flip", 0.8))


@pytest.fixture(scope="session")
def bit_spec():
    return PipelineSpec.default(NoiseSpec("bit_flip", 0.8))


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion, printed as the test finishes and again in the summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def record(number, title, passed, detail):
        line = f"criterion {number} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        lines.append(line)
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
