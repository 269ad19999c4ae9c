import numpy as np
import pytest
from scipy import linalg as sla

from pwcalc.fixtures import load_fixture_set
from pwcalc.homfun import eval_f
from pwcalc.sampling import random_psd, random_unitary

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fixture_set():
    return load_fixture_set()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def sqrtm(M):
    return sla.sqrtm(M)


def inv_sqrtm(M):
    return np.linalg.inv(sla.sqrtm(M))


def commuting_pair(rng, n, low=0.0, high=3.0):
    U = random_unitary(rng, n)
    a = rng.uniform(low, high, n)
    b = rng.uniform(low, high, n)
    return (U * a) @ U.conj().T, (U * b) @ U.conj().T, U, a, b


def invertible_pair(rng, n, mu=0.5):
    return random_psd(rng, n, mu) / n, random_psd(rng, n, mu) / n


def record_acceptance(number, name, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    line = f"[acceptance {number:>2}] {status} {name}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[0].split()[-1])):
            terminalreporter.write_line(line)


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", default=False,
                     help="rewrite CLI golden files instead of comparing")


def rank_snapped(fn, scale, rank_tol=1e-10):
    """``(r, s) -> f(r, s)`` with arguments below ``rank_tol * scale`` set to 0,
    the numerical-rank convention the calculus uses for kernels."""
    cut = rank_tol * scale

    def f(r, s):
        return eval_f(fn, r if r > cut else 0.0, s if s > cut else 0.0)

    return f
