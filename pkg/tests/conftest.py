import numpy as np
import pytest
from hypothesis import settings

from upblockade import upb_parameters

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


@pytest.fixture
def upb():
    return upb_parameters()


def random_density_matrix(dim, rng):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


# one line per acceptance criterion, repeated in the terminal summary
VERDICTS: dict[str, str] = {}


@pytest.fixture
def verdict(capsys):
    def record(cid, passed, detail):
        line = f"{cid} {'PASS' if passed else 'FAIL'}: {detail}"
        VERDICTS[cid] = line
        with capsys.disabled():
            print(f"\n{line}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(VERDICTS, key=lambda c: (len(c.split()[0]), c)):
            terminalreporter.write_line(VERDICTS[cid])
