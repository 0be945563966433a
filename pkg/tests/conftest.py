import random

import pytest
from hypothesis import HealthCheck, settings

from liemod.liealg import abelian, heisenberg3, sl2

settings.register_profile(
    "liemod",
    deadline=None,
    max_examples=30,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("liemod")

ALGEBRAS = {"sl2": sl2, "heisenberg3": heisenberg3, "abelian3": lambda: abelian(3)}


@pytest.fixture(params=sorted(ALGEBRAS))
def algebra(request):
    return ALGEBRAS[request.param]()


@pytest.fixture
def rng():
    return random.Random(20241016)


# acceptance criteria record their outcome here; printed after the run
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for label in sorted(ACCEPTANCE):
            terminalreporter.write_line(f"{ACCEPTANCE[label]}  {label}")
