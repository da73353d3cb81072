import math
import random

import pytest
from hypothesis import strategies as st

from trackalg.algebra import Ring, TruncComplex1
from trackalg.fixtures import builtin, corpus_instance

ORDERS = (0, 2, 3, 4, 6, 8)
FINITE = (2, 3, 4, 6, 8)


def compatible_entry(n, m, k):
    """A valid d-entry from Z/m to Z/n (0 meaning Z): n divides m * entry."""
    if n == 0:
        return k if m == 0 else 0
    if m == 0:
        return k
    return k * (n // math.gcd(n, m))


def random_complex(rng: random.Random, max_order: int = 64) -> TruncComplex1:
    """A random finite truncated complex with |C1| * |C0| <= max_order."""
    while True:
        c1 = [rng.choice(FINITE) for _ in range(rng.randint(0, 2))]
        c0 = [rng.choice(FINITE) for _ in range(rng.randint(0, 2))]
        if math.prod(c1) * math.prod(c0) <= max_order:
            break
    d = [[compatible_entry(n, m, rng.randint(0, 7)) for m in c1] for n in c0]
    return TruncComplex1.from_matrix(c1, c0, d, Ring.integers())


@st.composite
def complexes(draw, max_order=64):
    return random_complex(random.Random(draw(st.integers(0, 2**32))), max_order)


@pytest.fixture(scope="session")
def tc():
    return builtin("Tc")


@pytest.fixture(scope="session")
def m2():
    return builtin("M2")


@pytest.fixture(scope="session")
def q2():
    return builtin("Q2")


@pytest.fixture(scope="session")
def q2_rank2():
    return builtin("Q2", max_rank=2)


@pytest.fixture(scope="session")
def corpus():
    return {n: corpus_instance(n) for n in ("Tc", "M2", "Q2")}


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()
