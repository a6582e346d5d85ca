from __future__ import annotations

import numpy as np
import pytest

from ptwalk import fixtures
from ptwalk.graphcore import hamiltonian
from ptwalk.randnet import RandomGraphSpec, generate

# Sizes at which every family accepts a usable fraction of draws.
MIXED_SPECS = (
    RandomGraphSpec("er_dag", 8, p=0.3, seed=11),
    RandomGraphSpec("er_dag_plus_one", 8, p=0.3, seed=12),
    RandomGraphSpec("ba_in_regular", 10, m=2, seed=13),
    RandomGraphSpec("er_bidir", 8, p=0.3, seed=14),
    RandomGraphSpec("ba_out_regular", 5, m=2, seed=15),
    RandomGraphSpec("er_dag", 25, p=0.05, seed=16),
)


def mixed_graphs(count: int):
    return [generate(MIXED_SPECS[i % len(MIXED_SPECS)], index=i) for i in range(count)]


def dag_graphs(count: int, seed: int = 21):
    spec = RandomGraphSpec("er_dag", 8, p=0.3, seed=seed)
    return [generate(spec, index=i) for i in range(count)]


@pytest.fixture(scope="session")
def mixed100():
    return mixed_graphs(100)


@pytest.fixture(scope="session")
def dag50():
    return dag_graphs(50)


@pytest.fixture
def g3():
    return fixtures.three_vertex()


@pytest.fixture
def h3(g3):
    return hamiltonian(g3)


R2 = np.sqrt(2.0)
ETA3 = np.array(
    [[3 + 2 * R2, -3 + 2 * R2, R2], [-3 + 2 * R2, 3 + 2 * R2, R2], [R2, R2, 5 * R2]]
) / 6
HT3 = np.array([[10, -8, -4], [-8, 10, -4], [-4, -4, 16]]) / 9


_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion for the end-of-run summary."""

    def record(name: str, ok: bool | None, detail: str = "") -> bool | None:
        status = "INFO" if ok is None else ("PASS" if ok else "FAIL")
        line = f"{status}  {name}" + (f"  [{detail}]" if detail else "")
        _ACCEPTANCE[name] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE.values():
            terminalreporter.write_line(line)
