import pytest

from chebcert import derive_all
from chebcert.verifier import run_suite


@pytest.fixture(scope="session")
def graph():
    return derive_all()


@pytest.fixture(scope="session")
def suite(graph):
    return {r.claim: r for r in run_suite("all", graph.params, graph)}
