import json
from pathlib import Path

import pytest

from belex import load_injection, load_network, run_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sample_network():
    return load_network(fixture_text("sample_network.json"))


@pytest.fixture(scope="session")
def sample_network_doc():
    return json.loads(fixture_text("sample_network.json"))


@pytest.fixture(scope="session")
def sample_history(sample_network):
    return run_scenario(sample_network, [("C", "c_1"), ("D", "d_1")])


@pytest.fixture(scope="session")
def injected_history():
    return load_injection(fixture_text("sample_trajectory_inject.json"))


@pytest.fixture(scope="session")
def balanced_history():
    return load_injection(fixture_text("balanced_evidence_inject.json"))
