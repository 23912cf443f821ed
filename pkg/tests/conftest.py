"""Shared fixtures: parsed corpus files and a deterministic hypothesis profile."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from certkit.syntax import parse_abox, parse_query, parse_rewriting, parse_rules

settings.register_profile(
    "certkit",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("certkit")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def read(relative: str) -> str:
    return (FIXTURES / relative).read_text()


@pytest.fixture(scope="session")
def university_tbox():
    return parse_rules(read("university/tbox.rules"))


@pytest.fixture(scope="session")
def university_query():
    return parse_query(read("university/query.q"))


@pytest.fixture(scope="session")
def university_rewriting():
    return parse_rewriting(read("university/rewriting.rules"))


@pytest.fixture(scope="session")
def university_redundant():
    return parse_rewriting(read("university/rewriting_redundant.rules"))


@pytest.fixture(scope="session")
def university_aboxes():
    return tuple(
        parse_abox(read(f"university/a{i}.abox")) for i in range(1, 7)
    )


@pytest.fixture(scope="session")
def two_chains_module():
    return parse_rewriting(read("two_chains/module.rules"))


@pytest.fixture(scope="session")
def two_chains_query():
    return parse_query(read("two_chains/query.q"))


@pytest.fixture(scope="session")
def interlocked_rewriting():
    return parse_rewriting(read("interlocked/rewriting.rules"))


@pytest.fixture(scope="session")
def interlocked_query():
    return parse_query(read("interlocked/query.q"))


@pytest.fixture(scope="session")
def hidden_rewriting():
    return parse_rewriting(read("hidden_subsumption/rewriting.rules"))


@pytest.fixture(scope="session")
def hidden_tbox():
    return parse_rules(read("hidden_subsumption/tbox.rules"))


@pytest.fixture(scope="session")
def chain_tbox():
    return parse_rules(read("chain/tbox.rules"))


@pytest.fixture(scope="session")
def chain_query():
    return parse_query(read("chain/query.q"))
