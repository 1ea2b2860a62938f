import pytest

from graphgen import FIXTURES
from poflow import compute_labels, parse_network

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def company_text():
    return (FIXTURES / "company.net").read_text()


@pytest.fixture(scope="session")
def company(company_text):
    return parse_network(company_text)


@pytest.fixture(scope="session")
def sales(company):
    return company.network("sales")


@pytest.fixture(scope="session")
def stats(company):
    return company.network("stats")


@pytest.fixture(scope="session")
def sales_table(sales):
    return compute_labels(sales)


@pytest.fixture(scope="session")
def stats_table(stats):
    return compute_labels(stats)


@pytest.fixture(scope="session")
def sales_policy_text():
    return (FIXTURES / "company_sales.policy").read_text()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
