import pytest

from cftspan.graph import from_edge_list

import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance_log.LINES):
        terminalreporter.write_line(acceptance_log.LINES[n])


@pytest.fixture
def path3():
    return from_edge_list("ecft", 3, [(0, 1, 1.0, 0), (1, 2, 2.0, 1)])


@pytest.fixture
def k6_distinct():
    edges = []
    for u in range(6):
        for v in range(u + 1, 6):
            edges.append((u, v, 1.0, len(edges)))
    return from_edge_list("ecft", 6, edges)
