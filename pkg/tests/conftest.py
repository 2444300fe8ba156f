import pytest

from uav_o2i.scenario_io import make_scenario

TABLE_ONE = [(z_b, x_b) for z_b in (200.0, 250.0, 300.0) for x_b in (10.0, 20.0, 50.0)]

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def table_one_scenarios():
    return {key: make_scenario(*key) for key in TABLE_ONE}


@pytest.fixture
def acceptance_log():
    def record(criterion: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f"  ({detail})" if detail else "")
        _acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
