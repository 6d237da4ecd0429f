import pytest

from cloudcover import ContractSpec


@pytest.fixture
def consumer_1y():
    return ContractSpec.with_rate(1.0, 0.438, 0.0663, 12, 0.002)


@pytest.fixture
def business_5y():
    return ContractSpec.with_rate(1.0, 0.438, 0.145, 60, 0.0099)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one acceptance line: ``report(label, ok, detail)``."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _record(label, ok, detail):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
