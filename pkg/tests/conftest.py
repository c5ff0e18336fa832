import pytest

from expklms import Bernoulli, Gamma, Gaussian, InverseGaussian, Poisson

ALL_FAMILIES = [
    Bernoulli(),
    Poisson(M=10.0),
    Gaussian(sigma=1.5),
    Gamma(k=2.0, M=10.0),
    InverseGaussian(lam=3.0, M=5.0),
]

_acceptance_lines: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary."""

    def _report(criterion: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
        print(line)
        _acceptance_lines.append(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
