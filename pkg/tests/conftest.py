import itertools

import mpmath
import pytest

ALPHAS = (0.5, 1.0, 2.0, 5.0)
BETAS = (0.5, 1.0, 3.0)
LAMBDAS = (0.1, 1.0, 5.0, 20.0)
GRID = tuple(itertools.product(ALPHAS, BETAS, LAMBDAS))

_ACCEPTANCE_LINES: list[str] = []


def mp_expectation(p, weight):
    """E weight(xi) by extended-precision quadrature in y = beta x."""
    a, b, lam = (mpmath.mpf(v) for v in (p.alpha, p.beta, p.lam))
    with mpmath.workdps(30):
        c = a * lam / -mpmath.expm1(-lam)

        def g(y):
            w = -mpmath.expm1(-y)
            return c * mpmath.exp(-y) * w ** (a - 1) * mpmath.exp(-lam * w ** a) * weight(y / b)

        return mpmath.quad(g, [0, mpmath.mpf(1) / 64, 1, 8, 40, mpmath.inf])


@pytest.fixture
def acceptance_line():
    """Record one PASS/FAIL line; they are echoed in the terminal summary."""

    def record(number: int, title: str, passed: bool, detail: str):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number:2d}  {title}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
