import pytest

from toeplitz_spectra.symbols import builtin


@pytest.fixture
def kms():
    return builtin("kms")


@pytest.fixture
def laplace():
    return builtin("laplace")


@pytest.fixture
def exp_cos():
    return builtin("exp_cos")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines):
            terminalreporter.write_line(line)
