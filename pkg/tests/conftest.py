import pytest

from lobachevsky import _kernels_py, kernels

try:
    from lobachevsky import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = ["python", "cython"]


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel implementation."""
    if request.param == "cython":
        if _compiled is None:
            pytest.skip("compiled kernels not built")
        monkeypatch.setattr(kernels, "_impl", _compiled)
    else:
        monkeypatch.setattr(kernels, "_impl", _kernels_py)
    return request.param


# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
