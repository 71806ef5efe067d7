"""Shared fixtures and the acceptance summary hook.

Acceptance tests register one line per criterion through the ``criterion``
fixture; the terminal summary prints them all so a run always ends with an
explicit PASS/FAIL line per criterion.
"""

from contextlib import contextmanager

import pytest

import curlflux as cf

_RESULTS = {}


class _CriterionRecorder:
    @contextmanager
    def __call__(self, ident, title):
        try:
            yield
        except BaseException:
            _RESULTS[ident] = (title, "FAIL")
            raise
        else:
            _RESULTS[ident] = (title, "PASS")


@pytest.fixture(scope="session")
def criterion():
    return _CriterionRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    def order(ident):
        digits = "".join(ch for ch in str(ident) if ch.isdigit())
        return (int(digits), str(ident))
    for ident in sorted(_RESULTS, key=order):
        title, status = _RESULTS[ident]
        terminalreporter.write_line(f"criterion {ident}: {status} - {title}")


@pytest.fixture(scope="session")
def ctx2():
    return cf.GroupContext(2)


@pytest.fixture(scope="session")
def ctx3():
    return cf.GroupContext(3)


@pytest.fixture(scope="session")
def shift_map(ctx2):
    """x -> xy, y -> y (letter codes: x=0, y=2)."""
    return cf.Endomorphism(ctx2, ((0, 2), (2,)), label="shift")


@pytest.fixture(scope="session")
def shift_map_inverse(ctx2):
    """x -> xy^-1, y -> y."""
    return cf.Endomorphism(ctx2, ((0, 3), (2,)), label="shift-inverse")


@pytest.fixture(scope="session")
def stab_map(ctx3):
    """x -> xy, y -> y, z -> z on rank 3."""
    return cf.Endomorphism(ctx3, ((0, 2), (2,), (4,)), label="stab")


@pytest.fixture(scope="session")
def double_shift_map(ctx2):
    """x -> xy^2, y -> y."""
    return cf.Endomorphism(ctx2, ((0, 2, 2), (2,)), label="double-shift")


@pytest.fixture(scope="session")
def fibonacci_map(ctx2):
    """x -> xy, y -> x."""
    return cf.Endomorphism(ctx2, ((0, 2), (0,)), label="fibonacci")


@pytest.fixture(scope="session")
def collapse_map(ctx2):
    """x -> xy, y -> 1 (not injective)."""
    return cf.Endomorphism(ctx2, ((0, 2), ()), label="collapse")
