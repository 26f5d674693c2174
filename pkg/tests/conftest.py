import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stgq.classical import build_h3, build_w
from stgq.gq import verify_gq
from stgq.grp import heisenberg
from stgq.kantor import (
    classical_w_family,
    coset_geometry,
    search_kantor_families,
    suzuki_tits_family,
    verify_stgq_family,
)


class Elation:
    """A family with its coset geometry and left action."""

    def __init__(self, K):
        assert verify_stgq_family(K)
        self.K = K
        self.geom, self.action = coset_geometry(K)
        assert verify_gq(self.geom)


@pytest.fixture(scope="session")
def w3():
    return build_w(3)


@pytest.fixture(scope="session")
def h34():
    return build_h3(2)


@pytest.fixture(scope="session")
def wfam3():
    return Elation(classical_w_family(3))


@pytest.fixture(scope="session")
def hfam():
    return Elation(search_kantor_families(heisenberg(2, 2), 4, 2)[0])


@pytest.fixture(scope="session")
def st2():
    return Elation(suzuki_tits_family(2))


@pytest.fixture(scope="session")
def st8():
    K = suzuki_tits_family(8)
    assert verify_stgq_family(K)
    return K


# ---------------------------------------------------------------- acceptance summary

_ACCEPT: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("acceptance")
    if m is None or call.when != "call":
        return
    num, title = m.args
    ok = call.excinfo is None
    _ACCEPT[num] = ("PASS" if ok else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPT:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPT):
        verdict, title = _ACCEPT[num]
        terminalreporter.write_line(f"{verdict} criterion {num}: {title}")
