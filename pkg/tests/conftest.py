import sys
from pathlib import Path

import numpy as np
import pytest

from icsec.gf import GF
from icsec.icsi import IcsiInstance, load_instance
from icsec.indexcode import IndexCode, load_code
from icsec.matlin import MatGF

FIXTURES = Path(__file__).parent / "fixtures"

# side information of the seven-receiver example, 1-based
HAMMING7_SIDE = [{6, 7}, {5, 7}, {5, 6}, {5, 6, 7}, {1, 2, 6}, {1, 3, 4}, {2, 3, 6}]


def hamming7_matrix() -> MatGF:
    """Columns ``u^(i) + e_i`` for the first four receivers."""
    cols = []
    for i in range(4):
        c = [0] * 7
        c[i] = 1
        for j in HAMMING7_SIDE[i]:
            c[j - 1] = 1
        cols.append(c)
    return MatGF(GF(2), np.array(cols).T)


def complete_side_instance(q: int, n: int = 4) -> IcsiInstance:
    return IcsiInstance(GF(q), n, tuple(frozenset(set(range(n)) - {i}) for i in range(n)), tuple(range(n)))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def h7_inst() -> IcsiInstance:
    return load_instance(FIXTURES / "hamming7.json")


@pytest.fixture
def h7_L() -> MatGF:
    return hamming7_matrix()


@pytest.fixture
def h7_code(h7_inst, h7_L) -> IndexCode:
    return IndexCode(h7_inst, h7_L)


@pytest.fixture
def c4_inst() -> IcsiInstance:
    return load_instance(FIXTURES / "complete4.json")


@pytest.fixture
def c4_code(c4_inst) -> IndexCode:
    return IndexCode(c4_inst, load_code(FIXTURES / "complete4_code.json").L)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
    terminalreporter.write_line("excluded results: none")
