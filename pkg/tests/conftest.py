from __future__ import annotations

from pathlib import Path

import pytest

from boxtensor import FiniteGroup, make_action_system

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"

IDENT4 = (0, 1, 2, 3)


def equal_v4_system(perm, labels=None):
    """Action system on the Klein group where all four actions share one family."""
    table = [[i ^ j for j in range(4)] for i in range(4)]
    V = FiniteGroup(table, labels=labels or ["e", "a", "b", "ab"])
    fam = (IDENT4, tuple(perm), tuple(perm), IDENT4)
    return make_action_system(V, V, fam, fam, fam, fam)


@pytest.fixture(scope="session")
def psi_ab():
    return equal_v4_system((0, 2, 1, 3))


@pytest.fixture(scope="session")
def psi_b():
    return equal_v4_system((0, 3, 2, 1))


@pytest.fixture(scope="session")
def psi_a():
    return equal_v4_system((0, 3, 2, 1), labels=["e", "b", "a", "ab"])


@pytest.fixture(scope="session")
def fixtures_dir():
    assert FIXTURES.is_dir()
    return FIXTURES
