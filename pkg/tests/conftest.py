"""Shared fixtures: the worked instances from the motivating examples.

Tables are transcribed 1-indexed in the sources; everything here is 0-indexed
(agent a1 -> row 0, good g1 -> column 0).
"""
from __future__ import annotations

import numpy as np
import pytest

from fairhide import Allocation, Instance


@pytest.fixture(scope="session")
def intro_instance() -> Instance:
    """3 agents x 6 goods; admits both an EF allocation and a worst-case EF1 one."""
    return Instance.from_rows(
        [
            [1, 1, 4, 1, 1, 4],
            [1, 4, 1, 1, 4, 1],
            [4, 1, 1, 4, 1, 1],
        ]
    )


@pytest.fixture(scope="session")
def intro_circled() -> Allocation:
    """EF1 but pairwise-expensive: every ordered pair needs a different removal."""
    return Allocation(((0, 1), (2, 3), (4, 5)))


@pytest.fixture(scope="session")
def intro_underlined() -> Allocation:
    """The envy-free allocation of the same instance."""
    return Allocation(((2, 5), (1, 4), (0, 3)))


@pytest.fixture(scope="session")
def gap_instance() -> Instance:
    """5 agents x 6 goods separating HEF-2 from uHEF-2."""
    return Instance.from_rows(
        [
            [1, 1, 2, 0, 0, 0],
            [1, 1, 2, 0, 0, 0],
            [10, 10, 1, 1, 1, 1],
            [10, 10, 1, 1, 1, 1],
            [10, 10, 1, 1, 1, 1],
        ]
    )


@pytest.fixture(scope="session")
def gap_allocation() -> Allocation:
    """HEF-2 with hidden set {g1, g2}; no allocation of this instance is uHEF-2."""
    return Allocation(((0, 1), (2,), (3,), (4,), (5,)))


@pytest.fixture(scope="session")
def chain_instance() -> Instance:
    """5x5 chain: the Nash-optimal allocation must hide 4 goods, the optimum 1."""
    return Instance.from_rows(
        [
            [1, 0, 0, 0, 0],
            [10, 1, 0, 0, 0],
            [0, 10, 1, 0, 0],
            [0, 0, 10, 1, 0],
            [0, 0, 0, 10, 1],
        ]
    )


@pytest.fixture(scope="session")
def chain_diagonal() -> Allocation:
    """g_i to a_i: the unique Nash optimum of the chain instance."""
    return Allocation(((0,), (1,), (2,), (3,), (4,)))


@pytest.fixture(scope="session")
def chain_rotated() -> Allocation:
    """g5 to a1 and g_{i-1} to a_i: needs only g1 hidden."""
    return Allocation(((4,), (0,), (1,), (2,), (3,)))


def identical_scarce_instance(n: int) -> Instance:
    """n agents with identical positive values over n-1 goods: every allocation
    must hide all n-1 goods."""
    return Instance.from_rows([[1] * (n - 1)] * n)


def binary_group_instance(t: int) -> Instance:
    """2t+1 agents, 5t goods: t groups of 5 goods approved by their two group
    agents; one special agent approves everything. Admits an EF allocation, yet
    every canonical Nash-form allocation hides at least t-3 goods."""
    n = 2 * t + 1
    m = 5 * t
    vals = np.zeros((n, m), dtype=np.int64)
    for i in range(t):
        cols = range(5 * i, 5 * i + 5)
        for c in cols:
            vals[2 * i, c] = 1      # a_i
            vals[2 * i + 1, c] = 1  # b_i
    vals[2 * t, :] = 1              # special agent
    return Instance(vals)


def binary_group_ef_allocation(t: int) -> Allocation:
    """a_i gets goods 1-2 of its group, b_i gets 3-4, the special agent good 5."""
    bundles: list[tuple[int, ...]] = []
    for i in range(t):
        base = 5 * i
        bundles.append((base, base + 1))
        bundles.append((base + 2, base + 3))
    bundles.append(tuple(5 * i + 4 for i in range(t)))
    return Allocation(tuple(bundles))


def binary_group_nash_form(t: int) -> Allocation:
    """Canonical Nash-form: the special agent takes one good from each of the
    last three groups; groups 1..t-3 split 3/2 between their two agents."""
    bundles: list[tuple[int, ...]] = []
    special: list[int] = []
    for i in range(t):
        base = 5 * i
        if i < t - 3:
            bundles.append((base, base + 1, base + 2))
            bundles.append((base + 3, base + 4))
        else:
            bundles.append((base, base + 1))
            bundles.append((base + 2, base + 3))
            special.append(base + 4)
    bundles.append(tuple(special))
    return Allocation(tuple(bundles))
