import numpy as np
import pytest

from ofbank import FilterBank


def delta_bank(assignments, m: int, D: int) -> FilterBank:
    """Analysis bank whose channel i has ones exactly at assignments[i]."""
    taps = np.zeros((len(assignments), m))
    for i, idxs in enumerate(assignments):
        for t in idxs:
            taps[i, t] = 1.0
    return FilterBank.analysis(taps, D)


@pytest.fixture
def worked_row_bank() -> FilterBank:
    """6-channel, 3-fold, length-7 full-row-rank witness bank."""
    return delta_bank([[0], [6], [1], [4], [2], [5]], m=7, D=3)


@pytest.fixture
def worked_col_bank() -> FilterBank:
    """6-channel, 3-fold, length-13 column-rank witness bank (one channel
    doubly assigned)."""
    return delta_bank([[6], [12], [1], [7], [2], [0, 8]], m=13, D=3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)
