import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

CODES_DIR = Path(__file__).resolve().parent.parent / "codes"

# The three 3x3 merging examples used throughout the scheduling tests.
MERGE_EXAMPLE_FULL = [[1, 0, -1], [2, 1, 1], [0, 2, 0]]
MERGE_EXAMPLE_TOP_PAIR = [[1, -1, -1], [-1, 2, 1], [2, 0, 0]]
MERGE_EXAMPLE_OUTER_PAIR = [[1, -1, -1], [2, 0, 0], [-1, 2, 1]]


@pytest.fixture
def codes_dir():
    return CODES_DIR


def random_base_matrix(rng, max_rows=6, max_cols=12, max_z=16):
    """Random valid shift grid: every row non-empty, square or wider."""
    n_rows = int(rng.integers(1, max_rows + 1))
    n_cols = int(rng.integers(n_rows, max_cols + 1))
    z = int(rng.integers(1, max_z + 1))
    shifts = np.full((n_rows, n_cols), -1, dtype=np.int64)
    for i in range(n_rows):
        degree = int(rng.integers(1, n_cols + 1))
        cols = rng.choice(n_cols, size=degree, replace=False)
        shifts[i, cols] = rng.integers(0, z, size=degree)
    return shifts.tolist(), z
