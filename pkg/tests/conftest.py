import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wscan.data import MISSING, GenotypeDataset

# 8-subject fixture used across modules: phenotype [1,1,1,1,0,0,0,0],
# marker A [0,0,1,2,0,1,1,2], marker B [2,2,1,0,0,0,1,1]
D0_A = [0, 0, 1, 2, 0, 1, 1, 2]
D0_B = [2, 2, 1, 0, 0, 0, 1, 1]
D0_PHEN = [1, 1, 1, 1, 0, 0, 0, 0]


@pytest.fixture
def d0() -> GenotypeDataset:
    g = np.array(list(zip(D0_A, D0_B)), dtype=np.int8)
    return GenotypeDataset(("A", "B"), g, np.array(D0_PHEN, dtype=np.int8))


def random_dataset(
    rng: np.random.Generator,
    n_subjects: int | None = None,
    n_markers: int | None = None,
    missing_rate: float = 0.05,
) -> GenotypeDataset:
    """Small random dataset with missingness; guaranteed both phenotype classes."""
    n = n_subjects or int(rng.integers(4, 40))
    m = n_markers or int(rng.integers(1, 8))
    g = rng.integers(0, 3, size=(n, m)).astype(np.int8)
    g[rng.random((n, m)) < missing_rate] = MISSING
    phen = np.zeros(n, dtype=np.int8)
    n_case = int(rng.integers(1, n))
    phen[rng.choice(n, size=n_case, replace=False)] = 1
    names = tuple(f"m{i}" for i in range(m))
    return GenotypeDataset(names, g, phen)
