"""Synthetic null genotype datasets for calibration checks and benchmarks."""

from __future__ import annotations

import numpy as np

from .data import MISSING, GenotypeDataset


def simulate_null_dataset(
    n_subjects: int,
    n_markers: int,
    seed: int,
    maf_range: tuple[float, float] = (0.05, 0.5),
    case_fraction: float = 0.5,
    missing_rate: float = 0.0,
) -> GenotypeDataset:
    """Independent Hardy-Weinberg markers with a phenotype independent of them."""
    rng = np.random.default_rng(seed)
    maf = rng.uniform(*maf_range, size=n_markers)
    g = rng.binomial(2, maf[None, :], size=(n_subjects, n_markers)).astype(np.int8)
    if missing_rate > 0:
        g[rng.random((n_subjects, n_markers)) < missing_rate] = MISSING
    n_cases = max(1, min(n_subjects - 1, int(round(case_fraction * n_subjects))))
    phen = np.zeros(n_subjects, dtype=np.int8)
    phen[rng.choice(n_subjects, size=n_cases, replace=False)] = 1
    names = tuple(f"snp{i}" for i in range(n_markers))
    return GenotypeDataset(names, g, phen)
