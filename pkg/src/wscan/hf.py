"""Calibration of the W statistic's null distribution.

For each category count k, the pair (h, f) is chosen so that h*S matches a
chi-squared with f degrees of freedom in its first two moments, where the S
values come from bootstrapped marker draws under permuted phenotypes
(Satterthwaite-style matching: h = 2m/v, f = 2m^2/v from the pooled sample
mean m and variance v). Large-sample defaults h = (k-1)/k, f = k-1 are used
when estimation is skipped or a k has too few pooled values.
"""

from __future__ import annotations


from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import GenotypeDataset
from .errors import EstimationError
from .tabulate import single_counts
from .wcore import s_k_from_counts

MIN_POOL_SIZE = 30  # below this, per-k moments are too noisy to trust

_U64 = (1 << 64) - 1


def k_range(order: int) -> range:
    """Reachable category counts: 2..3 for single markers, 2..9 for pairs."""
    if order == 1:
        return range(2, 4)
    if order == 2:
        return range(2, 10)
    raise ValueError(f"order must be 1 or 2, got {order}")


@dataclass(frozen=True)
class HfTable:
    """Map from k to the (h, f) pair calibrating the W null distribution."""

    order: int
    entries: dict[int, tuple[float, float]]
    provenance: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for k, (h, f) in self.entries.items():
            if h <= 0 or f <= 0:
                raise ValueError(f"non-positive h or f for k={k}")

    def lookup(self, k: int) -> tuple[float, float]:
        return self.entries[k]


def default_hf(order: int) -> HfTable:
    """Large-sample defaults: h = (k-1)/k, f = k-1 for every reachable k."""
    entries = {k: ((k - 1) / k, float(k - 1)) for k in k_range(order)}
    return HfTable(order, entries, {k: "default" for k in entries})


def moment_match(values: np.ndarray) -> tuple[float, float]:
    """Fit (h, f) so h*S has the mean and variance of a chi-squared_f.

    Uses the sample mean m and unbiased variance v: h = 2m/v, f = 2m^2/v.
    Raises if the variance is zero.
    """
    values = np.asarray(values, dtype=float)
    m = float(values.mean())
    v = float(values.var(ddof=1))
    if v <= 0:
        raise EstimationError("zero variance in pooled null statistics")
    return 2.0 * m / v, 2.0 * m * m / v


def _replicate_rng(seed: int, b: int) -> np.random.Generator:
    # counter-based generator keyed by (seed, replicate) for scheduling-free
    # determinism
    return np.random.Generator(np.random.Philox(key=np.array([seed & _U64, b], dtype=np.uint64)))


def _pair_offsets(m: int) -> np.ndarray:
    i = np.arange(m, dtype=np.int64)
    return i * m - i * (i + 1) // 2  # pairs preceding row i in i<j order


def pair_from_linear(idx: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Decode linear indices over {(i, j): i < j} in lexicographic order."""
    offsets = _pair_offsets(m)
    i = np.searchsorted(offsets, idx, side="right") - 1
    j = idx - offsets[i] + i + 1
    return i, j


def _replicate_s_values(
    dataset: GenotypeDataset, order: int, n_sample: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One permuted-phenotype replicate: (S, k) for n_sample random draws."""
    phen = dataset.phenotype[rng.permutation(dataset.n_subjects)]
    case = phen == 1
    g = dataset.genotypes
    if order == 1:
        m = dataset.n_markers
        draws = rng.choice(m, size=n_sample, replace=m < n_sample)
        sub = g[:, draws]
        codes = range(3)
    else:
        n_pairs = dataset.n_markers * (dataset.n_markers - 1) // 2
        picks = rng.choice(n_pairs, size=n_sample, replace=n_pairs < n_sample)
        i, j = pair_from_linear(np.asarray(picks), dataset.n_markers)
        g1 = g[:, i]
        g2 = g[:, j]
        sub = np.where((g1 >= 0) & (g2 >= 0), 3 * g1.astype(np.int16) + g2, -1)
        codes = range(9)
    sub_case = sub[case]
    sub_ctrl = sub[~case]
    n1 = np.stack([(sub_case == c).sum(axis=0) for c in codes], axis=1)
    n0 = np.stack([(sub_ctrl == c).sum(axis=0) for c in codes], axis=1)
    return s_k_from_counts(n1, n0)


def null_s_pools(
    dataset: GenotypeDataset,
    order: int,
    B: int,
    n_sample: int,
    seed: int,
) -> dict[int, np.ndarray]:
    """Pool null S values by k across B permuted-phenotype replicates."""
    if B < 1 or n_sample < 1:
        raise ValueError("B and n_sample must be positive")
    n1, n0 = single_counts(dataset.genotypes, dataset.phenotype)
    _, k_single = s_k_from_counts(n1, n0)
    n_testable = int((k_single >= 2).sum())
    if n_testable < order:
        raise EstimationError("dataset has no testable markers")
    pools: dict[int, list[np.ndarray]] = defaultdict(list)
    for b in range(B):
        s, k = _replicate_s_values(dataset, order, n_sample, _replicate_rng(seed, b))
        for kv in np.unique(k):
            if kv >= 2:
                pools[int(kv)].append(s[k == kv])
    return {kv: np.concatenate(parts) for kv, parts in sorted(pools.items())}


def estimate_hf(
    dataset: GenotypeDataset,
    order: int,
    B: int,
    n_sample: int,
    seed: int,
) -> HfTable:
    """Estimate (h, f) per k from bootstrapped draws with permuted phenotypes.

    k values with fewer than MIN_POOL_SIZE pooled values, or zero pooled
    variance, fall back to the defaults and are flagged in provenance.
    """
    pools = null_s_pools(dataset, order, B, n_sample, seed)
    defaults = default_hf(order)
    tag = f"estimated(B={B},n_sample={n_sample},seed={seed})"
    entries: dict[int, tuple[float, float]] = {}
    provenance: dict[int, str] = {}
    for k in k_range(order):
        pooled = pools.get(k)
        if pooled is not None and pooled.size >= MIN_POOL_SIZE:
            try:
                entries[k] = moment_match(pooled)
                provenance[k] = tag
                continue
            except EstimationError:
                pass
        entries[k] = defaults.entries[k]
        provenance[k] = "default(fallback)"
    return HfTable(order, entries, provenance)


@dataclass(frozen=True)
class ConvergenceRow:
    B: int
    k: int
    mean_f: float
    sd_f: float | None


def hf_convergence_report(
    dataset: GenotypeDataset,
    order: int,
    B_grid: list[int],
    seeds: list[int],
    n_sample: int = 1000,
) -> list[ConvergenceRow]:
    """Dispersion of the estimated f across seeds for each bootstrap size B."""
    if not B_grid or not seeds:
        raise ValueError("B_grid and seeds must be nonempty")
    rows = []
    for B in B_grid:
        per_seed: dict[int, list[float]] = defaultdict(list)
        for seed in seeds:
            hf = estimate_hf(dataset, order, B, n_sample, seed)
            for k, (_, f) in hf.entries.items():
                if hf.provenance[k].startswith("estimated"):
                    per_seed[k].append(f)
        for k in sorted(per_seed):
            fs = per_seed[k]
            sd = float(np.std(fs, ddof=1)) if len(fs) > 1 else None
            rows.append(ConvergenceRow(B, k, float(np.mean(fs)), sd))
    return rows


def write_hf_tables(tables: list[HfTable] | HfTable, path: str | Path) -> None:
    """Serialize one or more HfTables as TSV (order, k, h, f, provenance)."""
    if isinstance(tables, HfTable):
        tables = [tables]
    with open(path, "w") as fh:
        fh.write("order\tk\th\tf\tprovenance\n")
        for t in tables:
            for k in sorted(t.entries):
                h, f = t.entries[k]
                prov = t.provenance.get(k, "")
                fh.write(f"{t.order}\t{k}\t{h!r}\t{f!r}\t{prov}\n")


def read_hf_tables(path: str | Path) -> dict[int, HfTable]:
    """Read the TSV written by write_hf_tables; returns tables keyed by order."""
    entries: dict[int, dict[int, tuple[float, float]]] = defaultdict(dict)
    provenance: dict[int, dict[int, str]] = defaultdict(dict)
    with open(path) as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[:4] != ["order", "k", "h", "f"]:
            raise ValueError(f"unexpected hf table header in {path}")
        for line in fh:
            if not line.strip():
                continue
            order_s, k_s, h_s, f_s, *rest = line.rstrip("\n").split("\t")
            order, k = int(order_s), int(k_s)
            entries[order][k] = (float(h_s), float(f_s))
            provenance[order][k] = rest[0] if rest else ""
    return {
        order: HfTable(order, entries[order], provenance[order]) for order in entries
    }
