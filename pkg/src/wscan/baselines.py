"""Reference association tests and the benchmark harness.

Pearson chi-squared on the k x 2 table and a logistic regression with a
product interaction term serve both as correctness cross-checks and as
timing competitors for the pairwise scan.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import GenotypeDataset, MISSING
from .hf import HfTable, default_hf
from .scan import ScanConfig, scan_pairs
from .tabulate import ContingencyTable, tabulate_pair
from .wcore import chisq_sf

MAX_IRLS_ITER = 25
IRLS_TOL = 1e-8


def chisq_association(table: ContingencyTable) -> float:
    """Pearson chi-squared p-value on the k x 2 case/control table.

    Categories whose expected count falls below 1 are pooled into the
    nearest (by category_id) retained neighbor before testing.
    """
    if table.k < 2:
        raise ValueError("chi-squared test needs at least 2 categories")
    cats = [c[0] for c in table.cells]
    obs = np.array([[c[1], c[2]] for c in table.cells], dtype=float)
    N = obs.sum()
    while True:
        row = obs.sum(axis=1)
        col = obs.sum(axis=0)
        exp = np.outer(row, col) / N
        small = np.flatnonzero(exp.min(axis=1) < 1.0)
        if small.size == 0 or obs.shape[0] <= 2:
            break
        # pool the sparsest row into its nearest neighbor by category id
        r = small[np.argmin(exp[small].min(axis=1))]
        others = [t for t in range(obs.shape[0]) if t != r]
        nearest = min(others, key=lambda t: abs(cats[t] - cats[r]))
        obs[nearest] += obs[r]
        obs = np.delete(obs, r, axis=0)
        del cats[r]
    stat = float(((obs - exp) ** 2 / exp).sum())
    df = obs.shape[0] - 1
    return chisq_sf(stat, df)


def _irls_fit(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float, bool]:
    """Logistic fit by iteratively reweighted least squares.

    Returns (coef, deviance, converged); converged is False on separation
    (diverging coefficients) or singular designs.
    """
    beta = np.zeros(X.shape[1])
    for _ in range(MAX_IRLS_ITER):
        eta = X @ beta
        mu = 1.0 / (1.0 + np.exp(-eta))
        w = mu * (1.0 - mu)
        if not np.all(np.isfinite(w)) or w.max() < 1e-12:
            return beta, np.nan, False
        z = eta + (y - mu) / np.maximum(w, 1e-12)
        wx = X * w[:, None]
        try:
            new = np.linalg.solve(X.T @ wx, wx.T @ z)
        except np.linalg.LinAlgError:
            return beta, np.nan, False
        step = np.max(np.abs(new - beta))
        beta = new
        if np.max(np.abs(beta)) > 30.0:
            return beta, np.nan, False
        if step < IRLS_TOL:
            eta = X @ beta
            mu = 1.0 / (1.0 + np.exp(-eta))
            eps = 1e-12
            dev = -2.0 * float(
                np.sum(y * np.log(mu + eps) + (1 - y) * np.log(1 - mu + eps))
            )
            return beta, dev, True
    return beta, np.nan, False


def logistic_interaction_p(dataset: GenotypeDataset, m1: int, m2: int) -> float | None:
    """Likelihood-ratio p-value for the g1*g2 term in an additive logit model.

    Returns None when the fit does not converge (e.g. separation).
    """
    g1 = dataset.genotypes[:, m1].astype(float)
    g2 = dataset.genotypes[:, m2].astype(float)
    keep = (dataset.genotypes[:, m1] != MISSING) & (dataset.genotypes[:, m2] != MISSING)
    g1, g2 = g1[keep], g2[keep]
    y = (dataset.phenotype[keep] == 1).astype(float)
    if y.size == 0 or y.min() == y.max():
        return None
    ones = np.ones_like(g1)
    X_full = np.column_stack([ones, g1, g2, g1 * g2])
    X_red = X_full[:, :3]
    _, dev_full, ok_full = _irls_fit(X_full, y)
    _, dev_red, ok_red = _irls_fit(X_red, y)
    if not (ok_full and ok_red):
        return None
    lr = max(dev_red - dev_full, 0.0)
    return chisq_sf(lr, 1)


@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    n_tests: int
    seconds: float

    @property
    def tests_per_second(self) -> float:
        return self.n_tests / self.seconds if self.seconds > 0 else float("inf")


@dataclass(frozen=True)
class BenchmarkReport:
    n_subjects: int
    n_markers: int
    rows: tuple[BenchmarkRow, ...]


_KNOWN_METHODS = ("wtest", "chisq", "logistic")


def run_benchmark(
    dataset: GenotypeDataset,
    methods: list[str],
    hf_pair: HfTable | None = None,
) -> BenchmarkReport:
    """Time each method over the identical exhaustive pair set."""
    if not methods:
        raise ValueError("at least one method required")
    for m in methods:
        if m not in _KNOWN_METHODS:
            raise ValueError(f"unknown method {m!r}")
    hf_pair = hf_pair or default_hf(2)
    m = dataset.n_markers
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    rows = []
    for method in methods:
        t0 = time.perf_counter()
        if method == "wtest":
            cfg = ScanConfig(order=2, input_pval=None, threads=1)
            scan_pairs(dataset, default_hf(1), hf_pair, cfg)
        elif method == "chisq":
            for i, j in pairs:
                try:
                    chisq_association(tabulate_pair(dataset, i, j))
                except Exception:
                    pass
        else:
            for i, j in pairs:
                logistic_interaction_p(dataset, i, j)
        rows.append(BenchmarkRow(method, len(pairs), time.perf_counter() - t0))
    return BenchmarkReport(dataset.n_subjects, dataset.n_markers, tuple(rows))


def write_benchmark(report: BenchmarkReport, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write("method\tn_tests\tseconds\ttests_per_second\n")
        for r in report.rows:
            fh.write(f"{r.method}\t{r.n_tests}\t{r.seconds:.4f}\t{r.tests_per_second:.1f}\n")
