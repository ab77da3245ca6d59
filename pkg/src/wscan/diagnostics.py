"""Null-distribution diagnostics: per-k density overlays and QQ plots.

W values are generated on the real genotypes under permuted phenotypes and
compared against the chi-squared_f reference implied by the hf table in
use. Each report writes machine-readable TSV data plus a static SVG panel
per k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np
from scipy import stats

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .data import GenotypeDataset
from .errors import InsufficientSamplesError
from .hf import HfTable, null_s_pools

log = logging.getLogger(__name__)

MIN_PANEL_SAMPLES = 100


@dataclass(frozen=True)
class NullWSamples:
    order: int
    samples: dict[int, np.ndarray]  # k -> W values under permuted phenotypes
    hf: HfTable

    @property
    def counts(self) -> dict[int, int]:
        return {k: int(v.size) for k, v in self.samples.items()}


def null_w_samples(
    dataset: GenotypeDataset,
    hf: HfTable,
    order: int,
    n_rep: int,
    n_sample: int,
    seed: int,
) -> NullWSamples:
    """W values from permuted-phenotype replicates, bucketed by k."""
    if hf.order != order:
        raise ValueError("hf table order does not match requested order")
    pools = null_s_pools(dataset, order, n_rep, n_sample, seed)
    samples = {}
    for k, s_values in pools.items():
        entry = hf.entries.get(k)
        if entry is None:
            continue
        samples[k] = entry[0] * s_values
    return NullWSamples(order, samples, hf)


def _eligible_panels(samples: NullWSamples) -> dict[int, np.ndarray]:
    eligible = {
        k: v for k, v in samples.samples.items() if v.size >= MIN_PANEL_SAMPLES
    }
    if not eligible:
        counts = samples.counts
        raise InsufficientSamplesError(
            f"no k bucket reaches {MIN_PANEL_SAMPLES} samples (counts: {counts})"
        )
    skipped = set(samples.samples) - set(eligible)
    if skipped:
        log.warning(
            "panels omitted for k=%s (fewer than %d samples)",
            sorted(skipped),
            MIN_PANEL_SAMPLES,
        )
    return eligible


def density_report(samples: NullWSamples, out_dir: str | Path) -> list[Path]:
    """Histogram-vs-expected-density TSV and SVG per k; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for k, w in sorted(_eligible_panels(samples).items()):
        _, f = samples.hf.entries[k]
        counts, edges = np.histogram(w, bins="fd", density=True)
        grid = np.linspace(0, max(edges[-1], stats.chi2.ppf(0.999, f)), 200)
        expected = stats.chi2.pdf(grid, f)
        tsv = out_dir / f"diag_density_k{k}.tsv"
        with open(tsv, "w") as fh:
            fh.write("section\tx_low\tx_high\tvalue\n")
            for i in range(len(counts)):
                fh.write(f"histogram\t{edges[i]:.6g}\t{edges[i+1]:.6g}\t{counts[i]:.6g}\n")
            for x, y in zip(grid, expected):
                fh.write(f"curve\t{x:.6g}\t{x:.6g}\t{y:.6g}\n")
        svg = out_dir / f"diag_density_k{k}.svg"
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.stairs(counts, edges, fill=True, alpha=0.5, label="observed")
        ax.plot(grid, expected, "r-", label=f"chi2(f={f:.3g})")
        ax.set_xlabel("W")
        ax.set_ylabel("density")
        ax.set_title(f"null W density, k={k} (n={w.size})")
        ax.legend()
        fig.savefig(svg)
        plt.close(fig)
        written += [tsv, svg]
    return written


def qq_report(samples: NullWSamples, out_dir: str | Path) -> list[Path]:
    """Observed-vs-theoretical quantile TSV and SVG per k; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for k, w in sorted(_eligible_panels(samples).items()):
        _, f = samples.hf.entries[k]
        obs = np.sort(w)
        probs = (np.arange(1, obs.size + 1) - 0.5) / obs.size
        theo = stats.chi2.ppf(probs, f)
        tsv = out_dir / f"diag_qq_k{k}.tsv"
        with open(tsv, "w") as fh:
            fh.write("theoretical\tobserved\n")
            for t, o in zip(theo, obs):
                fh.write(f"{t:.6g}\t{o:.6g}\n")
        svg = out_dir / f"diag_qq_k{k}.svg"
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        ax.plot(theo, obs, ".", ms=3)
        lim = max(theo[-1], obs[-1])
        ax.plot([0, lim], [0, lim], "k--", lw=1)
        ax.set_xlabel(f"chi2(f={f:.3g}) quantiles")
        ax.set_ylabel("observed W quantiles")
        ax.set_title(f"null W QQ, k={k} (n={w.size})")
        fig.savefig(svg)
        plt.close(fig)
        written += [tsv, svg]
    return written


def ks_distance(samples: NullWSamples, k: int) -> float:
    """KS distance between the k-bucket's empirical CDF and chi-squared_f."""
    w = samples.samples[k]
    _, f = samples.hf.entries[k]
    return float(stats.kstest(w, stats.chi2(f).cdf).statistic)


def qq_slope(samples: NullWSamples, k: int) -> float:
    """Least-squares slope (through the origin) of the k-bucket's QQ points."""
    w = np.sort(samples.samples[k])
    _, f = samples.hf.entries[k]
    probs = (np.arange(1, w.size + 1) - 0.5) / w.size
    theo = stats.chi2.ppf(probs, f)
    return float((theo @ w) / (theo @ theo))
