"""Main-effect and pairwise W-test scans with stage-wise filtering.

The pairwise scan runs in two stages: markers are first screened by their
main-effect p-value (input_pval threshold, inclusive, or the input_poolsize
smallest), then all surviving pairs are tested over the packed bitplane
representation. Output is deterministic for any thread count: pairs are
enumerated in canonical i<j order, chunked contiguously, and globally
sorted after the merge.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import GenotypeDataset, pack
from .hf import HfTable
from .tabulate import pair_counts_packed, single_counts
from .wcore import chisq_sf, s_k_from_counts

log = logging.getLogger(__name__)

_PAIR_CHUNK = 8192


@dataclass(frozen=True)
class ScanConfig:
    order: int = 1
    input_pval: float | None = None
    input_poolsize: int | None = None
    output_pval: float | None = None
    threads: int = 1

    def __post_init__(self):
        for name in ("input_pval", "output_pval"):
            v = getattr(self, name)
            if v is not None and not (0 <= v <= 1):
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.input_pval is not None and self.input_poolsize is not None:
            warnings.warn(
                "both input_pval and input_poolsize given; input_pval wins",
                stacklevel=2,
            )


@dataclass(frozen=True)
class AssociationResult:
    marker1: str
    marker2: str | None
    w: float
    k: int
    p_value: float
    marker1_main_p: float | None = None
    marker2_main_p: float | None = None


def _sort_results(results: list[AssociationResult]) -> list[AssociationResult]:
    return sorted(results, key=lambda r: (r.p_value, r.marker1, r.marker2 or ""))


def _main_effect_stats(dataset: GenotypeDataset, hf: HfTable):
    """Vectorized per-marker (w, k, p); p is NaN for untestable markers."""
    n1, n0 = single_counts(dataset.genotypes, dataset.phenotype)
    s, k = s_k_from_counts(n1, n0)
    h = np.full(dataset.n_markers, np.nan)
    f = np.full(dataset.n_markers, np.nan)
    for kv, (hv, fv) in hf.entries.items():
        sel = k == kv
        h[sel] = hv
        f[sel] = fv
    testable = (k >= 2) & np.isfinite(h)
    w = np.where(testable, h * s, np.nan)
    p = np.full(dataset.n_markers, np.nan)
    if testable.any():
        p[testable] = chisq_sf(w[testable], f[testable])
    return w, k, p, testable


def scan_main(
    dataset: GenotypeDataset, hf: HfTable, config: ScanConfig | None = None
) -> list[AssociationResult]:
    """One W-test per testable marker, sorted by p-value."""
    if hf.order != 1:
        raise ValueError("scan_main requires an order-1 hf table")
    config = config or ScanConfig(order=1)
    w, k, p, testable = _main_effect_stats(dataset, hf)
    n_skipped = int((~testable).sum())
    if n_skipped:
        log.warning("%d untestable marker(s) excluded from the scan", n_skipped)
    results = [
        AssociationResult(dataset.marker_names[i], None, float(w[i]), int(k[i]), float(p[i]))
        for i in np.flatnonzero(testable)
    ]
    if config.output_pval is not None:
        results = [r for r in results if r.p_value <= config.output_pval]
    if not results:
        log.warning("main-effect scan produced no results")
    return _sort_results(results)


def _pair_chunk_stats(packed, idx1, idx2, hf_pair):
    n1, n0 = pair_counts_packed(packed, idx1, idx2)
    s, k = s_k_from_counts(n1, n0)
    out = []
    for t in range(len(idx1)):
        kv = int(k[t])
        if kv < 2:
            continue
        entry = hf_pair.entries.get(kv)
        if entry is None:
            continue
        h, f = entry
        w = h * s[t]
        out.append((int(idx1[t]), int(idx2[t]), w, kv, float(chisq_sf(w, f))))
    return out


def scan_pairs(
    dataset: GenotypeDataset,
    hf_main: HfTable,
    hf_pair: HfTable,
    config: ScanConfig | None = None,
) -> list[AssociationResult]:
    """Stage-wise pairwise scan; attaches both marginal main-effect p-values."""
    if hf_main.order != 1 or hf_pair.order != 2:
        raise ValueError("scan_pairs requires order-1 and order-2 hf tables")
    config = config or ScanConfig(order=2)
    _, _, main_p, testable = _main_effect_stats(dataset, hf_main)

    candidates = np.flatnonzero(testable)
    if config.input_pval is not None:
        retained = candidates[main_p[candidates] <= config.input_pval]
    elif config.input_poolsize is not None:
        order_key = sorted(
            candidates, key=lambda i: (main_p[i], dataset.marker_names[i])
        )
        retained = np.array(sorted(order_key[: config.input_poolsize]), dtype=np.int64)
    else:
        retained = candidates
    if len(retained) < 2:
        log.warning("fewer than 2 markers retained; no pairs to test")
        return []

    packed = pack(dataset)
    ii, jj = np.triu_indices(len(retained), k=1)
    idx1 = retained[ii]
    idx2 = retained[jj]
    chunks = [
        (idx1[s : s + _PAIR_CHUNK], idx2[s : s + _PAIR_CHUNK])
        for s in range(0, len(idx1), _PAIR_CHUNK)
    ]
    if config.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            parts = list(
                pool.map(lambda c: _pair_chunk_stats(packed, c[0], c[1], hf_pair), chunks)
            )
    else:
        parts = [_pair_chunk_stats(packed, c1, c2, hf_pair) for c1, c2 in chunks]

    results = []
    for part in parts:
        for i, j, w, kv, p in part:
            if config.output_pval is not None and p > config.output_pval:
                continue
            results.append(
                AssociationResult(
                    marker1=dataset.marker_names[i],
                    marker2=dataset.marker_names[j],
                    w=float(w),
                    k=kv,
                    p_value=p,
                    marker1_main_p=float(main_p[i]),
                    marker2_main_p=float(main_p[j]),
                )
            )
    if not results:
        log.warning("pairwise scan produced no results")
    return _sort_results(results)


def _fmt_p(p: float) -> str:
    return f"{p:.2e}"


def write_results(
    results: list[AssociationResult], path: str | Path, order: int = 2
) -> None:
    """Write a ranked results TSV; p-values in 3-significant-digit scientific."""
    with open(path, "w") as fh:
        if order == 1:
            fh.write("rank\tmarker1\tw\tk\tpval\n")
            for rank, r in enumerate(results, start=1):
                fh.write(f"{rank}\t{r.marker1}\t{r.w:.6g}\t{r.k}\t{_fmt_p(r.p_value)}\n")
        else:
            fh.write("rank\tmarker1\tmarker2\tw\tk\tpair_pval\tmarker1_pval\tmarker2_pval\n")
            for rank, r in enumerate(results, start=1):
                fh.write(
                    f"{rank}\t{r.marker1}\t{r.marker2}\t{r.w:.6g}\t{r.k}\t"
                    f"{_fmt_p(r.p_value)}\t{_fmt_p(r.marker1_main_p)}\t{_fmt_p(r.marker2_main_p)}\n"
                )
