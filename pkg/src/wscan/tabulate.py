"""Case/control contingency tables for single markers and marker pairs.

Two routes exist for pairs: a naive path over the genotype matrix and a
bitwise path over packed planes. They must agree exactly; the test suite
enforces this on randomized inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import MISSING, GenotypeDataset, PackedGenotypes
from .errors import DegenerateMarkerError


@dataclass(frozen=True)
class ContingencyTable:
    """Non-empty category cells (category_id, n1, n0), ordered by category_id."""

    cells: tuple[tuple[int, int, int], ...]
    N1: int  # cases counted after missing exclusion
    N0: int  # controls counted after missing exclusion

    def __post_init__(self):
        if sum(c[1] for c in self.cells) != self.N1:
            raise ValueError("case cell counts do not sum to N1")
        if sum(c[2] for c in self.cells) != self.N0:
            raise ValueError("control cell counts do not sum to N0")
        if any(c[1] + c[2] < 1 for c in self.cells):
            raise ValueError("empty cell retained")

    @property
    def k(self) -> int:
        return len(self.cells)


def _table_from_counts(n1: np.ndarray, n0: np.ndarray) -> ContingencyTable:
    """Build a table from per-category count vectors, dropping empty cells."""
    cells = tuple(
        (int(c), int(n1[c]), int(n0[c]))
        for c in range(len(n1))
        if n1[c] + n0[c] >= 1
    )
    return ContingencyTable(cells, int(n1.sum()), int(n0.sum()))


def tabulate_single(dataset: GenotypeDataset, marker: int) -> ContingencyTable:
    """Genotype-code table for one marker; missing subjects excluded."""
    g = dataset.genotypes[:, marker]
    valid = g != MISSING
    if not valid.any():
        raise DegenerateMarkerError(
            f"marker {dataset.marker_names[marker]!r} has no non-missing genotypes"
        )
    case = dataset.phenotype == 1
    n1 = np.bincount(g[valid & case], minlength=3)
    n0 = np.bincount(g[valid & ~case], minlength=3)
    return _table_from_counts(n1, n0)


def pair_category_codes(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Joint category 3*g1 + g2, or -1 where either marker is missing."""
    cat = 3 * g1.astype(np.int16) + g2
    cat[(g1 == MISSING) | (g2 == MISSING)] = -1
    return cat


def tabulate_pair(dataset: GenotypeDataset, m1: int, m2: int) -> ContingencyTable:
    """Joint-genotype table for a marker pair (naive reference path)."""
    if m1 == m2:
        raise ValueError("pair must consist of two distinct markers")
    cat = pair_category_codes(dataset.genotypes[:, m1], dataset.genotypes[:, m2])
    valid = cat >= 0
    if not valid.any():
        raise DegenerateMarkerError(
            f"pair ({dataset.marker_names[m1]!r}, {dataset.marker_names[m2]!r}) "
            "has no jointly observed genotypes"
        )
    case = dataset.phenotype == 1
    n1 = np.bincount(cat[valid & case], minlength=9)
    n0 = np.bincount(cat[valid & ~case], minlength=9)
    return _table_from_counts(n1, n0)


def pair_counts_packed(
    packed: PackedGenotypes, idx1: np.ndarray, idx2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Joint category counts for many pairs at once via AND + popcount.

    Returns (n1, n0), each (n_pairs, 9) int64 with columns ordered by
    category_id = 3*g1 + g2. Subjects missing either marker contribute to
    no plane intersection, so per-pair exclusion is implicit.
    """
    idx1 = np.atleast_1d(np.asarray(idx1))
    idx2 = np.atleast_1d(np.asarray(idx2))
    out = []
    for planes in (packed.case_planes, packed.ctrl_planes):
        a = planes[idx1][:, :3, None, :]  # (P, 3, 1, w)
        b = planes[idx2][:, None, :3, :]  # (P, 1, 3, w)
        counts = np.bitwise_count(a & b).sum(axis=-1, dtype=np.int64)
        out.append(counts.reshape(len(idx1), 9))
    return out[0], out[1]


def tabulate_pair_packed(packed: PackedGenotypes, m1: int, m2: int) -> ContingencyTable:
    """Bitwise fast path; bit-identical to tabulate_pair on the unpacked data."""
    if m1 == m2:
        raise ValueError("pair must consist of two distinct markers")
    n1, n0 = pair_counts_packed(packed, np.array([m1]), np.array([m2]))
    if n1.sum() + n0.sum() == 0:
        raise DegenerateMarkerError(
            f"pair ({packed.marker_names[m1]!r}, {packed.marker_names[m2]!r}) "
            "has no jointly observed genotypes"
        )
    return _table_from_counts(n1[0], n0[0])


def single_counts(
    genotypes: np.ndarray, phenotype: np.ndarray, chunk: int = 4096
) -> tuple[np.ndarray, np.ndarray]:
    """Per-marker per-code case/control counts, vectorized over markers.

    Returns (n1, n0), each (n_markers, 3) int64; missing entries are simply
    not counted.
    """
    case = phenotype == 1
    m = genotypes.shape[1]
    n1 = np.empty((m, 3), dtype=np.int64)
    n0 = np.empty((m, 3), dtype=np.int64)
    for start in range(0, m, chunk):
        block = genotypes[:, start : start + chunk]
        for code in range(3):
            mask = block == code
            n1[start : start + block.shape[1], code] = mask[case].sum(axis=0)
            n0[start : start + block.shape[1], code] = mask[~case].sum(axis=0)
    return n1, n0
