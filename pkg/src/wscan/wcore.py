"""The W statistic: per-cell log odds ratios, the raw sum S, and p-values.

W = h * sum_i (log_or_i / se_i)^2 is referred to a chi-squared distribution
with real-valued degrees of freedom f; (h, f) come from an HfTable keyed by
the number of non-empty categories k. Cells with a zero anywhere in their
2x2 margins get the Haldane correction (+0.5 to all four entries), so every
log odds ratio and standard error is finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import special

from .errors import ConfigurationError, UntestableMarkerError
from .tabulate import ContingencyTable

if TYPE_CHECKING:
    from .hf import HfTable


@dataclass(frozen=True)
class OddsCell:
    log_or: float
    se: float


@dataclass(frozen=True)
class WStatistic:
    w: float
    k: int
    h_used: float
    f_used: float
    p_value: float


def _corrected_margins(n1: int, N1: int, n0: int, N0: int) -> tuple[float, float, float, float]:
    a, b, c, d = float(n1), float(N1 - n1), float(n0), float(N0 - n0)
    if a == 0.0 or b == 0.0 or c == 0.0 or d == 0.0:
        a, b, c, d = a + 0.5, b + 0.5, c + 0.5, d + 0.5
    return a, b, c, d


def cell_log_odds(table: ContingencyTable) -> list[OddsCell]:
    """Log odds ratio and Woolf standard error per retained cell."""
    out = []
    for _, n1, n0 in table.cells:
        a, b, c, d = _corrected_margins(n1, table.N1, n0, table.N0)
        log_or = np.log(a) - np.log(b) - np.log(c) + np.log(d)
        se = np.sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d)
        out.append(OddsCell(float(log_or), float(se)))
    return out


def s_statistic(cells: list[OddsCell]) -> float:
    """Sum of squared standardized log odds ratios."""
    if not cells:
        raise ValueError("empty cell list")
    return float(sum((c.log_or / c.se) ** 2 for c in cells))


def chisq_sf(x, f):
    """Chi-squared survival function for real-valued degrees of freedom.

    Q(f/2, x/2), the regularized upper incomplete gamma; accepts scalars
    or arrays.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    if np.any(f <= 0):
        raise ValueError("degrees of freedom must be positive")
    out = special.gammaincc(f / 2.0, x / 2.0)
    return float(out) if out.ndim == 0 else out


def w_test(table: ContingencyTable, hf: "HfTable") -> WStatistic:
    """W statistic and p-value for a contingency table under the given hf."""
    k = table.k
    if k < 2:
        raise UntestableMarkerError("single non-empty category: no odds contrast")
    if table.N1 == 0 or table.N0 == 0:
        raise UntestableMarkerError("one phenotype group is empty after exclusion")
    try:
        h, f = hf.lookup(k)
    except KeyError:
        raise ConfigurationError(f"hf table has no entry for k={k}") from None
    s = s_statistic(cell_log_odds(table))
    w = h * s
    return WStatistic(w=w, k=k, h_used=h, f_used=f, p_value=chisq_sf(w, f))


def s_k_from_counts(n1: np.ndarray, n0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (S, k) over many tables given per-category count matrices.

    n1, n0: (T, C) integer arrays of case/control counts per category.
    Categories empty in both groups contribute nothing and do not count
    toward k. Tables where one group is entirely empty get k set to 0
    (untestable). Matches the scalar path to floating-point identity.
    """
    n1 = np.asarray(n1, dtype=np.float64)
    n0 = np.asarray(n0, dtype=np.float64)
    N1 = n1.sum(axis=1, keepdims=True)
    N0 = n0.sum(axis=1, keepdims=True)
    nonempty = (n1 + n0) > 0
    a = n1.copy()
    b = N1 - n1
    c = n0.copy()
    d = N0 - n0
    needs = (a == 0) | (b == 0) | (c == 0) | (d == 0)
    a += 0.5 * needs
    b += 0.5 * needs
    c += 0.5 * needs
    d += 0.5 * needs
    log_or = np.log(a) - np.log(b) - np.log(c) + np.log(d)
    se2 = 1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d
    contrib = np.where(nonempty, (log_or / np.sqrt(se2)) ** 2, 0.0)
    s = contrib.sum(axis=1)
    k = nonempty.sum(axis=1)
    k[(N1[:, 0] == 0) | (N0[:, 0] == 0)] = 0
    return s, k
