"""Independent straight-line reimplementation used as a test oracle.

Deliberately naive: plain-Python loops, dict-based tables, and mpmath for
the chi-squared tail, sharing no code with the package under test.
"""

import math

import mpmath

mpmath.mp.dps = 40


def chisq_sf_oracle(x: float, f: float) -> float:
    """High-precision chi-squared survival function via mpmath."""
    return float(mpmath.gammainc(f / 2, a=x / 2, regularized=True))


def table_oracle(genotypes, phenotype, markers):
    """Contingency counts for one marker or a pair, as {category: [n1, n0]}.

    genotypes: list of per-subject lists; phenotype: list of 0/1;
    markers: tuple of one or two column indices. Missing is any negative code.
    """
    counts = {}
    for row, y in zip(genotypes, phenotype):
        gs = [row[m] for m in markers]
        if any(g < 0 for g in gs):
            continue
        cat = gs[0] if len(gs) == 1 else 3 * gs[0] + gs[1]
        if cat not in counts:
            counts[cat] = [0, 0]
        counts[cat][0 if y == 1 else 1] += 1
    return counts


def w_oracle(counts, h, f):
    """(S, W, p) recomputed from scratch from a counts dict."""
    N1 = sum(v[0] for v in counts.values())
    N0 = sum(v[1] for v in counts.values())
    s = 0.0
    for cat in sorted(counts):
        n1, n0 = counts[cat]
        a, b, c, d = float(n1), float(N1 - n1), float(n0), float(N0 - n0)
        if min(a, b, c, d) == 0.0:
            a, b, c, d = a + 0.5, b + 0.5, c + 0.5, d + 0.5
        log_or = math.log(a) - math.log(b) - math.log(c) + math.log(d)
        se = math.sqrt(1 / a + 1 / b + 1 / c + 1 / d)
        s += (log_or / se) ** 2
    w = h * s
    return s, w, chisq_sf_oracle(w, f)


def pearson_oracle(counts):
    """Pearson chi-squared statistic and df on a counts dict (no pooling)."""
    cats = sorted(counts)
    N1 = sum(counts[c][0] for c in cats)
    N0 = sum(counts[c][1] for c in cats)
    N = N1 + N0
    stat = 0.0
    for c in cats:
        n1, n0 = counts[c]
        row = n1 + n0
        for obs, colsum in ((n1, N1), (n0, N0)):
            exp = row * colsum / N
            stat += (obs - exp) ** 2 / exp
    return stat, len(cats) - 1
