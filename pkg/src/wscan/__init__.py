"""W-test association scanning for categorical genotypes and binary traits."""

__version__ = "0.1.0"

from .data import (
    MISSING,
    GenotypeDataset,
    PackedGenotypes,
    load_text,
    pack,
    read_packed,
    unpack,
    write_packed,
)
from .hf import HfTable, default_hf, estimate_hf, hf_convergence_report
from .scan import AssociationResult, ScanConfig, scan_main, scan_pairs, write_results
from .tabulate import (
    ContingencyTable,
    tabulate_pair,
    tabulate_pair_packed,
    tabulate_single,
)
from .wcore import OddsCell, WStatistic, cell_log_odds, chisq_sf, s_statistic, w_test

__all__ = [
    "MISSING",
    "GenotypeDataset",
    "PackedGenotypes",
    "load_text",
    "pack",
    "unpack",
    "read_packed",
    "write_packed",
    "ContingencyTable",
    "tabulate_single",
    "tabulate_pair",
    "tabulate_pair_packed",
    "OddsCell",
    "WStatistic",
    "cell_log_odds",
    "s_statistic",
    "w_test",
    "chisq_sf",
    "HfTable",
    "default_hf",
    "estimate_hf",
    "hf_convergence_report",
    "ScanConfig",
    "AssociationResult",
    "scan_main",
    "scan_pairs",
    "write_results",
]
