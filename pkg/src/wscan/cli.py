"""Command-line interface: convert, estimate-hf, scan, diagnose, bench.

Exit codes: 0 success, 1 I/O error, 2 format/validation error,
3 estimation error, 64 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .baselines import run_benchmark, write_benchmark
from .data import load_text, pack, read_packed, unpack, write_packed, write_text
from .diagnostics import density_report, null_w_samples, qq_report
from .errors import (
    EstimationError,
    FormatError,
    ParseError,
    ValidationError,
    WscanError,
)
from .hf import default_hf, estimate_hf, read_hf_tables, write_hf_tables
from .scan import ScanConfig, scan_main, scan_pairs, write_results

EXIT_OK = 0
EXIT_IO = 1
EXIT_FORMAT = 2
EXIT_ESTIMATION = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _is_packed(path: str) -> bool:
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == b"WPK1"
    except OSError:
        return False


def _load_dataset(args):
    if _is_packed(args.data):
        return unpack(read_packed(args.data))
    if not args.phenotype:
        raise ValidationError(
            "text input needs --phenotype (column name or 0/1 file path)"
        )
    return load_text(args.data, args.phenotype, args.missing_token)


def _add_input_flags(p):
    p.add_argument("data", help="genotype file (delimited text or WPK1 packed)")
    p.add_argument(
        "--phenotype",
        help="phenotype column name in the text file, or path of a 0/1-per-line file",
    )
    p.add_argument("--missing-token", default="NA", help="missing genotype token")


def _seed_or_warn(args) -> int:
    if args.seed is None:
        print("warning: --seed not given; defaulting to 0", file=sys.stderr)
        return 0
    return args.seed


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("WSCAN_THREADS")
    return int(env) if env else 1


def cmd_convert(args) -> int:
    if _is_packed(args.input):
        dataset = unpack(read_packed(args.input))
        write_text(dataset, args.output, missing_token=args.missing_token)
    else:
        if not args.phenotype:
            raise ValidationError("text input needs --phenotype")
        dataset = load_text(args.input, args.phenotype, args.missing_token)
        write_packed(pack(dataset), args.output)
    return EXIT_OK


def cmd_estimate_hf(args) -> int:
    dataset = _load_dataset(args)
    seed = _seed_or_warn(args)
    hf = estimate_hf(dataset, args.order, args.B, args.n_sample, seed)
    write_hf_tables(hf, args.out)
    return EXIT_OK


def _load_hf(args, order: int):
    if args.hf:
        tables = read_hf_tables(args.hf)
        if order in tables:
            return tables[order]
        print(
            f"notice: hf file has no order-{order} entries; using default h/f values",
            file=sys.stderr,
        )
    else:
        print(
            f"notice: no hf table supplied; order-{order} tests use default h/f values",
            file=sys.stderr,
        )
    return default_hf(order)


def cmd_scan(args) -> int:
    dataset = _load_dataset(args)
    config = ScanConfig(
        order=args.order,
        input_pval=args.input_pval,
        input_poolsize=args.input_poolsize,
        output_pval=args.output_pval,
        threads=_threads(args),
    )
    if args.order == 1:
        results = scan_main(dataset, _load_hf(args, 1), config)
    else:
        results = scan_pairs(dataset, _load_hf(args, 1), _load_hf(args, 2), config)
    write_results(results, args.out, order=args.order)
    if not args.quiet:
        print(f"wrote {len(results)} result row(s) to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    dataset = _load_dataset(args)
    seed = _seed_or_warn(args)
    hf = _load_hf(args, args.order)
    samples = null_w_samples(dataset, hf, args.order, args.n_rep, args.n_sample, seed)
    paths = density_report(samples, args.out_dir)
    paths += qq_report(samples, args.out_dir)
    if not args.quiet:
        print(f"wrote {len(paths)} diagnostic file(s) to {args.out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    dataset = _load_dataset(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("wtest", "chisq", "logistic"):
            raise UsageError(f"unknown method {m!r}")
    report = run_benchmark(dataset, methods)
    write_benchmark(report, args.out)
    for row in report.rows:
        print(
            f"{row.method}: {row.n_tests} tests in {row.seconds:.3f}s "
            f"({row.tests_per_second:.0f}/s)",
            file=sys.stderr,
        )
    return EXIT_OK


class UsageError(WscanError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wscan", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", parents=[], help="text <-> packed WPK1 conversion")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--phenotype")
    p.add_argument("--missing-token", default="NA")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("estimate-hf", help="estimate (h, f) per k from null bootstraps")
    _add_input_flags(p)
    p.add_argument("--order", type=int, choices=(1, 2), required=True)
    p.add_argument("--B", type=int, default=400, help="bootstrap replicates")
    p.add_argument("--n-sample", type=int, default=1000, dest="n_sample")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate_hf)

    p = sub.add_parser("scan", help="main-effect or pairwise W-test scan")
    _add_input_flags(p)
    p.add_argument("--order", type=int, choices=(1, 2), required=True)
    p.add_argument("--hf", help="hf table TSV (defaults used when absent)")
    p.add_argument("--input-pval", type=float, dest="input_pval")
    p.add_argument("--input-poolsize", type=int, dest="input_poolsize")
    p.add_argument("--output-pval", type=float, dest="output_pval")
    p.add_argument("--threads", type=int)
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("diagnose", help="null-distribution density and QQ reports")
    _add_input_flags(p)
    p.add_argument("--order", type=int, choices=(1, 2), required=True)
    p.add_argument("--hf")
    p.add_argument("--n-rep", type=int, default=200, dest="n_rep")
    p.add_argument("--n-sample", type=int, default=1000, dest="n_sample")
    p.add_argument("--seed", type=int)
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--out-dir", required=True, dest="out_dir")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("bench", help="time wtest/chisq/logistic on the same pair set")
    _add_input_flags(p)
    p.add_argument("--methods", default="wtest,chisq,logistic")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wscan: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, FormatError) as exc:
        print(f"wscan: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except EstimationError as exc:
        print(f"wscan: estimation failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except WscanError as exc:
        print(f"wscan: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"wscan: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
