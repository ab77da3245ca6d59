"""Genotype/phenotype loading, validation, and 2-bit packed encoding.

Genotypes are additive minor-allele counts {0, 1, 2}; missing entries are
stored as -1. The packed representation keeps one bitplane per genotype code
per marker, pre-split into case and control subjects, so a pair contingency
table reduces to AND + popcount over plane pairs.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ParseError, ValidationError

MISSING = -1

_MAGIC = b"WPK1"

# plane indices within the packed arrays
_PLANES = (0, 1, 2, 3)  # codes 0, 1, 2, missing


@dataclass(frozen=True)
class GenotypeDataset:
    """Immutable subjects x markers genotype matrix with a binary phenotype."""

    marker_names: tuple[str, ...]
    genotypes: np.ndarray  # (n_subjects, n_markers) int8, entries {0,1,2,-1}
    phenotype: np.ndarray  # (n_subjects,) int8, entries {0,1}

    def __post_init__(self):
        g = np.ascontiguousarray(self.genotypes, dtype=np.int8)
        y = np.ascontiguousarray(self.phenotype, dtype=np.int8)
        if g.ndim != 2:
            raise ValidationError("genotypes must be a 2-D matrix")
        if y.shape != (g.shape[0],):
            raise ValidationError("phenotype length must equal subject count")
        if len(self.marker_names) != g.shape[1]:
            raise ValidationError("marker_names length must equal marker count")
        if len(set(self.marker_names)) != len(self.marker_names):
            raise ValidationError("marker names must be unique")
        bad = ~np.isin(g, (0, 1, 2, MISSING))
        if bad.any():
            raise ValidationError("genotype entries must be 0, 1, 2, or missing")
        if not np.isin(y, (0, 1)).all():
            raise ValidationError("phenotype entries must be 0 or 1")
        if not (y == 1).any() or not (y == 0).any():
            raise ValidationError("phenotype must contain both cases and controls")
        g.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "genotypes", g)
        object.__setattr__(self, "phenotype", y)
        object.__setattr__(self, "marker_names", tuple(self.marker_names))

    @property
    def n_subjects(self) -> int:
        return self.genotypes.shape[0]

    @property
    def n_markers(self) -> int:
        return self.genotypes.shape[1]

    @property
    def n_cases(self) -> int:
        return int((self.phenotype == 1).sum())

    @property
    def n_controls(self) -> int:
        return int((self.phenotype == 0).sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenotypeDataset):
            return NotImplemented
        return (
            self.marker_names == other.marker_names
            and np.array_equal(self.genotypes, other.genotypes)
            and np.array_equal(self.phenotype, other.phenotype)
        )


@dataclass(frozen=True)
class PackedGenotypes:
    """Per-marker bitplanes (codes 0/1/2 + missing), split case/control.

    Bit i of a case plane refers to the i-th case subject in file order;
    likewise for controls. ``phenotype`` preserves the original interleaving
    so the source dataset can be reconstructed exactly.
    """

    marker_names: tuple[str, ...]
    phenotype: np.ndarray  # (n_subjects,) int8
    case_planes: np.ndarray  # (n_markers, 4, words_case) uint64
    ctrl_planes: np.ndarray  # (n_markers, 4, words_ctrl) uint64

    @property
    def n_subjects(self) -> int:
        return self.phenotype.shape[0]

    @property
    def n_markers(self) -> int:
        return len(self.marker_names)

    @property
    def n_cases(self) -> int:
        return int((self.phenotype == 1).sum())

    @property
    def n_controls(self) -> int:
        return int((self.phenotype == 0).sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PackedGenotypes):
            return NotImplemented
        return (
            self.marker_names == other.marker_names
            and np.array_equal(self.phenotype, other.phenotype)
            and np.array_equal(self.case_planes, other.case_planes)
            and np.array_equal(self.ctrl_planes, other.ctrl_planes)
        )


def _pack_bool_columns(mask: np.ndarray) -> np.ndarray:
    """Pack a (n_subjects, n_markers) bool mask into (n_markers, words) uint64."""
    n = mask.shape[0]
    n_bytes = (n + 7) // 8
    n_words = (n + 63) // 64
    packed = np.packbits(mask, axis=0, bitorder="little")  # (n_bytes, m)
    out = np.zeros((mask.shape[1], n_words * 8), dtype=np.uint8)
    out[:, :n_bytes] = packed.T
    return out.view(np.uint64).reshape(mask.shape[1], n_words)


def _unpack_bool_columns(words: np.ndarray, n_subjects: int) -> np.ndarray:
    """Inverse of _pack_bool_columns; returns (n_subjects, n_markers) bool."""
    n_markers = words.shape[0]
    as_bytes = words.view(np.uint8).reshape(n_markers, -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :n_subjects].T.astype(bool)


def pack(dataset: GenotypeDataset) -> PackedGenotypes:
    """Encode a dataset into case/control-split bitplanes."""
    g = dataset.genotypes
    case = dataset.phenotype == 1
    planes = []
    for group_mask in (case, ~case):
        sub = g[group_mask, :]
        group = np.stack(
            [_pack_bool_columns(sub == code) for code in (0, 1, 2, MISSING)],
            axis=1,
        )
        planes.append(group)
    return PackedGenotypes(
        marker_names=dataset.marker_names,
        phenotype=dataset.phenotype,
        case_planes=planes[0],
        ctrl_planes=planes[1],
    )


def unpack(packed: PackedGenotypes) -> GenotypeDataset:
    """Reconstruct the source dataset from bitplanes, bit-exactly."""
    case = packed.phenotype == 1
    n = packed.n_subjects
    g = np.empty((n, packed.n_markers), dtype=np.int8)
    for group_mask, planes, count in (
        (case, packed.case_planes, packed.n_cases),
        (~case, packed.ctrl_planes, packed.n_controls),
    ):
        sub = np.full((count, packed.n_markers), MISSING, dtype=np.int8)
        for code, plane in zip((0, 1, 2), range(3)):
            mask = _unpack_bool_columns(planes[:, plane, :], count)
            sub[mask] = code
        g[group_mask, :] = sub
    return GenotypeDataset(packed.marker_names, g, packed.phenotype)


def _detect_delimiter(header: str) -> str:
    if "\t" in header:
        return "\t"
    return ","


def _read_phenotype_file(path: str | Path) -> np.ndarray:
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tok = line.strip()
            if not tok:
                continue
            if tok not in ("0", "1"):
                raise ValidationError(
                    f"phenotype file {path}, line {lineno}: expected 0 or 1, got {tok!r}"
                )
            values.append(int(tok))
    return np.asarray(values, dtype=np.int8)


def load_text(
    path: str | Path,
    phenotype_source: str,
    missing_token: str = "NA",
) -> GenotypeDataset:
    """Load a delimited genotype file (header of marker names, one row per subject).

    ``phenotype_source`` is either the name of a column in the file or the
    path of a separate one-value-per-line 0/1 file. A column name takes
    precedence when both interpretations are possible.
    """
    with open(path) as fh:
        header_line = fh.readline()
        if not header_line:
            raise ParseError("empty file", line=1)
        delim = _detect_delimiter(header_line)
        names = [t.strip() for t in header_line.rstrip("\n").split(delim)]
        phen_col = names.index(phenotype_source) if phenotype_source in names else None
        rows: list[list[int]] = []
        phen_vals: list[int] = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            toks = [t.strip() for t in line.rstrip("\n").split(delim)]
            if len(toks) != len(names):
                raise ParseError(
                    f"expected {len(names)} fields, found {len(toks)}", line=lineno
                )
            row = []
            for col, tok in enumerate(toks):
                if phen_col is not None and col == phen_col:
                    if tok not in ("0", "1"):
                        raise ValidationError(
                            f"line {lineno}: phenotype must be 0 or 1, got {tok!r}"
                        )
                    phen_vals.append(int(tok))
                    continue
                if tok == missing_token:
                    row.append(MISSING)
                elif tok in ("0", "1", "2"):
                    row.append(int(tok))
                else:
                    raise ParseError(
                        f"unknown genotype token {tok!r} in column {names[col]!r}",
                        line=lineno,
                    )
            rows.append(row)
    if not rows:
        raise ParseError("no subject rows", line=2)
    if phen_col is not None:
        marker_names = [n for i, n in enumerate(names) if i != phen_col]
        phenotype = np.asarray(phen_vals, dtype=np.int8)
    else:
        marker_names = names
        phenotype = _read_phenotype_file(phenotype_source)
        if phenotype.shape[0] != len(rows):
            raise ValidationError(
                f"phenotype file has {phenotype.shape[0]} entries for {len(rows)} subjects"
            )
    genotypes = np.asarray(rows, dtype=np.int8)
    return GenotypeDataset(tuple(marker_names), genotypes, phenotype)


def write_text(dataset: GenotypeDataset, path: str | Path, missing_token: str = "NA",
               phenotype_column: str = "phenotype") -> None:
    """Write a dataset as a tab-delimited text file with a phenotype column."""
    with open(path, "w") as fh:
        fh.write("\t".join((*dataset.marker_names, phenotype_column)) + "\n")
        for i in range(dataset.n_subjects):
            toks = [
                missing_token if v == MISSING else str(int(v))
                for v in dataset.genotypes[i]
            ]
            toks.append(str(int(dataset.phenotype[i])))
            fh.write("\t".join(toks) + "\n")


def _read_exact(fh: io.BufferedReader, n: int) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise FormatError("truncated file")
    return buf


def write_packed(packed: PackedGenotypes, path: str | Path) -> None:
    """Serialize to the WPK1 binary layout (little-endian throughout)."""
    n = packed.n_subjects
    phen_words = _pack_bool_columns((packed.phenotype == 1).reshape(n, 1))[0]
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", n, packed.n_markers))
        for name in packed.marker_names:
            raw = name.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        fh.write(phen_words.astype("<u8").tobytes())
        for m in range(packed.n_markers):
            fh.write(packed.case_planes[m].astype("<u8").tobytes())
            fh.write(packed.ctrl_planes[m].astype("<u8").tobytes())


def read_packed(path: str | Path) -> PackedGenotypes:
    """Read a WPK1 file written by write_packed; bit-exact round trip."""
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise FormatError("not a WPK1 file (bad magic)")
        n, m = struct.unpack("<QQ", _read_exact(fh, 16))
        names = []
        for _ in range(m):
            (ln,) = struct.unpack("<I", _read_exact(fh, 4))
            names.append(_read_exact(fh, ln).decode("utf-8"))
        n_words_all = (n + 63) // 64
        phen_words = np.frombuffer(_read_exact(fh, n_words_all * 8), dtype="<u8")
        case = _unpack_bool_columns(phen_words.reshape(1, -1), n)[:, 0]
        n1 = int(case.sum())
        n0 = n - n1
        if n1 == 0 or n0 == 0:
            raise FormatError("phenotype bitset is single-class")
        w1 = (n1 + 63) // 64
        w0 = (n0 + 63) // 64
        case_planes = np.empty((m, 4, w1), dtype=np.uint64)
        ctrl_planes = np.empty((m, 4, w0), dtype=np.uint64)
        for j in range(m):
            case_planes[j] = np.frombuffer(
                _read_exact(fh, 4 * w1 * 8), dtype="<u8"
            ).reshape(4, w1)
            ctrl_planes[j] = np.frombuffer(
                _read_exact(fh, 4 * w0 * 8), dtype="<u8"
            ).reshape(4, w0)
        if fh.read(1):
            raise FormatError("trailing bytes after bitplanes")
    phenotype = np.where(case, 1, 0).astype(np.int8)
    return PackedGenotypes(tuple(names), phenotype, case_planes, ctrl_planes)
