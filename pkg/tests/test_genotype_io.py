import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_dataset
from wscan.data import (
    MISSING,
    GenotypeDataset,
    load_text,
    pack,
    read_packed,
    unpack,
    write_packed,
    write_text,
)
from wscan.errors import FormatError, ParseError, ValidationError


def write(path, text):
    path.write_text(text)
    return path


class TestLoadText:
    def test_smallest_valid_input(self, tmp_path):
        p = write(tmp_path / "g.csv", "a,phenotype\n0,1\n2,0\n")
        ds = load_text(p, "phenotype")
        assert ds.n_subjects == 2 and ds.n_markers == 1
        assert ds.marker_names == ("a",)
        assert ds.n_cases == 1 and ds.n_controls == 1
        assert list(ds.genotypes[:, 0]) == [0, 2]

    def test_all_one_class_phenotype_rejected(self, tmp_path):
        p = write(tmp_path / "g.csv", "a,phenotype\n0,1\n2,1\n")
        with pytest.raises(ValidationError):
            load_text(p, "phenotype")

    def test_d0_fixture(self, tmp_path, d0):
        write_text(d0, tmp_path / "d0.tsv")
        ds = load_text(tmp_path / "d0.tsv", "phenotype")
        assert ds == d0
        assert ds.n_subjects == 8 and ds.n_markers == 2

    def test_row_length_error_carries_line_number(self, tmp_path):
        p = write(tmp_path / "g.csv", "a,b,phenotype\n0,1,1\n0,0\n1,1,0\n")
        with pytest.raises(ParseError, match="line 3"):
            load_text(p, "phenotype")

    def test_unknown_token_rejected(self, tmp_path):
        p = write(tmp_path / "g.csv", "a,phenotype\n3,1\n0,0\n")
        with pytest.raises(ParseError, match="3"):
            load_text(p, "phenotype")

    def test_missing_token(self, tmp_path):
        p = write(tmp_path / "g.csv", "a,phenotype\n.,1\n0,0\n")
        ds = load_text(p, "phenotype", missing_token=".")
        assert ds.genotypes[0, 0] == MISSING

    def test_separate_phenotype_file(self, tmp_path):
        g = write(tmp_path / "g.tsv", "a\tb\n0\t1\n2\tNA\n")
        ph = write(tmp_path / "ph.txt", "1\n0\n")
        ds = load_text(g, str(ph))
        assert ds.marker_names == ("a", "b")
        assert ds.genotypes[1, 1] == MISSING
        assert list(ds.phenotype) == [1, 0]

    def test_tab_delimiter_autodetected(self, tmp_path):
        p = write(tmp_path / "g.tsv", "a\tphenotype\n0\t1\n1\t0\n")
        assert load_text(p, "phenotype").marker_names == ("a",)


class TestDatasetInvariants:
    def test_duplicate_marker_names_rejected(self):
        g = np.zeros((2, 2), dtype=np.int8)
        with pytest.raises(ValidationError):
            GenotypeDataset(("a", "a"), g, np.array([0, 1], dtype=np.int8))

    def test_bad_genotype_code_rejected(self):
        g = np.array([[5], [0]], dtype=np.int8)
        with pytest.raises(ValidationError):
            GenotypeDataset(("a",), g, np.array([0, 1], dtype=np.int8))


class TestPack:
    def test_d0_case_plane_popcounts(self, d0):
        p = pack(d0)
        counts = [
            int(np.bitwise_count(p.case_planes[0, code]).sum()) for code in range(3)
        ]
        assert counts == [2, 1, 1]

    def test_all_missing_marker(self):
        g = np.array([[MISSING], [MISSING]], dtype=np.int8)
        ds = GenotypeDataset(("a",), g, np.array([1, 0], dtype=np.int8))
        p = pack(ds)
        assert int(np.bitwise_count(p.case_planes[0, :3]).sum()) == 0
        assert int(np.bitwise_count(p.case_planes[0, 3]).sum()) == 1
        assert int(np.bitwise_count(p.ctrl_planes[0, 3]).sum()) == 1

    def test_single_case_subject_code2(self):
        g = np.array([[2], [0]], dtype=np.int8)
        ds = GenotypeDataset(("a",), g, np.array([1, 0], dtype=np.int8))
        p = pack(ds)
        assert p.case_planes[0, 2, 0] == 1  # exactly bit 0

    def test_exactly_one_plane_per_subject(self, d0):
        p = pack(d0)
        union = p.case_planes.sum(axis=1)  # planes are disjoint, so sum == OR
        per_marker = np.bitwise_count(union).sum(axis=1)
        assert (per_marker == d0.n_cases).all()

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_roundtrip_random(self, seed):
        ds = random_dataset(np.random.default_rng(seed))
        assert unpack(pack(ds)) == ds


class TestPackedFile:
    def test_roundtrip_d0(self, tmp_path, d0):
        p = pack(d0)
        write_packed(p, tmp_path / "d0.wpk")
        assert read_packed(tmp_path / "d0.wpk") == p

    def test_bad_magic(self, tmp_path):
        (tmp_path / "bad.wpk").write_bytes(b"XXXX" + b"\x00" * 64)
        with pytest.raises(FormatError, match="magic"):
            read_packed(tmp_path / "bad.wpk")

    def test_truncated(self, tmp_path, d0):
        write_packed(pack(d0), tmp_path / "d0.wpk")
        raw = (tmp_path / "d0.wpk").read_bytes()
        (tmp_path / "cut.wpk").write_bytes(raw[:-5])
        with pytest.raises(FormatError):
            read_packed(tmp_path / "cut.wpk")

    def test_magic_prefix_and_header_layout(self, tmp_path, d0):
        write_packed(pack(d0), tmp_path / "d0.wpk")
        raw = (tmp_path / "d0.wpk").read_bytes()
        assert raw[:4] == b"WPK1"
        assert int.from_bytes(raw[4:12], "little") == 8
        assert int.from_bytes(raw[12:20], "little") == 2

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_roundtrip_random_files(self, seed):
        import tempfile

        ds = random_dataset(np.random.default_rng(seed))
        packed = pack(ds)
        with tempfile.TemporaryDirectory() as tmp:
            path = f"{tmp}/x.wpk"
            write_packed(packed, path)
            back = read_packed(path)
        assert back == packed
        assert unpack(back) == ds
