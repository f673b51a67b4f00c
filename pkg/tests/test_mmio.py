"""Tests for Matrix Market ingestion/export."""

import numpy as np
import pytest
import scipy.io
import scipy.sparse

from rsrr import load_matrix_market, write_matrix_market
from rsrr.errors import ParseError, UnsupportedField


def write_lines(tmp_path, lines, name="m.mtx"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


class TestCoordinate:
    def test_real_diagonal(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 2",
            "1 1 1.0",
            "2 2 2.0",
        ])
        m = load_matrix_market(path)
        assert np.array_equal(m, np.diag([1.0 + 0j, 2.0 + 0j]))

    def test_symmetric_expansion(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real symmetric",
            "3 3 4",
            "1 1 2.0",
            "2 1 -1.0",
            "3 2 -1.0",
            "3 3 2.0",
        ])
        m = load_matrix_market(path)
        assert np.array_equal(m, m.T)
        assert m[0, 1] == -1.0
        assert m[1, 2] == -1.0

    def test_hermitian_expansion(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate complex hermitian",
            "2 2 2",
            "1 1 3.0 0.0",
            "2 1 1.0 2.0",
        ])
        m = load_matrix_market(path)
        assert m[1, 0] == 1.0 + 2.0j
        assert m[0, 1] == 1.0 - 2.0j

    def test_comments_and_blank_lines(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real general",
            "% a comment",
            "",
            "2 2 1",
            "% more",
            "2 1 5.0",
        ])
        m = load_matrix_market(path)
        assert m[1, 0] == 5.0

    def test_integer_field(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate integer general",
            "2 2 1",
            "1 2 7",
        ])
        assert load_matrix_market(path)[0, 1] == 7.0


class TestArray:
    def test_column_major(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix array real general",
            "2 2",
            "1.0", "2.0", "3.0", "4.0",
        ])
        m = load_matrix_market(path)
        assert np.array_equal(m, np.array([[1.0, 3.0], [2.0, 4.0]]))

    def test_symmetric_array(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix array real symmetric",
            "2 2",
            "1.0", "5.0", "2.0",
        ])
        m = load_matrix_market(path)
        assert np.array_equal(m, np.array([[1.0, 5.0], [5.0, 2.0]]))


class TestErrors:
    def test_bad_banner(self, tmp_path):
        path = write_lines(tmp_path, ["%%NotMatrixMarket foo"])
        with pytest.raises(ParseError) as err:
            load_matrix_market(path)
        assert err.value.line == 1

    def test_pattern_rejected(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate pattern general",
            "2 2 1",
            "1 1",
        ])
        with pytest.raises(UnsupportedField):
            load_matrix_market(path)

    def test_skew_rejected(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real skew-symmetric",
            "2 2 1",
            "2 1 1.0",
        ])
        with pytest.raises(UnsupportedField):
            load_matrix_market(path)

    def test_bad_value_reports_line(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 2",
            "1 1 1.0",
            "2 2 oops",
        ])
        with pytest.raises(ParseError) as err:
            load_matrix_market(path)
        assert err.value.line == 4

    def test_out_of_bounds_index(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 1",
            "3 1 1.0",
        ])
        with pytest.raises(ParseError):
            load_matrix_market(path)

    def test_entry_count_mismatch(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 3",
            "1 1 1.0",
        ])
        with pytest.raises(ParseError):
            load_matrix_market(path)

    def test_upper_triangle_in_symmetric(self, tmp_path):
        path = write_lines(tmp_path, [
            "%%MatrixMarket matrix coordinate real symmetric",
            "2 2 1",
            "1 2 1.0",
        ])
        with pytest.raises(ParseError):
            load_matrix_market(path)


class TestRoundTrip:
    @pytest.mark.parametrize("fmt", ["array", "coordinate"])
    @pytest.mark.parametrize("kind", ["real", "complex"])
    def test_write_load_identity(self, tmp_path, fmt, kind):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((5, 3))
        if kind == "complex":
            m = m + 1j * rng.standard_normal((5, 3))
        path = tmp_path / "out.mtx"
        write_matrix_market(path, m, fmt=fmt)
        again = load_matrix_market(path)
        assert np.array_equal(again, m.astype(np.complex128))

    def test_scipy_oracle_agrees(self, tmp_path):
        # independent reader cross-check on our writer
        rng = np.random.default_rng(8)
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        path = tmp_path / "out.mtx"
        write_matrix_market(path, m, fmt="coordinate")
        via_scipy = scipy.sparse.coo_matrix(scipy.io.mmread(str(path))).toarray()
        assert np.allclose(via_scipy, m, rtol=0, atol=0)

    def test_scipy_written_file_loads(self, tmp_path):
        # and our reader on scipy's writer, coordinate + symmetric
        rng = np.random.default_rng(9)
        m = rng.standard_normal((5, 5))
        m = m + m.T
        path = tmp_path / "sym.mtx"
        scipy.io.mmwrite(str(path), scipy.sparse.coo_matrix(m), symmetry="symmetric")
        ours = load_matrix_market(path)
        assert np.allclose(ours, m, rtol=0, atol=0)
