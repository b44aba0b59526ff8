"""Core container and recurrence-kernel tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import digamma as ref_digamma
from scipy.special import polygamma

from oracles import loglik_reference
from polyalda import (
    CountVector,
    Histogram,
    PolyaParams,
    SampleSet,
    build_histograms,
    digamma_diff_sum,
    log_rising_sum,
    polya_log_likelihood,
    read_samples,
    trigamma_diff_sum,
    write_samples,
)


def ref_trigamma(x):
    return polygamma(1, x)


class TestContainers:
    def test_count_vector_total(self):
        cv = CountVector((2, 0, 3))
        assert cv.total == 5
        assert cv.dimension == 3

    def test_count_vector_rejects_negative(self):
        with pytest.raises(ValueError):
            CountVector((1, -1))

    def test_sample_set_dimension_mismatch(self):
        with pytest.raises(ValueError):
            SampleSet([(1, 2), (1, 2, 3)])

    def test_sample_set_empty_needs_dimension(self):
        with pytest.raises(ValueError):
            SampleSet([])
        empty = SampleSet([], dimension=3)
        assert empty.n_samples == 0 and empty.dimension == 3

    def test_sample_set_matrix_is_readonly(self):
        s = SampleSet([(1, 2)])
        with pytest.raises(ValueError):
            s.matrix[0, 0] = 9

    def test_polya_params_validation(self):
        with pytest.raises(ValueError):
            PolyaParams(np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            PolyaParams(np.array([1.0, np.inf]))
        p = PolyaParams(np.array([0.5, 1.5]))
        assert p.alpha_sum == pytest.approx(2.0, rel=1e-12)


class TestBuildHistograms:
    def test_worked_example(self):
        # samples (2,1), (2,0): dim-1 counts {2 x2}, dim-2 {1 x1}, totals {3, 2}
        h = build_histograms(SampleSet([(2, 1), (2, 0)]))
        assert h.per_dim[0].values.tolist() == [2] and h.per_dim[0].freqs.tolist() == [2]
        assert h.per_dim[1].values.tolist() == [1] and h.per_dim[1].freqs.tolist() == [1]
        assert h.lengths.values.tolist() == [2, 3]
        assert h.lengths.freqs.tolist() == [1, 1]
        assert h.dims == (2, 1)

    def test_zero_counts_omitted(self):
        h = build_histograms(SampleSet([(0, 0)]))
        assert all(hh.is_empty for hh in h.per_dim)
        assert h.lengths.is_empty

    def test_mass_reconstruction(self):
        rng = np.random.default_rng(11)
        mat = rng.integers(0, 7, (50, 4))
        h = build_histograms(SampleSet.from_matrix(mat))
        for i in range(4):
            assert h.per_dim[i].mass == mat[:, i].sum()
        assert h.lengths.mass == mat.sum()

    def test_empty_sample_set_rejected(self):
        with pytest.raises(ValueError):
            build_histograms(SampleSet([], dimension=2))


class TestRecurrenceKernels:
    def test_digamma_two_term(self):
        assert digamma_diff_sum(0.5, Histogram.from_values([2])) == pytest.approx(
            1 / 0.5 + 1 / 1.5, abs=1e-14
        )

    def test_digamma_m1(self):
        assert digamma_diff_sum(1.0, Histogram.from_values([1, 1, 1])) == pytest.approx(3.0)

    def test_trigamma_two_term(self):
        assert trigamma_diff_sum(0.5, Histogram.from_values([2])) == pytest.approx(
            -(1 / 0.25 + 1 / 2.25), abs=1e-14
        )

    def test_trigamma_m1(self):
        assert trigamma_diff_sum(2.0, Histogram.from_values([1])) == pytest.approx(-0.25)

    def test_digamma_mixed_histogram_vs_reference(self):
        hist = Histogram.from_values([1, 1, 5])
        want = 2 * (ref_digamma(1.7) - ref_digamma(0.7)) + (ref_digamma(5.7) - ref_digamma(0.7))
        assert digamma_diff_sum(0.7, hist) == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 10.0])
    def test_recurrence_matches_reference_over_m(self, x):
        for m in range(1, 51):
            hist = Histogram.from_values([m])
            assert digamma_diff_sum(x, hist) == pytest.approx(
                ref_digamma(x + m) - ref_digamma(x), abs=1e-10
            )
            assert trigamma_diff_sum(x, hist) == pytest.approx(
                ref_trigamma(x + m) - ref_trigamma(x), abs=1e-10
            )

    def test_domain_errors(self):
        hist = Histogram.from_values([1])
        for fn in (digamma_diff_sum, trigamma_diff_sum, log_rising_sum):
            with pytest.raises(ValueError):
                fn(0.0, hist)
            with pytest.raises(ValueError):
                fn(-1.0, hist)

    def test_trigamma_always_negative(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            hist = Histogram.from_values(rng.integers(1, 30, 10))
            assert trigamma_diff_sum(float(rng.uniform(0.05, 20)), hist) < 0

    @given(
        x1=st.floats(0.01, 50.0),
        bump=st.floats(0.01, 50.0),
        values=st.lists(st.integers(1, 60), min_size=1, max_size=12),
    )
    @settings(max_examples=60, deadline=None)
    def test_digamma_strictly_decreasing_in_x(self, x1, bump, values):
        hist = Histogram.from_values(values)
        assert digamma_diff_sum(x1, hist) > digamma_diff_sum(x1 + bump, hist)


class TestPolyaLogLikelihood:
    def test_hand_example(self):
        # alpha=(1,1), one sample (1,0): log Gamma ratios collapse to log(1/2)
        got = polya_log_likelihood(PolyaParams(np.array([1.0, 1.0])), SampleSet([(1, 0)]))
        assert got == pytest.approx(np.log(0.5), abs=1e-12)

    def test_empty_sample_set_gives_zero(self):
        got = polya_log_likelihood(PolyaParams(np.array([0.3, 4.0])), SampleSet([], dimension=2))
        assert got == 0.0

    def test_zero_total_samples_contribute_nothing(self):
        p = PolyaParams(np.array([0.7, 1.3]))
        base = polya_log_likelihood(p, SampleSet([(2, 1)]))
        padded = polya_log_likelihood(p, SampleSet([(2, 1), (0, 0)]))
        assert padded == base

    def test_permutation_symmetry_exact(self):
        rng = np.random.default_rng(5)
        mat = rng.integers(0, 6, (12, 4))
        perm = rng.permutation(4)
        p = PolyaParams(np.array([0.4, 0.4, 0.4, 0.4]))
        a = polya_log_likelihood(p, SampleSet.from_matrix(mat))
        b = polya_log_likelihood(p, SampleSet.from_matrix(mat[:, perm]))
        assert a == b

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            polya_log_likelihood(PolyaParams(np.array([1.0])), SampleSet([(1, 2)]))

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_histogram_form_matches_raw_loop(self, seed):
        rng = np.random.default_rng(seed)
        n, k = int(rng.integers(1, 30)), int(rng.integers(1, 6))
        mat = rng.integers(0, 20, (n, k))
        alpha = rng.uniform(0.05, 8.0, k)
        mine = polya_log_likelihood(PolyaParams(alpha), SampleSet.from_matrix(mat))
        ref = loglik_reference(alpha, mat)
        assert mine == pytest.approx(ref, rel=1e-10, abs=1e-10)


class TestSampleIo:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "s.txt"
        original = SampleSet([(1, 2, 0), (4, 0, 5)])
        write_samples(original, path)
        again = read_samples(path)
        assert np.array_equal(again.matrix, original.matrix)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("# header\n\n1 2\n\n# mid\n3 4\n")
        assert read_samples(path).matrix.tolist() == [[1, 2], [3, 4]]

    def test_bad_line_reports_position(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("1 2\nx y\n")
        with pytest.raises(ValueError, match="s.txt:2"):
            read_samples(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("# nothing\n")
        with pytest.raises(ValueError):
            read_samples(path)
