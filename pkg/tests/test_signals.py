import numpy as np
import pytest

from retime import (
    CsvParseError,
    IncompatibleSignals,
    Signal,
    derivative,
    pairwise_error,
    read_csv,
    resample,
    uniform_grid,
    write_csv,
)
from retime.warps import identity, random_warp, compose


class TestSignal:
    def test_1d_input_becomes_single_column(self):
        s = Signal(np.array([1.0, 2.0, 3.0]))
        assert s.samples.shape == (3, 1)
        assert s.T == 3 and s.n == 1

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            Signal(np.array([1.0]))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            Signal(np.array([0.0, np.nan, 1.0]))
        with pytest.raises(ValueError):
            Signal(np.array([0.0, np.inf]))

    def test_samples_are_immutable(self):
        s = Signal(np.zeros((4, 2)))
        with pytest.raises(ValueError):
            s.samples[0, 0] = 1.0

    def test_does_not_alias_input(self):
        raw = np.zeros((4, 2))
        s = Signal(raw)
        raw[0, 0] = 99.0
        assert s.samples[0, 0] == 0.0

    def test_equality_is_by_value(self):
        a = Signal(np.arange(6.0).reshape(3, 2))
        b = Signal(np.arange(6.0).reshape(3, 2))
        c = Signal(np.arange(6.0).reshape(2, 3))
        assert a == b
        assert a != c


class TestUniformGrid:
    def test_endpoints_forced(self):
        assert uniform_grid(2).tolist() == [0.0, 1.0]

    def test_three_points(self):
        assert uniform_grid(3).tolist() == [0.0, 0.5, 1.0]

    def test_five_points(self):
        assert uniform_grid(5).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_too_small(self):
        with pytest.raises(ValueError):
            uniform_grid(1)


class TestDerivative:
    def test_linear_signal_exact(self):
        t = uniform_grid(11)
        d = derivative(Signal(t))
        assert np.allclose(d[:, 0], 1.0, atol=1e-13, rtol=0)

    def test_quadratic_near_exact(self):
        t = uniform_grid(11)
        d = derivative(Signal(t**2))
        assert np.abs(d[:, 0] - 2 * t).max() <= 1e-12

    def test_quartic_near_exact(self):
        # 4th-order stencils are exact on degree-4 polynomials up to roundoff
        t = uniform_grid(31)
        d = derivative(Signal(t**4))
        assert np.abs(d[:, 0] - 4 * t**3).max() <= 1e-11

    def test_constant_signal_zero(self):
        d = derivative(Signal(np.full((20, 3), 2.5)))
        assert np.abs(d).max() <= 1e-12

    def test_columns_independent(self):
        t = uniform_grid(15)
        X = np.column_stack([t, t**2])
        d = derivative(Signal(X))
        assert np.allclose(d[:, 0], derivative(Signal(t))[:, 0])
        assert np.allclose(d[:, 1], derivative(Signal(t**2))[:, 0])

    def test_linearity(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((40, 2))
        Y = rng.standard_normal((40, 2))
        lhs = derivative(Signal(2.0 * X + 3.0 * Y))
        rhs = 2.0 * derivative(Signal(X)) + 3.0 * derivative(Signal(Y))
        assert np.abs(lhs - rhs).max() <= 1e-9

    def test_short_signal_fallback(self):
        # T < 5 falls back to low-order differences but stays exact on lines
        t = uniform_grid(3)
        d = derivative(Signal(3.0 * t))
        assert np.allclose(d[:, 0], 3.0)


class TestResample:
    def test_identity_warp_is_identity(self):
        rng = np.random.default_rng(0)
        s = Signal(rng.standard_normal((17, 3)))
        out = resample(s, identity(17))
        assert np.array_equal(out.samples, s.samples)

    def test_quadratic_warp_oracle(self):
        # X(t) = t through tau(t) = t^2 is t^2, up to interpolation error
        T = 101
        t = uniform_grid(T)
        out = resample(Signal(t), t**2)
        assert np.abs(out.samples[:, 0] - t**2).max() <= 1e-4

    def test_constant_signal_unchanged(self):
        s = Signal(np.full((30, 2), 7.0))
        w = random_warp(30, seed=5)
        out = resample(s, w)
        # interior queries blend two equal values; allow rounding at the ulp level
        assert np.abs(out.samples - 7.0).max() <= 1e-14

    def test_accepts_bare_arrays_and_different_lengths(self):
        s = Signal(uniform_grid(11))
        out = resample(s, np.array([0.0, 0.25, 1.0]))
        assert out.samples[:, 0] == pytest.approx([0.0, 0.25, 1.0])

    def test_domain_violation_raises(self):
        s = Signal(uniform_grid(5))
        with pytest.raises(ValueError):
            resample(s, np.array([0.0, 0.5, 1.0 + 1e-9]))

    def test_tiny_overshoot_clipped(self):
        s = Signal(uniform_grid(5))
        out = resample(s, np.array([0.0, 0.5, 1.0 + 1e-13]))
        assert out.samples[-1, 0] == 1.0

    def test_double_resample_converges_to_composition(self):
        # resampling twice approaches resampling under the composed warp
        errs = []
        for T in (50, 200, 800):
            tpl_t = uniform_grid(T)
            s = Signal(np.column_stack([np.sin(2 * np.pi * tpl_t), np.cos(np.pi * tpl_t)]))
            w1 = random_warp(T, seed=1)
            w2 = random_warp(T, seed=2)
            once = resample(s, compose(w1, w2))
            twice = resample(resample(s, w1), w2)
            errs.append(pairwise_error(once, twice))
        assert errs[0] > errs[-1]
        assert errs[-1] <= 1e-4


class TestPairwiseError:
    def test_identical_signals(self):
        s = Signal(np.arange(8.0).reshape(4, 2))
        assert pairwise_error(s, s) == 0.0

    def test_constant_offset_345(self):
        a = Signal(np.zeros((6, 2)))
        b = Signal(np.tile([3.0, 4.0], (6, 1)))
        assert pairwise_error(a, b) == pytest.approx(5.0)

    def test_ramp_vs_zero(self):
        a = Signal(np.zeros(3))
        b = Signal(np.array([0.0, 1.0, 2.0]))
        assert pairwise_error(a, b) == pytest.approx(1.0)

    def test_shape_mismatch(self):
        with pytest.raises(IncompatibleSignals):
            pairwise_error(Signal(np.zeros(3)), Signal(np.zeros(4)))
        with pytest.raises(IncompatibleSignals):
            pairwise_error(Signal(np.zeros((3, 1))), Signal(np.zeros((3, 2))))

    def test_metric_properties_on_random_triples(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            a, b, c = (Signal(rng.standard_normal((9, 3))) for _ in range(3))
            dab = pairwise_error(a, b)
            dba = pairwise_error(b, a)
            assert dab == dba
            assert dab > 0
            assert dab <= pairwise_error(a, c) + pairwise_error(c, b) + 1e-12


class TestCsv:
    def test_round_trip_bit_faithful(self, tmp_path):
        rng = np.random.default_rng(7)
        s = Signal(rng.standard_normal((23, 4)) * 1e3)
        p = tmp_path / "sig.csv"
        write_csv(s, p)
        assert read_csv(p) == s

    def test_one_column_round_trip(self, tmp_path):
        s = Signal(np.array([0.1, 0.2, 0.30000000000000004]))
        p = tmp_path / "w.csv"
        write_csv(s, p)
        assert read_csv(p) == s

    def test_ragged_rows(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n3\n")
        with pytest.raises(CsvParseError) as ei:
            read_csv(p)
        assert ei.value.row == 2
        assert "row 2" in str(ei.value)

    def test_non_numeric(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n3,x\n")
        with pytest.raises(CsvParseError) as ei:
            read_csv(p)
        assert ei.value.row == 2

    def test_non_finite(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1\nnan\n")
        with pytest.raises(CsvParseError):
            read_csv(p)

    def test_too_few_rows(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n")
        with pytest.raises(CsvParseError):
            read_csv(p)

    def test_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "ok.csv"
        p.write_text("1,2\n\n3,4\n\n")
        assert read_csv(p).samples.tolist() == [[1.0, 2.0], [3.0, 4.0]]
