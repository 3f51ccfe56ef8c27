import numpy as np
import pytest
from hypothesis import given, strategies as st

from esqpt_decoherence.errors import BracketingError, InvalidParameterError
from esqpt_decoherence.scaling import (find_dip, locate_dip, meanfield_bracket, power_law_fit,
                                       rmax_at, rmax_scan)


class TestPowerLawFit:
    def test_exact(self):
        fit = power_law_fit([(n, 3 * n**-0.25) for n in (100, 200, 400)])
        assert fit.amplitude_A == pytest.approx(3, abs=1e-10)
        assert fit.exponent_gamma == pytest.approx(0.25, abs=1e-12)
        assert fit.rms_log_residual <= 1e-12
        assert len(fit.points) == 3

    @given(st.floats(0.1, 10), st.floats(-1, 1), st.floats(0.01, 100))
    def test_scale_equivariance(self, amp, gamma, c):
        rng = np.random.default_rng(0)
        ns = [250, 500, 1000, 2000]
        pts = [(n, amp * n**-gamma * np.exp(0.05 * rng.standard_normal())) for n in ns]
        a = power_law_fit(pts)
        b = power_law_fit([(n, c * r) for n, r in pts])
        assert b.amplitude_A == pytest.approx(c * a.amplitude_A, rel=1e-9)
        assert b.exponent_gamma == pytest.approx(a.exponent_gamma, abs=1e-9)

    def test_too_few_points(self):
        with pytest.raises(InvalidParameterError):
            power_law_fit([(100, 0.5), (200, 0.4)])

    def test_nonpositive(self):
        with pytest.raises(InvalidParameterError):
            power_law_fit([(100, 0.5), (200, 0.0), (400, 0.3)])


class TestScan:
    def test_dip_near_two(self):
        grid = np.round(np.arange(1.0, 3.0001, 0.05), 10)
        curve = rmax_scan(0.0, 600, grid)
        assert len(curve.peaks) == len(grid) and not curve.errors
        assert abs(curve.lambdas[curve.argmin()] - 2.0) <= 0.1 + 1e-12
        vals = curve.r_max_values
        assert np.all((vals >= 0) & (vals <= 1 + 1e-10))

    def test_dip_alpha07(self):
        grid = np.linspace(0.1, 0.4, 31)
        curve = rmax_scan(0.7, 600, grid)
        assert abs(curve.lambdas[curve.argmin()] - 0.25) <= 0.05

    @pytest.mark.parametrize("lam", [1.5, 2.5])
    def test_size_independent_away_from_dip(self, lam):
        assert abs(rmax_at(0.0, 600, lam).r_max - rmax_at(0.0, 2500, lam).r_max) <= 0.05

    def test_grid_validation(self):
        with pytest.raises(InvalidParameterError):
            rmax_scan(0.0, 100, [])
        with pytest.raises(InvalidParameterError):
            rmax_scan(0.0, 100, [2.0, 1.0])

    def test_failed_points_are_marked(self, monkeypatch):
        import esqpt_decoherence.scaling as sc
        from esqpt_decoherence.errors import NoPeakError
        real = sc.rmax_at

        def flaky(alpha, n, lam, *a, **k):
            if lam == 1.5:
                raise NoPeakError("boom")
            return real(alpha, n, lam, *a, **k)

        monkeypatch.setattr(sc, "rmax_at", flaky)
        curve = sc.rmax_scan(0.0, 200, [1.0, 1.5, 2.0])
        assert curve.peaks[1] is None and curve.errors == [(1, "boom")]
        assert np.isnan(curve.r_max_values[1])


class TestDip:
    def test_meanfield_bracket(self):
        assert meanfield_bracket(0.0) == pytest.approx((1.5, 2.5))
        assert meanfield_bracket(0.4) == pytest.approx((0.75, 1.25))

    def test_monotonic_bracket_raises(self):
        with pytest.raises(BracketingError):
            locate_dip(0.0, 400, (0.5, 1.2))

    def test_evaluation_budget(self):
        dip = find_dip(0.0, 600, (1.5, 2.5))
        assert dip.evaluations <= 20
        assert abs(dip.lam - 2.0) <= 0.15

    def test_sharpening_and_convergence(self):
        dips = {n: find_dip(0.0, n, (1.5, 2.5)) for n in (600, 1200, 2500)}
        big = dips[2500]
        assert big.peak.r_max < rmax_at(0.0, 600, big.lam).r_max
        dist = [abs(dips[n].lam - 2.0) for n in (600, 1200, 2500)]
        assert dist[0] > dist[1] > dist[2]
