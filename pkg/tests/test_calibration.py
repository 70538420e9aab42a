import numpy as np
import pytest

from bma import (
    IllConditioned,
    InsufficientData,
    OutOfRange,
    evaluate_height,
    fit_height_poly,
)

# an arbitrary degree-7 polynomial over normalized volume, heights in meters
GEN_COEFFS = (2e-3, 5e-3, -1e-3, 3e-3, -2e-3, 1e-3, 0.5e-3, -0.2e-3)


def gen_height(v, v_scale):
    x = v / v_scale
    return sum(c * x ** i for i, c in enumerate(GEN_COEFFS))


def make_samples(v_scale=1e-6, n=25, delta=0.0):
    vols = np.linspace(0.05 * v_scale, v_scale, n)
    inflate = [(v, gen_height(v, v_scale) + delta, "inflate") for v in vols]
    deflate = [(v, gen_height(v, v_scale) - delta, "deflate") for v in vols]
    return inflate + deflate


class TestFit:
    def test_degree7_recovery(self):
        fit = fit_height_poly(make_samples(), degree=7)
        for v in np.linspace(0.06e-6, 0.99e-6, 37):
            assert evaluate_height(fit, v) == pytest.approx(
                gen_height(v, 1e-6), rel=1e-9)

    def test_constant_heights(self):
        vols = np.linspace(0.1e-6, 1e-6, 20)
        samples = [(v, 4e-3, "inflate") for v in vols]
        fit = fit_height_poly(samples, degree=7)
        for v in np.linspace(0.1e-6, 1e-6, 11):
            assert evaluate_height(fit, v) == pytest.approx(4e-3, rel=1e-9)

    def test_hysteresis_symmetry(self):
        # symmetric inflate/deflate offsets cancel in the mean
        fit_sym = fit_height_poly(make_samples(delta=0.3e-3), degree=7)
        fit_ref = fit_height_poly(make_samples(delta=0.0), degree=7)
        for v in np.linspace(0.06e-6, 0.99e-6, 19):
            assert evaluate_height(fit_sym, v) == pytest.approx(
                evaluate_height(fit_ref, v), rel=1e-9)

    def test_insufficient_data(self):
        vols = np.linspace(0.1e-6, 1e-6, 5)
        samples = [(v, 4e-3, "inflate") for v in vols]
        with pytest.raises(InsufficientData):
            fit_height_poly(samples, degree=7)

    def test_ill_conditioned(self):
        # volumes clustered far from zero relative to their spread make the
        # normalized Vandermonde explode
        vols = np.linspace(0.9999e-6, 1e-6, 30)
        samples = [(v, 4e-3, "inflate") for v in vols]
        with pytest.raises(IllConditioned):
            fit_height_poly(samples, degree=7)

    def test_negative_volume_rejected(self):
        with pytest.raises(ValueError):
            fit_height_poly([(-1e-9, 4e-3, "inflate")] * 10, degree=1)

    def test_nesting_property(self):
        # least-squares residual never improves when the degree drops
        rng = np.random.default_rng(11)
        vols = np.linspace(0.05e-6, 1e-6, 30)
        heights = gen_height(vols, 1e-6) + rng.normal(0, 1e-5, vols.size)
        samples = [(v, h, "inflate") for v, h in zip(vols, heights)]

        def residual(degree):
            fit = fit_height_poly(samples, degree=degree)
            pred = np.array([evaluate_height(fit, v) for v in vols])
            return np.sum((pred - heights) ** 2)

        res = [residual(d) for d in range(1, 8)]
        assert all(b <= a + 1e-18 for a, b in zip(res, res[1:]))

    def test_normalization_invariance(self):
        fit_a = fit_height_poly(make_samples(v_scale=1e-6), degree=7)
        fit_b = fit_height_poly(make_samples(v_scale=1e-3), degree=7)
        for x in np.linspace(0.06, 0.99, 15):
            assert evaluate_height(fit_a, x * 1e-6) == pytest.approx(
                evaluate_height(fit_b, x * 1e-3), rel=1e-9)


class TestEvaluate:
    def test_identity_map(self):
        vols = np.linspace(0.0, 1.0, 20)
        samples = [(v, v, "inflate") for v in vols]
        fit = fit_height_poly(samples, degree=7)
        assert evaluate_height(fit, 0.5) == pytest.approx(0.5, rel=1e-9)

    def test_out_of_range(self):
        fit = fit_height_poly(make_samples(), degree=7)
        with pytest.raises(OutOfRange):
            evaluate_height(fit, 0.01e-6)
        with pytest.raises(OutOfRange):
            evaluate_height(fit, 1.5e-6)

    def test_range_endpoints_allowed(self):
        fit = fit_height_poly(make_samples(), degree=7)
        evaluate_height(fit, fit.v_min)
        evaluate_height(fit, fit.v_max)
