import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from bma import (
    RingSpec,
    YeohCoeffs,
    free_membrane_volume,
    inflated_thickness,
    integration_angle,
    invariant_i1,
    perimeter,
    stretch,
    yeoh_energy_density,
)


def perimeter_oracle(a_d, c_d, upper):
    """High-precision independent quadrature of the ellipse arc integrand."""
    mpmath.mp.dps = 30
    f = lambda t: mpmath.sqrt(a_d ** 2 * mpmath.sin(t) ** 2 + c_d ** 2 * mpmath.cos(t) ** 2)
    return float(mpmath.quad(f, [0, upper]))


class TestIntegrationAngle:
    def test_singular_limit(self):
        assert integration_angle(5e-3, 4e-3, 4e-3) == math.pi / 2

    def test_direct(self):
        assert integration_angle(5e-3, 6e-3, 4e-3) == pytest.approx(math.atan(2.5), rel=1e-15)

    def test_vanishing_ring(self):
        assert integration_angle(1e-12, 6e-3, 4e-3) == pytest.approx(0.0, abs=1e-9)

    def test_invalid_radius(self):
        with pytest.raises(ValueError):
            integration_angle(0.0, 6e-3, 4e-3)


class TestPerimeter:
    def test_quarter_circle(self):
        R = 3e-3
        L = perimeter(R, R, R, math.pi / 2)  # h3 = c_d: lower branch
        assert L == pytest.approx(math.pi * R / 2, rel=1e-10)

    def test_elliptic_value(self):
        # equals the complete elliptic integral 2 E(m=3/4); frozen from the
        # independent high-precision oracle
        L = perimeter(2.0, 1.0, 0.5, math.pi / 2)
        assert L == pytest.approx(2.4221120551369193, rel=1e-10)
        assert perimeter_oracle(2.0, 1.0, math.pi / 2) == pytest.approx(L, rel=1e-10)

    def test_circular_upper_branch(self):
        R = 3e-3
        # h3 > c_d: arc over pi - pi/4
        L = perimeter(R, R, 2 * R, math.pi / 4)
        assert L == pytest.approx(3 * math.pi * R / 4, rel=1e-10)

    def test_oracle_grid_both_branches(self):
        for a_d in (0.5, 1.0, 2.0):
            for c_d in (0.3, 1.0, 1.7):
                for theta1 in (0.2, 0.9, math.pi / 2):
                    for h3 in (0.5 * c_d, 1.5 * c_d):
                        upper = math.pi - theta1 if h3 > c_d else theta1
                        got = perimeter(a_d, c_d, h3, theta1)
                        assert got == pytest.approx(
                            perimeter_oracle(a_d, c_d, upper), rel=1e-8)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            perimeter(-1.0, 1.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            perimeter(1.0, 1.0, 1.0, 2.0)


class TestStretch:
    def test_identity(self):
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        assert stretch(5e-3, ring) == 1.0

    def test_hemisphere(self):
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        assert stretch(math.pi * ring.r / 2, ring) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_doubling(self):
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        assert stretch(10e-3, ring) == 2.0


class TestInvariant:
    def test_reference(self):
        assert invariant_i1(1.0) == 3.0

    def test_values(self):
        assert invariant_i1(2.0) == 5.0
        assert invariant_i1(math.pi / 2) == pytest.approx(3.7406406450075025, rel=1e-12)

    @given(st.floats(min_value=0.5, max_value=4.0))
    def test_minimum_at_one(self, lam):
        assert invariant_i1(lam) >= 3.0
        if lam != 1.0:
            assert invariant_i1(lam) > 3.0


class TestYeohEnergy:
    def test_zero_at_reference(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            coeffs = YeohCoeffs(*rng.uniform(-1e5, 1e5, 6))
            assert yeoh_energy_density(1.0, coeffs) == 0.0

    def test_first_order_term(self):
        # n=1 term only: W = 2 (lam - lam^-2) C_1, checked against a
        # symbolic evaluation
        import sympy
        lam_s = sympy.Rational(12, 10)
        w_sym = float(2 * (lam_s - lam_s ** -2) * 1e5)
        got = yeoh_energy_density(1.2, YeohCoeffs(c1=1e5))
        assert got == pytest.approx(w_sym, rel=1e-12)
        assert got == pytest.approx(1.0111111111e5, rel=1e-9)

    def test_second_order_vanishes_at_reference(self):
        assert yeoh_energy_density(1.0, YeohCoeffs(c2=1e5)) == 0.0

    def test_symbolic_full_sum(self):
        import sympy
        lam_v = 1.7
        coeffs = YeohCoeffs(1e4, 2e3, 3e2, 40.0, 5.0, 0.6)
        lam = sympy.Float(lam_v, 30)
        i1 = lam ** 2 + 2 / lam
        w = sum(2 * (lam - lam ** -2) * n * c * (i1 - 3) ** (n - 1)
                for n, c in enumerate(coeffs.as_tuple(), start=1))
        assert yeoh_energy_density(lam_v, coeffs) == pytest.approx(float(w), rel=1e-12)

    @given(st.floats(min_value=0.8, max_value=3.0))
    def test_linear_in_coefficients(self, lam):
        coeffs = YeohCoeffs(1e4, 2e3, 3e2)
        w1 = yeoh_energy_density(lam, coeffs)
        w2 = yeoh_energy_density(lam, coeffs.scaled(2.0))
        assert w2 == pytest.approx(2 * w1, rel=1e-12, abs=1e-12)


class TestThickness:
    def test_no_stretch(self):
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        assert inflated_thickness(ring, ring.r) == ring.t_i

    def test_direct(self):
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        assert inflated_thickness(ring, 10e-3) == pytest.approx(0.125e-3, rel=1e-12)

    def test_long_arc_limit(self):
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        assert inflated_thickness(ring, 1e3) < 1e-12

    @given(st.floats(min_value=1e-3, max_value=1.0))
    def test_incompressibility_identity(self, arc):
        # t_m * lambda^2 = t_i exactly
        ring = RingSpec(r=5e-3, t_i=0.5e-3)
        lam = stretch(arc, ring)
        t_m = inflated_thickness(ring, arc)
        assert t_m * lam ** 2 == pytest.approx(ring.t_i, rel=1e-12)


class TestFreeMembraneVolume:
    def test_no_contact(self):
        v_fm, clamped = free_membrane_volume(39.27e-9, 0.0, 0.125e-3)
        assert v_fm == 39.27e-9 and not clamped

    def test_direct(self):
        v_fm, clamped = free_membrane_volume(39.2699082e-9, 2.307e-3, 0.125e-3)
        want = 39.2699082e-9 - (2.307e-3) ** 2 * math.pi * 0.125e-3
        assert v_fm == pytest.approx(want, rel=1e-9)
        assert not clamped

    def test_clamp_with_flag(self):
        v_fm, clamped = free_membrane_volume(1e-9, 1.0, 1.0)
        assert v_fm == 0.0 and clamped
