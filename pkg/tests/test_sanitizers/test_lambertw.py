"""Unit tests for the lower Lambert W branch and the planar Laplace radius."""

import numpy as np
import pytest
from scipy.special import lambertw

from src.exceptions import LambertWDomainError, ValidationError
from src.sanitizers.lambertw import BRANCH_POINT, lambertw_m1, radial_cdf, radial_quantile


class TestLambertWM1:
    """Test suite for lambertw_m1."""

    def test_known_value(self):
        """Test a reference value."""
        assert lambertw_m1(-0.1) == pytest.approx(-3.577152063957297, abs=1e-12)

    def test_matches_scipy(self):
        """Test agreement with scipy across the domain."""
        z = -np.logspace(-300, -0.5, 200)
        expected = lambertw(z, k=-1).real

        np.testing.assert_allclose(lambertw_m1(z), expected, rtol=1e-10, atol=1e-12)

    def test_solves_defining_equation(self):
        """Test w * exp(w) = z and w <= -1."""
        z = np.linspace(BRANCH_POINT + 1e-6, -1e-6, 50)
        w = lambertw_m1(z)

        np.testing.assert_allclose(w * np.exp(w), z, rtol=1e-9, atol=1e-15)
        assert (w <= -1).all()

    def test_branch_point(self):
        """Test W(-1/e) = -1."""
        assert lambertw_m1(BRANCH_POINT) == -1.0

    def test_scalar_in_scalar_out(self):
        """Test scalars are returned as floats."""
        assert isinstance(lambertw_m1(-0.2), float)
        assert lambertw_m1(np.array([-0.2])).shape == (1,)

    @pytest.mark.parametrize("z", [0.0, 0.1, -0.5, np.nan])
    def test_domain(self, z):
        """Test values outside [-1/e, 0) raise LambertWDomainError."""
        with pytest.raises(LambertWDomainError):
            lambertw_m1(z)


class TestRadialLaw:
    """Test suite for radial_cdf and radial_quantile."""

    def test_quantile_inverts_cdf(self):
        """Test cdf(quantile(p)) = p."""
        p = np.linspace(0.0, 0.999, 40)
        r = radial_quantile(p, epsilon=0.01)

        np.testing.assert_allclose(radial_cdf(r, epsilon=0.01), p, atol=1e-9)

    def test_zero_quantile(self):
        """Test the 0-quantile is radius 0."""
        assert radial_quantile(0.0, epsilon=1.0) == pytest.approx(0.0, abs=1e-9)

    def test_scales_with_epsilon(self):
        """Test r scales as 1 / epsilon."""
        assert radial_quantile(0.5, 0.002) == pytest.approx(2 * radial_quantile(0.5, 0.004))

    def test_quantile_domain(self):
        """Test p = 1 has no finite radius."""
        with pytest.raises(LambertWDomainError):
            radial_quantile(1.0, epsilon=1.0)

    @pytest.mark.parametrize("func", [radial_cdf, radial_quantile])
    def test_epsilon_positive(self, func):
        """Test epsilon <= 0 is rejected."""
        with pytest.raises(ValidationError):
            func(0.5, 0.0)
