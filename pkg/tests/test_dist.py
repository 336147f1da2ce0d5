import math

import numpy as np
import pytest

from axiclone import (Belt, Brosseau, Delta, DeltaPair, DomainError,
                      HenyeyGreenstein, Tabulated, Uniform, UnsupportedKindError,
                      VonMisesFisher, brosseau_integral, legendre_poly,
                      load_tabulated, marginal_density, moments,
                      quadrature_moments, validate_moments)
from axiclone.dist import normalization_integral

from conftest import random_distribution


def simpson_brosseau_integral(n, P, mu, npts=1_000_001):
    """Independent fixed-grid oracle: composite Simpson on 1e6 points."""
    x = np.linspace(-1.0, 1.0, npts)
    f = x ** n / (1 + mu ** 2 - P ** 2 - 2 * x * mu + x ** 2 * P ** 2) ** 1.5
    h = x[1] - x[0]
    w = np.ones(npts)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return h / 3 * float(np.dot(w, f))


class TestLegendre:
    def test_degree_zero_is_one(self):
        assert legendre_poly(0, 0.37) == 1.0

    def test_degree_one_is_identity(self):
        assert legendre_poly(1, 0.5) == 0.5

    def test_degree_two(self):
        assert legendre_poly(2, 0.5) == pytest.approx(-0.125, abs=1e-15)

    def test_matches_numpy_legendre_series(self):
        xs = np.linspace(-1, 1, 41)
        for n in range(11):
            coeffs = np.zeros(n + 1)
            coeffs[n] = 1.0
            expected = np.polynomial.legendre.legval(xs, coeffs)
            assert np.allclose(legendre_poly(n, xs), expected, atol=1e-13)

    def test_bounded_by_one(self):
        xs = np.linspace(-1, 1, 101)
        for n in (3, 7, 20, 64):
            assert np.all(np.abs(legendre_poly(n, xs)) <= 1 + 1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            legendre_poly(2, 1.0001)
        with pytest.raises(DomainError):
            legendre_poly(65, 0.0)
        with pytest.raises(DomainError):
            legendre_poly(-1, 0.0)


class TestMarginalDensity:
    def test_uniform_is_half(self):
        for x in (-1.0, -0.3, 0.0, 0.9):
            assert marginal_density(Uniform(), x) == 0.5

    def test_vmf_small_kappa_limit_is_uniform(self):
        xs = np.linspace(-1, 1, 11)
        assert np.allclose(marginal_density(VonMisesFisher(kappa=0.0), xs), 0.5)
        assert np.allclose(marginal_density(VonMisesFisher(kappa=1e-13), xs), 0.5)

    def test_brosseau_unpolarized_is_uniform(self):
        xs = np.linspace(-1, 1, 11)
        assert np.allclose(marginal_density(Brosseau(P=0.0, mu=0.0), xs), 0.5)

    def test_vmf_negative_kappa_mirrors(self):
        g_pos = marginal_density(VonMisesFisher(kappa=2.5), 0.7)
        g_neg = marginal_density(VonMisesFisher(kappa=-2.5), -0.7)
        assert g_pos == pytest.approx(g_neg, rel=1e-14)

    def test_belt_is_flat_on_band(self):
        belt = Belt(theta1=0.5, theta2=1.2)
        hi, lo = math.cos(0.5), math.cos(1.2)
        inside = marginal_density(belt, 0.5 * (hi + lo))
        assert inside == pytest.approx(1.0 / (hi - lo), rel=1e-14)
        assert marginal_density(belt, -0.9) == 0.0
        assert marginal_density(belt, 0.99) == 0.0

    def test_delta_kinds_have_no_density(self):
        with pytest.raises(UnsupportedKindError):
            marginal_density(Delta(theta=0.3), 0.0)
        with pytest.raises(UnsupportedKindError):
            marginal_density(DeltaPair(theta=0.3), 0.0)

    def test_domain_check(self):
        with pytest.raises(DomainError):
            marginal_density(Uniform(), 1.5)

    @pytest.mark.parametrize("dist", [
        Uniform(),
        VonMisesFisher(kappa=0.5),
        VonMisesFisher(kappa=-4.0),
        VonMisesFisher(kappa=25.0),
        Brosseau(P=0.6, mu=0.3),
        Brosseau(P=0.95, mu=-0.5),
        HenyeyGreenstein(h=0.3),
        HenyeyGreenstein(h=-0.7),
        Belt(theta1=0.4, theta2=2.0),
        Delta(theta=0.8),
        DeltaPair(theta=2.1),
    ])
    def test_normalization(self, dist):
        assert normalization_integral(dist) == pytest.approx(1.0, abs=1e-10)


class TestMoments:
    def test_uniform(self):
        assert moments(Uniform()) == (0.0, 0.0)

    def test_vmf_kappa_one_closed_form(self):
        a1, a2 = moments(VonMisesFisher(kappa=1.0))
        assert a1 == pytest.approx(0.3130352854993313, abs=1e-14)
        assert a2 == pytest.approx(0.0608941435020056, abs=1e-14)

    def test_vmf_closed_form_equals_quadrature(self):
        for kappa in (0.1, 0.5, 1.0, 5.0, 20.0):
            dist = VonMisesFisher(kappa=kappa)
            closed = moments(dist)
            quad = quadrature_moments(dist)
            assert closed.a1 == pytest.approx(quad.a1, abs=1e-8)
            assert closed.a2 == pytest.approx(quad.a2, abs=1e-8)

    def test_vmf_tiny_kappa_series(self):
        a1, a2 = moments(VonMisesFisher(kappa=1e-7))
        assert a1 == pytest.approx(1e-7 / 3, rel=1e-9)
        assert a2 == pytest.approx(1e-14 / 15, rel=1e-6)

    def test_vmf_odd_even_in_kappa(self):
        plus = moments(VonMisesFisher(kappa=2.0))
        minus = moments(VonMisesFisher(kappa=-2.0))
        assert minus.a1 == pytest.approx(-plus.a1, abs=1e-14)
        assert minus.a2 == pytest.approx(plus.a2, abs=1e-14)

    def test_deltapair_equator(self):
        a1, a2 = moments(DeltaPair(theta=math.pi / 2))
        assert a1 == 0.0
        assert a2 == pytest.approx(-0.5, abs=1e-14)

    def test_delta_moments(self):
        a1, a2 = moments(Delta(theta=0.8))
        c = math.cos(0.8)
        assert a1 == pytest.approx(c, abs=1e-15)
        assert a2 == pytest.approx((3 * c * c - 1) / 2, abs=1e-15)

    def test_brosseau_unpolarized(self):
        a1, a2 = moments(Brosseau(P=0.0, mu=0.0))
        assert abs(a1) <= 1e-10
        assert abs(a2) <= 1e-10

    def test_brosseau_matches_quadrature(self):
        dist = Brosseau(P=0.8, mu=0.5)
        closed = moments(dist)
        quad = quadrature_moments(dist)
        assert closed.a1 == pytest.approx(quad.a1, abs=1e-9)
        assert closed.a2 == pytest.approx(quad.a2, abs=1e-9)

    def test_brosseau_delta_concentration_limit(self):
        a1, a2 = moments(Brosseau(P=1 - 1e-4, mu=0.5))
        assert a1 == pytest.approx(0.5, abs=1e-2)
        assert a2 == pytest.approx(legendre_poly(2, 0.5), abs=2e-2)

    def test_henyey_greenstein_powers(self):
        for h in (0.3, -0.55, 0.8):
            quad = quadrature_moments(HenyeyGreenstein(h=h))
            assert quad.a1 == pytest.approx(h, abs=1e-8)
            assert quad.a2 == pytest.approx(h * h, abs=1e-8)

    def test_belt_closed_form_equals_quadrature(self):
        belt = Belt(theta1=0.5, theta2=1.2)
        closed = moments(belt)
        quad = quadrature_moments(belt)
        assert closed.a1 == pytest.approx(quad.a1, abs=1e-10)
        assert closed.a2 == pytest.approx(quad.a2, abs=1e-10)

    def test_feasibility_across_parameter_sweep(self, rng):
        for _ in range(100):
            assert validate_moments(moments(random_distribution(rng)))


class TestBrosseauIntegral:
    def test_odd_vanishes_at_origin(self):
        assert brosseau_integral(1, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_square_at_origin(self):
        assert brosseau_integral(2, 0.0, 0.0) == pytest.approx(2 / 3, abs=1e-12)

    def test_against_simpson_oracle(self):
        adaptive = brosseau_integral(3, 0.5, 0.25)
        oracle = simpson_brosseau_integral(3, 0.5, 0.25)
        assert adaptive == pytest.approx(oracle, abs=1e-9)

    def test_sharp_peak_converges(self):
        # P -> 1 concentrates the kernel; adaptive halving must keep up
        val = brosseau_integral(2, 0.999, 0.5)
        assert math.isfinite(val) and val > 0

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            brosseau_integral(4, 0.5, 0.0)
        with pytest.raises(DomainError):
            brosseau_integral(2, 1.0, 0.0)
        with pytest.raises(DomainError):
            brosseau_integral(2, 0.3, 0.5)


class TestValidateMoments:
    def test_uniform_feasible(self):
        assert validate_moments((0.0, 0.0)) is True

    def test_pole_delta_feasible(self):
        assert validate_moments((1.0, 1.0)) is True

    def test_violating_second_moment(self):
        assert validate_moments((0.9, -0.5)) is False

    def test_nan_rejected(self):
        assert validate_moments((math.nan, 0.0)) is False


class TestParameterValidation:
    def test_brosseau_rejects_full_polarization(self):
        with pytest.raises(DomainError):
            Brosseau(P=1.0, mu=0.5)

    def test_brosseau_rejects_mu_above_P(self):
        with pytest.raises(DomainError):
            Brosseau(P=0.4, mu=0.5)

    def test_hg_range(self):
        with pytest.raises(DomainError):
            HenyeyGreenstein(h=1.0)

    def test_belt_ordering(self):
        with pytest.raises(DomainError):
            Belt(theta1=1.2, theta2=0.5)

    def test_polar_range(self):
        with pytest.raises(DomainError):
            Delta(theta=3.5)


class TestTabulated:
    def test_uniform_table(self):
        t = Tabulated(xs=(-1.0, 1.0), gs=(0.5, 0.5))
        a1, a2 = moments(t)
        assert a1 == pytest.approx(0.0, abs=1e-14)
        assert a2 == pytest.approx(0.0, abs=1e-14)
        assert normalization_integral(t) == pytest.approx(1.0, abs=1e-10)

    def test_renormalizes_with_warning(self):
        with pytest.warns(UserWarning, match="renormalising"):
            t = Tabulated(xs=(-1.0, 0.0, 1.0), gs=(1.0, 2.0, 1.0))
        assert normalization_integral(t) == pytest.approx(1.0, abs=1e-10)

    def test_moments_match_quadrature(self):
        xs = tuple(np.linspace(-1, 1, 41))
        gs = tuple(0.5 * (1 + 0.4 * x) for x in xs)
        t = Tabulated(xs=xs, gs=gs)
        closed = moments(t)
        quad = quadrature_moments(t)
        assert closed.a1 == pytest.approx(quad.a1, abs=1e-9)
        assert closed.a2 == pytest.approx(quad.a2, abs=1e-9)

    def test_requires_increasing_abscissae(self):
        with pytest.raises(DomainError):
            Tabulated(xs=(0.0, 0.0, 1.0), gs=(1.0, 1.0, 1.0))

    def test_rejects_negative_density(self):
        with pytest.raises(DomainError):
            Tabulated(xs=(-1.0, 1.0), gs=(1.0, -0.5))

    def test_csv_loader_with_header(self, tmp_path):
        path = tmp_path / "density.csv"
        path.write_text("cos_theta,g\n-1.0,0.5\n0.0,0.5\n1.0,0.5\n")
        t = load_tabulated(str(path))
        assert t.xs == (-1.0, 0.0, 1.0)
        assert moments(t).a1 == pytest.approx(0.0, abs=1e-14)

    def test_csv_loader_rejects_ragged_rows(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("-1.0,0.5,9\n1.0,0.5\n")
        with pytest.raises(DomainError):
            load_tabulated(str(path))
