"""Axisymmetric qubit ensembles on the Bloch sphere and their Legendre moments.

Every density-backed kind is stored through its one-dimensional marginal
g(x) in x = cos(theta), normalised so that the integral over [-1, 1] is 1.
The two leading Legendre moments

    a1 = E[P1(x)] = E[x],        a2 = E[P2(x)] = E[(3 x^2 - 1) / 2]

fully determine the optimal symmetric 1->2 cloner for the ensemble, so this
module provides closed forms where they exist and adaptive Gauss-Legendre
quadrature otherwise.  Point-mass kinds (single and mirror-pair delta rings)
carry no density and expose their moments through weighted support points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, InfeasibleMomentsError, UnsupportedKindError
from .quadrature import integrate

__all__ = [
    "MomentPair", "AxisDistribution", "Uniform", "VonMisesFisher", "Brosseau",
    "HenyeyGreenstein", "Delta", "DeltaPair", "Belt", "Tabulated",
    "legendre_poly", "marginal_density", "moments", "quadrature_moments",
    "normalization_integral", "brosseau_integral", "validate_moments",
    "load_tabulated", "spec_string",
]

LEGENDRE_MAX_DEGREE = 64

# Slack absorbing quadrature round-off when checking moment feasibility.
FEASIBILITY_TOL = 1e-9


class MomentPair(NamedTuple):
    a1: float
    a2: float


def legendre_poly(n: int, x):
    """Legendre polynomial P_n(x) via (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.

    Accepts scalars or arrays; degree is capped at LEGENDRE_MAX_DEGREE and
    |x| must not exceed 1.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    if n > LEGENDRE_MAX_DEGREE:
        raise DomainError(f"degree {n} exceeds cap {LEGENDRE_MAX_DEGREE}")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("Legendre argument outside [-1, 1]")
    p_prev = np.ones_like(xa)
    if n == 0:
        return p_prev if xa.ndim else float(p_prev)
    p = xa.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * xa * p - k * p_prev) / (k + 1), p
    return p if xa.ndim else float(p)


def validate_moments(m, tol: float = FEASIBILITY_TOL) -> bool:
    """True iff (a1, a2) can come from a distribution on [-1, 1].

    Requires |a1| <= 1, a2 <= 1 and the variance bound (2 a2 + 1)/3 >= a1^2,
    with ``tol`` slack so that quadrature round-off does not reject boundary
    cases such as point masses at the poles.
    """
    a1, a2 = m
    if not (math.isfinite(a1) and math.isfinite(a2)):
        return False
    return (abs(a1) <= 1 + tol and a2 <= 1 + tol
            and (2 * a2 + 1) / 3 >= a1 * a1 - tol)


@dataclass(frozen=True)
class AxisDistribution:
    """An axisymmetric ensemble of pure qubit states.

    ``axis`` holds the (vartheta, varphi) orientation of the symmetry axis in
    the global computational basis; all moment and density computations are
    frame independent and happen in the axis frame.
    """

    axis: tuple[float, float] = field(default=(0.0, 0.0), kw_only=True)

    has_density = True

    def density(self, x):
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the marginal is non-smooth (for quadrature)."""
        return ()

    def point_masses(self) -> list[tuple[float, float]]:
        raise UnsupportedKindError(
            f"{type(self).__name__} is density-backed; it has no point masses")

    def moment_pair(self) -> MomentPair:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(AxisDistribution):
    """Isotropic ensemble; marginal 1/2 on [-1, 1]."""

    def density(self, x):
        return np.full_like(np.asarray(x, dtype=float), 0.5)

    def moment_pair(self) -> MomentPair:
        return MomentPair(0.0, 0.0)


@dataclass(frozen=True)
class VonMisesFisher(AxisDistribution):
    """Spherical analogue of a Gaussian with concentration ``kappa``.

    Marginal kappa * exp(kappa x) / (2 sinh kappa); kappa < 0 concentrates
    around the antipode and kappa -> 0 recovers the uniform ensemble.
    """

    kappa: float = 0.0

    def density(self, x):
        x = np.asarray(x, dtype=float)
        k = self.kappa
        if abs(k) < 1e-12:
            return np.full_like(x, 0.5)
        if k < 0:
            k, x = -k, -x
        # exp(k(x-1)) form stays finite for large concentrations
        return k * np.exp(k * (x - 1.0)) / (1.0 - math.exp(-2.0 * k))

    def moment_pair(self) -> MomentPair:
        k = self.kappa
        if abs(k) < 1e-6:
            # series around 0; coth k - 1/k cancels catastrophically there
            return MomentPair(k / 3 - k ** 3 / 45, k * k / 15)
        a1 = 1.0 / math.tanh(k) - 1.0 / k
        # second moment from the half-integer Bessel recurrence
        a2 = 1.0 - 3.0 * a1 / k
        return MomentPair(a1, a2)


def _stokes_quadratic(x, P: float, mu: float):
    """1 + mu^2 - P^2 - 2 x mu + x^2 P^2, evaluated without cancellation.

    In completed-square form P^2 (x - mu/P^2)^2 + (1-P^2)(P^2-mu^2)/P^2 both
    terms are non-negative, so the value stays accurate to round-off even at
    the P -> 1 peak where the naive expansion loses eleven digits.
    """
    x = np.asarray(x, dtype=float)
    if P == 0.0:
        return np.ones_like(x)  # mu^2 <= P^2 forces mu = 0
    p2 = P * P
    return p2 * (x - mu / p2) ** 2 + (1 - p2) * (p2 - mu * mu) / p2


@dataclass(frozen=True)
class Brosseau(AxisDistribution):
    """Single-Stokes-parameter statistics of a Gaussian stochastic field.

    ``P`` is the degree of polarization, ``mu`` the mean normalised Stokes
    parameter; P^2 - mu^2 >= 0.  P -> 1 concentrates onto delta(x - mu), so
    P = 1 itself is rejected here and must be expressed as Delta.
    """

    P: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.P < 1.0:
            raise DomainError(
                f"P must lie in [0, 1) for a density (P=1 is a Delta), got {self.P}")
        if self.mu ** 2 > self.P ** 2:
            raise DomainError(f"require mu^2 <= P^2, got P={self.P}, mu={self.mu}")

    def density(self, x):
        x = np.asarray(x, dtype=float)
        P, mu = self.P, self.mu
        quad = _stokes_quadratic(x, P, mu)
        return (1 - P * P) * (1 - mu * x) / (2 * quad ** 1.5)

    def moment_pair(self) -> MomentPair:
        P, mu = self.P, self.mu
        i1 = brosseau_integral(1, P, mu)
        i2 = brosseau_integral(2, P, mu)
        i3 = brosseau_integral(3, P, mu)
        a1 = 0.5 * (1 - P * P) * (i1 - mu * i2)
        a2 = 0.75 * (1 - P * P) * (i2 - mu * i3) - 0.5
        return MomentPair(a1, a2)


@dataclass(frozen=True)
class HenyeyGreenstein(AxisDistribution):
    """One-parameter scattering phase function with moments a_n = h^n."""

    h: float = 0.0

    def __post_init__(self):
        if not -1.0 < self.h < 1.0:
            raise DomainError(f"anisotropy must satisfy |h| < 1, got {self.h}")

    def density(self, x):
        x = np.asarray(x, dtype=float)
        h = self.h
        return 0.5 * (1 - h * h) / (1 + h * h - 2 * h * x) ** 1.5

    def moment_pair(self) -> MomentPair:
        return MomentPair(self.h, self.h * self.h)


def _check_polar(value: float, name: str) -> None:
    if not 0.0 <= value <= math.pi:
        raise DomainError(f"{name} must lie in [0, pi], got {value}")


@dataclass(frozen=True)
class Delta(AxisDistribution):
    """All states on the latitude ring theta = vartheta (unknown azimuth)."""

    theta: float = 0.0

    has_density = False

    def __post_init__(self):
        _check_polar(self.theta, "theta")

    def density(self, x):
        raise UnsupportedKindError("Delta carries no density; use its moments")

    def point_masses(self) -> list[tuple[float, float]]:
        return [(math.cos(self.theta), 1.0)]

    def moment_pair(self) -> MomentPair:
        c = math.cos(self.theta)
        return MomentPair(c, legendre_poly(2, c))


@dataclass(frozen=True)
class DeltaPair(AxisDistribution):
    """Equal-weight mirror latitudes theta and pi - theta."""

    theta: float = 0.0

    has_density = False

    def __post_init__(self):
        _check_polar(self.theta, "theta")

    def density(self, x):
        raise UnsupportedKindError("DeltaPair carries no density; use its moments")

    def point_masses(self) -> list[tuple[float, float]]:
        c = math.cos(self.theta)
        return [(c, 0.5), (-c, 0.5)]

    def moment_pair(self) -> MomentPair:
        # P1 cancels between the mirror rings, P2 is even
        return MomentPair(0.0, legendre_poly(2, math.cos(self.theta)))


@dataclass(frozen=True)
class Belt(AxisDistribution):
    """States uniform on the band between latitudes theta1 < theta2."""

    theta1: float = 0.0
    theta2: float = math.pi

    def __post_init__(self):
        _check_polar(self.theta1, "theta1")
        _check_polar(self.theta2, "theta2")
        if not self.theta1 < self.theta2:
            raise DomainError("require theta1 < theta2")

    def density(self, x):
        x = np.asarray(x, dtype=float)
        hi = math.cos(self.theta1)
        lo = math.cos(self.theta2)
        inside = (x >= lo) & (x <= hi)
        return np.where(inside, 1.0 / (hi - lo), 0.0)

    def breakpoints(self) -> tuple[float, ...]:
        return (math.cos(self.theta2), math.cos(self.theta1))

    def moment_pair(self) -> MomentPair:
        hi = math.cos(self.theta1)
        lo = math.cos(self.theta2)
        a1 = 0.5 * (hi + lo)
        # antiderivative of P2 is (x^3 - x)/2
        a2 = 0.5 * (hi * hi + hi * lo + lo * lo - 1.0)
        return MomentPair(a1, a2)


@dataclass(frozen=True)
class Tabulated(AxisDistribution):
    """Piecewise-linear density through samples (x_i, g_i), renormalised."""

    xs: tuple[float, ...] = ()
    gs: tuple[float, ...] = ()
    source: str | None = None

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        gs = np.asarray(self.gs, dtype=float)
        if xs.size < 2 or xs.size != gs.size:
            raise DomainError("tabulated density needs >= 2 matched samples")
        if np.any(np.abs(xs) > 1.0):
            raise DomainError("tabulated abscissae must lie in [-1, 1]")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("tabulated abscissae must be strictly increasing")
        if np.any(gs < 0):
            raise DomainError("tabulated density values must be non-negative")
        raw = float(np.trapezoid(gs, xs))
        if raw <= 0:
            raise DomainError("tabulated density integrates to zero")
        if abs(raw - 1.0) > 1e-3:
            warnings.warn(
                f"tabulated density integrates to {raw:.6g}; renormalising",
                stacklevel=2)
        object.__setattr__(self, "xs", tuple(float(v) for v in xs))
        object.__setattr__(self, "gs", tuple(float(v) for v in gs / raw))

    def density(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.gs,
                         left=0.0, right=0.0)

    def breakpoints(self) -> tuple[float, ...]:
        return self.xs

    def moment_pair(self) -> MomentPair:
        # linear density times P2 is cubic, so per-segment Gauss is exact
        nodes, wts = leggauss(8)
        xs = np.asarray(self.xs)
        a1 = a2 = 0.0
        for i in range(xs.size - 1):
            lo, hi = xs[i], xs[i + 1]
            half = 0.5 * (hi - lo)
            pts = 0.5 * (hi + lo) + half * nodes
            g = self.density(pts)
            a1 += half * float(np.dot(wts, g * pts))
            a2 += half * float(np.dot(wts, g * legendre_poly(2, pts)))
        return MomentPair(a1, a2)


def marginal_density(dist: AxisDistribution, x):
    """Marginal g(x) in x = cos(theta), normalised to unit integral.

    Point-mass kinds raise UnsupportedKindError; consumers must use the
    moment interface for those.
    """
    if not dist.has_density:
        raise UnsupportedKindError(
            f"{type(dist).__name__} carries no density; use moments()")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("cos(theta) argument outside [-1, 1]")
    out = dist.density(xa)
    return out if xa.ndim else float(out)


def moments(dist: AxisDistribution) -> MomentPair:
    """Leading Legendre moments (a1, a2), checked for feasibility."""
    m = MomentPair(*dist.moment_pair())
    if not validate_moments(m):
        raise InfeasibleMomentsError(
            f"moments {m} violate the second-moment bound (corrupt input?)")
    return m


def integration_segments(dist: AxisDistribution) -> list[tuple[float, float]]:
    """[-1, 1] split at the marginal's non-smooth points."""
    cuts = sorted(x for x in dist.breakpoints() if -1.0 < x < 1.0)
    edges = [-1.0] + cuts + [1.0]
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)
            if edges[i + 1] > edges[i]]


def integrate_marginal(dist: AxisDistribution, f, tol: float = 1e-10):
    """Integrate a (possibly array-valued) function over the marginal support."""
    parts = [integrate(f, a, b, tol=tol) for a, b in integration_segments(dist)]
    return sum(parts[1:], start=parts[0])


def quadrature_moments(dist: AxisDistribution, tol: float = 1e-10) -> MomentPair:
    """(a1, a2) by direct integration of the marginal; cross-check path."""
    if not dist.has_density:
        masses = dist.point_masses()
        a1 = sum(w * x for x, w in masses)
        a2 = sum(w * legendre_poly(2, x) for x, w in masses)
        return MomentPair(a1, a2)

    def f(x):
        g = dist.density(x)
        return np.stack([g * x, g * legendre_poly(2, x)], axis=-1)

    a1, a2 = integrate_marginal(dist, f, tol=tol)
    return MomentPair(float(a1), float(a2))


def normalization_integral(dist: AxisDistribution, tol: float = 1e-10) -> float:
    """Total mass of the marginal (or of the point masses); should be 1."""
    if not dist.has_density:
        return float(sum(w for _, w in dist.point_masses()))
    return float(integrate_marginal(dist, lambda x: dist.density(x), tol=tol))


def brosseau_integral(n: int, P: float, mu: float) -> float:
    """Moment integral of x^n against the unnormalised Stokes kernel.

    The quadratic under the 3/2 power has discriminant
    4 (mu^2 - P^2)(1 - P^2) <= 0, so the integrand is finite on [-1, 1]
    whenever mu^2 <= P^2 < 1.
    """
    if n not in (1, 2, 3):
        raise DomainError(f"n must be 1, 2 or 3, got {n}")
    if not 0.0 <= P < 1.0:
        raise DomainError(f"require 0 <= P < 1, got {P}")
    if mu ** 2 > P ** 2:
        raise DomainError(f"require mu^2 <= P^2, got P={P}, mu={mu}")

    def f(x):
        return x ** n / _stokes_quadratic(x, P, mu) ** 1.5

    return float(integrate(f, -1.0, 1.0))


def load_tabulated(path: str) -> Tabulated:
    """Read a two-column CSV (cos(theta), g); an optional header is skipped."""
    xs: list[float] = []
    gs: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise DomainError(f"{path}:{lineno}: expected two columns")
            try:
                x, g = float(parts[0]), float(parts[1])
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise DomainError(f"{path}:{lineno}: non-numeric row") from None
            xs.append(x)
            gs.append(g)
    return Tabulated(xs=tuple(xs), gs=tuple(gs), source=path)


def spec_string(dist: AxisDistribution) -> str:
    """Canonical textual form accepted back by the CLI parser."""
    if isinstance(dist, Uniform):
        return "uniform"
    if isinstance(dist, VonMisesFisher):
        return f"vmf:kappa={dist.kappa!r}"
    if isinstance(dist, Brosseau):
        return f"brosseau:P={dist.P!r},mu={dist.mu!r}"
    if isinstance(dist, HenyeyGreenstein):
        return f"hg:h={dist.h!r}"
    if isinstance(dist, Delta):
        return f"delta:theta={dist.theta!r}"
    if isinstance(dist, DeltaPair):
        return f"deltapair:theta={dist.theta!r}"
    if isinstance(dist, Belt):
        return f"belt:theta1={dist.theta1!r},theta2={dist.theta2!r}"
    if isinstance(dist, Tabulated):
        if dist.source is None:
            raise UnsupportedKindError("tabulated density has no source path")
        return f"table:{dist.source}"
    raise UnsupportedKindError(f"unknown distribution {type(dist).__name__}")
