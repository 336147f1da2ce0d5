import math

import numpy as np
import pytest

from axiclone import (Belt, Brosseau, Delta, DeltaPair, HenyeyGreenstein,
                      MomentPair, Uniform, VonMisesFisher)


def random_feasible_moments(rng) -> MomentPair:
    """Uniform draw from the (a1, a2) feasibility region."""
    a1 = rng.uniform(-1.0, 1.0)
    a2 = rng.uniform((3 * a1 * a1 - 1) / 2, 1.0)
    return MomentPair(a1, a2)


def random_distribution(rng, density_only: bool = False):
    """One random instance of a built-in kind, parameters in range."""
    kinds = ["uniform", "vmf", "brosseau", "hg", "belt"]
    if not density_only:
        kinds += ["delta", "deltapair"]
    kind = kinds[rng.integers(len(kinds))]
    if kind == "uniform":
        return Uniform()
    if kind == "vmf":
        return VonMisesFisher(kappa=rng.uniform(-8.0, 8.0))
    if kind == "brosseau":
        P = rng.uniform(0.05, 0.95)
        return Brosseau(P=P, mu=rng.uniform(-P, P))
    if kind == "hg":
        return HenyeyGreenstein(h=rng.uniform(-0.9, 0.9))
    if kind == "belt":
        t1 = rng.uniform(0.0, math.pi - 0.2)
        return Belt(theta1=t1, theta2=rng.uniform(t1 + 0.1, math.pi))
    if kind == "delta":
        return Delta(theta=rng.uniform(0.0, math.pi))
    return DeltaPair(theta=rng.uniform(0.0, math.pi))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
