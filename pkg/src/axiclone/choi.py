"""Choi-matrix machinery: figure of merit, CPTP sampling, optimality checks.

A 1->2 qubit channel E is represented by its 8x8 Choi matrix on
(input x clone1 x clone2),

    chi = sum_ij |i><j| (x) E(|i><j|),      rho_out = Tr_in[chi (rho^T (x) 1)],

so chi is positive semidefinite with Tr_clones(chi) = 1 and Tr(chi) = 2.
The ensemble-average single-copy fidelity of the channel is the pairing
F = Tr(chi R) with the Hermitian merit operator

    R = 1/2 Int rho_in^T (x) (rho_in (x) 1 + 1 (x) rho_in) g ,

averaged over the input ensemble.  Optimality of the analytic cloner is
certified two ways: by Haar sampling of random CPTP maps and by direct
maximisation inside the symmetry-restricted Choi family the rotational and
swap commutation constraints allow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .dist import AxisDistribution, integrate_marginal, moments
from .errors import DomainError, NonHermitianError
from .optimal import ClonerParams, average_fidelity, optimal_angles
from .qsim import clone_isometry

__all__ = [
    "build_merit", "choi_from_params", "choi_fidelity", "random_cptp",
    "symmetry_blocks", "SymmetryBlocks", "constrained_maximize",
    "max_sampled_fidelity", "optimality_report", "block_basis",
    "choi_from_isometry", "partial_trace_input", "trace_out_clones",
]

_SQRT2 = math.sqrt(2.0)
_I2 = np.eye(2)

# Uniform azimuthal rule; the integrand carries harmonics up to e^{2 i phi},
# which a 16-node trapezoid integrates exactly.
_N_PHI = 16
_PHIS = 2 * math.pi * np.arange(_N_PHI) / _N_PHI


def _merit_kernel(x: np.ndarray) -> np.ndarray:
    """Azimuth-averaged merit integrand at cos(theta) = x, shape (..., 8, 8)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    c = np.sqrt((1 + x) / 2)          # cos(theta/2), theta in [0, pi]
    s = np.sqrt((1 - x) / 2)
    amp = np.empty(x.shape + (_N_PHI, 2), dtype=complex)
    amp[..., 0] = c[..., None]
    amp[..., 1] = s[..., None] * np.exp(1j * _PHIS)
    rho = amp[..., :, None] * amp.conj()[..., None, :]
    half = (np.einsum("...ij,kl->...ikjl", rho, _I2)
            + np.einsum("ij,...kl->...ikjl", _I2, rho)).reshape(x.shape + (_N_PHI, 4, 4))
    # contracting the phi axis performs the azimuthal sum; kron layout i*4+k
    kern = 0.5 * np.einsum("...pij,...pkl->...ikjl",
                           np.swapaxes(rho, -1, -2), half).reshape(x.shape + (8, 8))
    return kern / _N_PHI


def build_merit(dist: AxisDistribution, tol: float = 1e-10) -> np.ndarray:
    """Merit operator R of the ensemble; Hermitian with 0 <= R <= 1."""
    if dist.has_density:
        def f(x):
            return dist.density(x)[:, None, None] * _merit_kernel(x)

        r = integrate_marginal(dist, f, tol=tol)
    else:
        r = sum(w * _merit_kernel(np.array([x]))[0]
                for x, w in dist.point_masses())
    return 0.5 * (r + r.conj().T)


def choi_from_isometry(w: np.ndarray) -> np.ndarray:
    """Choi matrix of X -> Tr_env(W X W^dag) for an isometry W: C^2 -> C^4 (x) env."""
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[1] != 2 or w.shape[0] % 4:
        raise DomainError(f"expected a (4*env, 2) isometry, got {w.shape}")
    env = w.shape[0] // 4
    kraus = w.reshape(4, env, 2)
    chi = np.zeros((8, 8), dtype=complex)
    for e in range(env):
        # |v> = sum_i |i> (x) K_e |i>, laid out as index 4*i + out
        v = kraus[:, e, :].T.reshape(-1)
        chi += np.outer(v, v.conj())
    return chi


def choi_from_params(p: ClonerParams) -> np.ndarray:
    """Choi matrix of the analytic cloner (ancilla traced out).

    The isometry's row index (clone1, clone2, ancilla) already has the
    ancilla as the fastest axis, which is the environment layout
    choi_from_isometry expects.
    """
    return choi_from_isometry(clone_isometry(p))


def trace_out_clones(chi: np.ndarray) -> np.ndarray:
    """Partial trace over both clone factors; identity for a CPTP Choi."""
    return np.einsum("imjm->ij", np.asarray(chi).reshape(2, 4, 2, 4))


def partial_trace_input(chi: np.ndarray) -> np.ndarray:
    """Partial trace over the input factor (the average channel output)."""
    return np.einsum("imin->mn", np.asarray(chi).reshape(2, 4, 2, 4))


def _require_hermitian(m: np.ndarray, name: str, tol: float = 1e-10) -> None:
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise NonHermitianError(f"{name} deviates from Hermitian by {dev:.3e}")


def choi_fidelity(chi: np.ndarray, r: np.ndarray) -> float:
    """F = Tr(chi R); inputs must be Hermitian and the trace must be real."""
    chi = np.asarray(chi)
    r = np.asarray(r)
    if chi.shape != (8, 8) or r.shape != (8, 8):
        raise DomainError("both operators must be 8x8")
    _require_hermitian(chi, "chi")
    _require_hermitian(r, "merit operator")
    val = complex(np.trace(chi @ r))
    if abs(val.imag) > 1e-12:
        raise NonHermitianError(f"fidelity trace has imaginary part {val.imag:.3e}")
    return float(val.real)


def random_cptp(seed: int, env_dim: int = 1) -> np.ndarray:
    """Choi of a Haar-random channel: isometry C^2 -> C^4 (x) C^(2 env_dim).

    env_dim=1 reproduces the cloner's own shape (three-qubit isometry, the
    ancilla qubit traced out, Kraus rank 2); env_dim=4 reaches full rank 8.
    The isometry is the QR factor of a complex Gaussian matrix with the
    R diagonal phase-fixed, which makes it Haar uniform; deterministic per
    seed.
    """
    if env_dim not in (1, 2, 3, 4):
        raise DomainError(f"env_dim must be in 1..4, got {env_dim}")
    return choi_from_isometry(_random_isometry(seed, env_dim))


def _random_isometry(seed: int, env_dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rows = 8 * env_dim
    a = rng.standard_normal((rows, 2)) + 1j * rng.standard_normal((rows, 2))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d / np.abs(d)).conj()


def max_sampled_fidelity(r: np.ndarray, n_samples: int, seed: int = 0,
                         env_dims=(1, 2, 4)) -> float:
    """Largest Tr(chi R) over ``n_samples`` Haar channels per environment size.

    Uses the same per-seed construction as :func:`random_cptp`, so the sweep
    is reproducible sample by sample.  The maximum is a pure reduction, so
    the result does not depend on evaluation order.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    best = -math.inf
    for env in env_dims:
        for k in range(n_samples):
            w = _random_isometry(seed + k, env)
            kraus = w.reshape(4, -1, 2)
            v = kraus.transpose(1, 2, 0).reshape(kraus.shape[1], 8)
            f = float(np.real(np.einsum("ei,ij,ej->", v.conj(), r, v)))
            best = max(best, f)
    return best


_BLOCK_PAIRS = ((0, 1), (2, 3))


def block_basis() -> np.ndarray:
    """Orthonormal basis adapted to the rotation/swap symmetry.

    Columns: |000>, |1>|S+>, |111>, |0>|S+>, |1>|S->, |0>|S->, |011>, |100>,
    where |S+-> = (|01> +- |10>)/sqrt(2) lives on the clone pair.  Symmetric
    operators are block diagonal here: two 2x2 blocks on the first four
    vectors and four scalars on the rest.
    """
    e = np.eye(8)
    b = np.zeros((8, 8))
    b[:, 0] = e[:, 0b000]
    b[:, 1] = (e[:, 0b101] + e[:, 0b110]) / _SQRT2
    b[:, 2] = e[:, 0b111]
    b[:, 3] = (e[:, 0b001] + e[:, 0b010]) / _SQRT2
    b[:, 4] = (e[:, 0b101] - e[:, 0b110]) / _SQRT2
    b[:, 5] = (e[:, 0b001] - e[:, 0b010]) / _SQRT2
    b[:, 6] = e[:, 0b011]
    b[:, 7] = e[:, 0b100]
    return b


@dataclass(frozen=True)
class SymmetryBlocks:
    """Block content of an operator in the symmetry-adapted basis."""

    block1: np.ndarray          # on {|000>, |1>|S+>}
    block2: np.ndarray          # on {|111>, |0>|S+>}
    scalars: np.ndarray         # diag on (|1>|S->, |0>|S->, |011>, |100>)
    off_block_residual: float   # max |entry| outside the block pattern


def symmetry_blocks(m: np.ndarray) -> SymmetryBlocks:
    """Decompose an 8x8 Hermitian operator into its symmetry blocks."""
    m = np.asarray(m)
    if m.shape != (8, 8):
        raise DomainError("expected an 8x8 operator")
    _require_hermitian(m, "operator")
    b = block_basis()
    mb = b.T @ m @ b
    mask = np.ones((8, 8), dtype=bool)
    for i, j in _BLOCK_PAIRS:
        mask[i:j + 1, i:j + 1] = False
    for k in range(4, 8):
        mask[k, k] = False
    residual = float(np.max(np.abs(mb[mask]))) if mask.any() else 0.0
    return SymmetryBlocks(
        block1=mb[0:2, 0:2].copy(),
        block2=mb[2:4, 2:4].copy(),
        scalars=np.real(np.diagonal(mb)[4:8]).copy(),
        off_block_residual=residual,
    )


def _chi_symmetric(p: np.ndarray) -> np.ndarray:
    """Choi matrix of the symmetry-restricted family.

    Parameters (eta1, eta2, eta3, xi1, xi2, xi3, zeta1, zeta2); the two
    remaining diagonal entries are eliminated by trace preservation,
    eta4 = 1 - 2 eta2 - eta1 and xi4 = 1 - 2 xi2 - xi1.
    """
    e1, e2, e3, x1, x2, x3, z1, z2 = p
    chi = np.zeros((8, 8))
    chi[0, 0] = e1
    chi[1, 1] = chi[2, 2] = e2
    chi[1, 2] = chi[2, 1] = e3
    chi[3, 3] = 1 - 2 * e2 - e1
    chi[4, 4] = 1 - 2 * x2 - x1
    chi[5, 5] = chi[6, 6] = x2
    chi[5, 6] = chi[6, 5] = x3
    chi[7, 7] = x1
    chi[0, 5] = chi[0, 6] = chi[5, 0] = chi[6, 0] = z1
    chi[1, 7] = chi[2, 7] = chi[7, 1] = chi[7, 2] = z2
    return chi


def constrained_maximize(r: np.ndarray, seed: int = 2024,
                         n_starts: int = 32) -> tuple[float, np.ndarray]:
    """Maximise Tr(chi R) over the symmetry-restricted CPTP family.

    Stage one is a multi-start Nelder-Mead over the raw eight parameters
    with a 1e6-weighted penalty on negative Choi eigenvalues.  Stage two
    polishes in reduced coordinates where the off-diagonal couplings are
    eliminated analytically (their PSD-optimal value is the rank-one
    boundary), so the reported maximiser is feasible exactly and the
    objective there concave.  Returns (best fidelity, best Choi matrix).
    """
    r = np.asarray(r)
    _require_hermitian(r, "merit operator")
    rr = np.real(r)
    rng = np.random.default_rng(seed)

    def penalised(p):
        chi = _chi_symmetric(p)
        eig = np.linalg.eigvalsh(chi)
        penalty = 1e6 * float(np.sum(np.minimum(eig, 0.0) ** 2))
        return -float(np.sum(chi * rr)) + penalty

    lo = np.array([0, 0, -0.5, 0, 0, -0.5, -0.6, -0.6])
    hi = np.array([1, 0.5, 0.5, 1, 0.5, 0.5, 0.6, 0.6])
    best = None
    for _ in range(n_starts):
        p0 = rng.uniform(lo, hi)
        res = minimize(penalised, p0, method="Nelder-Mead",
                       options=dict(fatol=1e-11, xatol=1e-9,
                                    maxiter=2500, maxfev=4000))
        if best is None or res.fun < best.fun:
            best = res

    blocks = symmetry_blocks(rr)
    r1, r2, rs = blocks.block1, blocks.block2, blocks.scalars

    def clamp(d):
        d = np.maximum(d, 0.0)
        for sl in (slice(0, 3), slice(3, 6)):
            total = d[sl].sum()
            if total > 1.0:
                d[sl] /= total
        return d

    def reduced_value(d):
        # d = (eta1, p_eta, q_eta, xi1, p_xi, q_xi); p/q are the sums and
        # differences of the paired diagonal entries, all constrained >= 0
        # with eta1 + p_eta + q_eta <= 1 (same for xi); couplings sit on the
        # rank-one boundary |sqrt(2) zeta| = sqrt(diag product).
        e1, pe, qe, x1, px, qx = d
        val = (r1[0, 0] * e1 + r1[1, 1] * px
               + 2 * abs(r1[0, 1]) * math.sqrt(max(e1 * px, 0.0)))
        val += (r2[0, 0] * x1 + r2[1, 1] * pe
                + 2 * abs(r2[0, 1]) * math.sqrt(max(x1 * pe, 0.0)))
        val += (rs[0] * qx + rs[1] * qe
                + rs[2] * (1 - e1 - pe - qe) + rs[3] * (1 - x1 - px - qx))
        return val

    def neg_reduced(d):
        return -reduced_value(clamp(d.copy()))

    p = best.x
    d0 = clamp(np.array([p[0], p[1] + p[2], p[1] - p[2],
                         p[3], p[4] + p[5], p[4] - p[5]]))
    starts = [d0] + [rng.uniform(0.0, 0.8, 6) for _ in range(8)]
    polished = None
    for s in starts:
        res = minimize(neg_reduced, s, method="Nelder-Mead",
                       options=dict(fatol=1e-14, xatol=1e-12,
                                    maxiter=8000, maxfev=12000))
        if polished is None or res.fun < polished.fun:
            polished = res

    e1, pe, qe, x1, px, qx = clamp(polished.x.copy())
    z1 = math.copysign(math.sqrt(max(e1 * px, 0.0) / 2), r1[0, 1])
    z2 = math.copysign(math.sqrt(max(x1 * pe, 0.0) / 2), r2[0, 1])
    chi = _chi_symmetric(np.array([
        e1, (pe + qe) / 2, (pe - qe) / 2,
        x1, (px + qx) / 2, (px - qx) / 2, z1, z2]))
    return float(np.sum(chi * rr)), chi.astype(complex)


def optimality_report(dist: AxisDistribution, n_samples: int,
                      seed: int = 0) -> dict:
    """Numbers for the optimality certificate of one distribution.

    Runs the Haar sweep (n_samples per environment size in {1, 2, 4}) and
    the structured maximisation, against the analytic optimum.
    """
    m = moments(dist)
    params = optimal_angles(m)
    f_opt = average_fidelity(m, params)
    r = build_merit(dist)
    env_dims = (1, 2, 4)
    sampled = max_sampled_fidelity(r, n_samples, seed=seed, env_dims=env_dims)
    structured, _ = constrained_maximize(r)
    return {
        "F_opt": f_opt,
        "max_sampled_F": sampled,
        "n_samples": n_samples * len(env_dims),
        "max_structured_F": structured,
    }
