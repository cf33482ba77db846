"""Truncated Fock-space linear algebra for a single cavity mode and a qubit.

Conventions: hbar = omega_0 = 1, so energies are in units of hbar*omega_0 and
times enter only through the dimensionless product g*t.  Qubit basis order is
(|e>, |g>); joint states are ordered qubit (x) cavity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, DomainError, TruncationError

DEFAULT_TAIL_TOL = 1e-10

# Thermal Fock levels are kept until the geometric tail drops below this; far
# smaller than any tolerance used downstream.
_LEVEL_CUT = 1e-16


@dataclass(frozen=True)
class SpaceConfig:
    """Fock truncation: cavity levels |0> .. |n_ph - 1>."""

    n_ph: int
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.n_ph < 2:
            raise TruncationError(f"n_ph must be >= 2, got {self.n_ph}")
        if not (0 < self.tail_tol < 1):
            raise TruncationError(f"tail_tol must be in (0, 1), got {self.tail_tol}")


@dataclass
class DensityOperator:
    """Cavity density matrix plus the trace lost to truncation."""

    matrix: np.ndarray
    trace_deficit: float = 0.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CavityMoments:
    """First and second moments of the cavity field."""

    mean_a: complex
    mean_a2: complex
    mean_n: float

    def __post_init__(self):
        if self.mean_n < abs(self.mean_a) ** 2 - 1e-9:
            raise DomainError(
                f"second moment dominance violated: mean_n={self.mean_n}, "
                f"|mean_a|^2={abs(self.mean_a) ** 2}"
            )


def auto_truncation(n0: float, nbar: float) -> int:
    """Default truncation: mean photon number plus a 12-sigma band and headroom.

    The conditional field amplitudes stay on the circle |alpha| = sqrt(n0), so
    the photon distribution never leaves this band during evolution.
    """
    return int(np.ceil(n0 + 12.0 * np.sqrt(max(n0, 0.0) * (2.0 * nbar + 1.0)) + 20.0))


def thermal_level_cut(nbar: float, tol: float = _LEVEL_CUT) -> int:
    """Smallest K with geometric tail (nbar/(1+nbar))^K <= tol."""
    if nbar <= 0:
        return 1
    return int(np.ceil(np.log(tol) / np.log(nbar / (1.0 + nbar))))


def annihilation(cfg: SpaceConfig) -> np.ndarray:
    """Bosonic annihilation operator: <n-1|a|n> = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1.0, cfg.n_ph)), 1).astype(complex)


def number_operator(cfg: SpaceConfig) -> np.ndarray:
    return np.diag(np.arange(cfg.n_ph, dtype=float)).astype(complex)


def displacement(alpha: complex, cfg: SpaceConfig) -> np.ndarray:
    """Matrix of the phase-space displacement exp(alpha a^dag - alpha* a).

    Entries are the closed-form associated-Laguerre matrix elements, generated
    by the degree recurrence along each diagonal m - n = const with the
    factorial prefactors folded in (seeded via log-factorials).  This keeps
    every intermediate bounded by 1, so the construction is stable at large
    n_ph and large |alpha| where direct formula evaluation overflows.

    Columns whose displaced number state no longer fits below the truncation
    edge are genuinely sub-unitary (the missing weight is the real leakage);
    consumers weight columns by thermal occupations, which vanish long before
    that regime under the truncation-adequacy rule.
    """
    nph = cfg.n_ph
    alpha = complex(alpha)
    if alpha == 0:
        return np.eye(nph, dtype=complex)
    x = abs(alpha) ** 2
    k = np.arange(nph)
    # seed: <k|D|0> magnitudes, i.e. coherent-state amplitudes
    seed = np.exp(-0.5 * x + k * np.log(abs(alpha)) - 0.5 * gammaln(k + 1.0))
    if abs(seed[0] ** 2 + (seed[1:] ** 2).sum() - 1.0) > cfg.tail_tol:
        raise TruncationError(
            f"displacement alpha={alpha}: coherent column leaks "
            f"{abs(1.0 - (seed ** 2).sum()):.3e} > tail_tol={cfg.tail_tol}"
        )
    # scaled Laguerre table: upper[n, k] = <n+k|D(|alpha|)|n>, real for real alpha
    upper = np.zeros((nph, nph))
    upper[0] = seed
    if nph > 1:
        kk = k[: nph - 1]
        upper[1, : nph - 1] = (kk + 1.0 - x) / np.sqrt(kk + 1.0) * seed[: nph - 1]
    for n in range(1, nph - 1):
        kk = k[: nph - 1 - n]
        a_coef = (2.0 * n + kk + 1.0 - x) / np.sqrt((n + 1.0) * (n + kk + 1.0))
        b_coef = np.sqrt(n * (n + kk) / ((n + 1.0) * (n + kk + 1.0)))
        upper[n + 1, : nph - 1 - n] = a_coef * upper[n, : nph - 1 - n] - b_coef * upper[n - 1, : nph - 1 - n]
    ph = alpha / abs(alpha)
    phases = ph ** k
    out = np.zeros((nph, nph), dtype=complex)
    for n in range(nph):
        out[n:, n] = upper[n, : nph - n] * phases[: nph - n]
    # m < n from <m|D(a)|n> = conj(<n|D(-a)|m>); conj((-ph)^k) = (-conj(ph))^k
    neg = (-np.conj(ph)) ** k
    for m in range(nph - 1):
        out[m, m + 1 :] = upper[m, 1 : nph - m] * neg[1 : nph - m]
    return out


def displacement_generator_exp(alpha: complex, cfg: SpaceConfig) -> np.ndarray:
    """Oracle path: scaling-and-squaring exponential of the truncated generator."""
    from scipy.linalg import expm

    a = annihilation(cfg)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def thermal_probabilities(nbar: float, n_levels: int) -> np.ndarray:
    """Geometric occupation p_n = nbar^n / (1+nbar)^(n+1), not renormalized."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if nbar == 0:
        p = np.zeros(n_levels)
        p[0] = 1.0
        return p
    n = np.arange(n_levels)
    return np.exp(n * np.log(nbar) - (n + 1.0) * np.log(1.0 + nbar))


def thermal_state(nbar: float, cfg: SpaceConfig) -> DensityOperator:
    """Truncated thermal state; raw probabilities, deficit recorded, never renormalized."""
    p = thermal_probabilities(nbar, cfg.n_ph)
    deficit = 0.0 if nbar == 0 else float(np.exp(cfg.n_ph * np.log(nbar / (1.0 + nbar))))
    return DensityOperator(np.diag(p).astype(complex), trace_deficit=deficit)


def displaced_thermal(alpha: complex, nbar: float, cfg: SpaceConfig) -> DensityOperator:
    """Thermal state displaced by alpha: D(alpha) w D(alpha)^dag.

    Built from the displaced number states of the thermally occupied levels
    (occupations below 1e-16 are dropped; the omission is part of the recorded
    trace deficit).
    """
    K = min(thermal_level_cut(nbar), cfg.n_ph)
    D = displacement(alpha, cfg)
    p = thermal_probabilities(nbar, K)
    cols = D[:, :K]
    rho = (cols * p) @ cols.conj().T
    deficit = 1.0 - float(np.trace(rho).real)
    if deficit > cfg.tail_tol or deficit < -1e-9:
        raise TruncationError(
            f"displaced_thermal(alpha={alpha}, nbar={nbar}, n_ph={cfg.n_ph}): "
            f"trace deficit {deficit:.3e} exceeds tail_tol={cfg.tail_tol}"
        )
    return DensityOperator(rho, trace_deficit=deficit)


def tensor(rho_q: np.ndarray, rho_c: np.ndarray) -> np.ndarray:
    """Joint density matrix, qubit (x) cavity ordering."""
    rho_q = np.asarray(rho_q)
    rho_c = np.asarray(rho_c)
    if rho_q.shape != (2, 2):
        raise DimensionMismatch(f"qubit factor must be 2x2, got {rho_q.shape}")
    if rho_c.ndim != 2 or rho_c.shape[0] != rho_c.shape[1]:
        raise DimensionMismatch(f"cavity factor must be square, got {rho_c.shape}")
    return np.kron(rho_q, rho_c)


def _split_joint(rho: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or dim % 2:
        raise DimensionMismatch(f"joint matrix must be square with even dim, got {rho.shape}")
    n_ph = dim // 2
    return rho.reshape(2, n_ph, 2, n_ph)


def partial_trace_cavity(rho: np.ndarray) -> np.ndarray:
    """Reduced 2x2 qubit state of a joint density matrix."""
    return np.einsum("qnrn->qr", _split_joint(rho))


def partial_trace_qubit(rho: np.ndarray) -> np.ndarray:
    """Reduced cavity state of a joint density matrix."""
    return np.einsum("qnqm->nm", _split_joint(rho))


def cavity_moments(rho_c: np.ndarray) -> CavityMoments:
    """<a>, <a^2> and <a^dag a> of a cavity density matrix."""
    rho_c = np.asarray(rho_c)
    n = rho_c.shape[0]
    m = np.arange(n)
    mean_n = float(np.real(np.diag(rho_c) @ m))
    mean_a = complex(np.sum(np.sqrt(m[1:]) * np.diag(rho_c, 1)))
    mean_a2 = complex(np.sum(np.sqrt(m[2:] * m[1 : n - 1]) * np.diag(rho_c, 2)))
    return CavityMoments(mean_a=mean_a, mean_a2=mean_a2, mean_n=mean_n)


def covariance(mom: CavityMoments) -> np.ndarray:
    """2x2 quadrature covariance for q = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2).

    General-phase form; for a real mean field the off-diagonal entry vanishes.
    """
    ar, ai = mom.mean_a.real, mom.mean_a.imag
    s_q2 = mom.mean_a2.real + mom.mean_n + 0.5 - 2.0 * ar * ar
    s_p2 = -mom.mean_a2.real + mom.mean_n + 0.5 - 2.0 * ai * ai
    s_qp = mom.mean_a2.imag - 2.0 * ar * ai
    return np.array([[s_q2, s_qp], [s_qp, s_p2]])
