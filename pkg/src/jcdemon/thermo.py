"""Thermodynamic bookkeeping: entropies, effective temperatures, heat and work.

Heat provided by subsystem j is the negative variation of its thermal energy,
the energy of the thermal state sharing its von Neumann entropy; work is the
remaining (isoentropic) part of the energy exchange.  Positive Q_j / W_j mean
subsystem j provided heat / work to the rest.  All entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

LN2 = float(np.log(2.0))

# eigenvalues in [-EIG_CLIP, 0) are treated as roundoff and clipped to zero
_EIG_CLIP = 1e-10
_BISECT_TOL = 1e-12


@dataclass
class ThermoRecord:
    """One ledger row: state observables and cumulative-from-zero exchanges."""

    gt: float
    theta: float
    p_e: float
    c_eg: complex
    e_q: float
    e_c: float
    s_q: float
    s_c: float
    s_qc: float
    i_qc: float
    p_eff_q: float
    nbar_eff_c: float
    eth_q: float
    eth_c: float
    q_q: float
    q_c: float
    w_q: float
    w_c: float
    sigma_q: float
    demon_lhs: float
    demon_rhs: float
    mean_a: complex
    cross_trace: complex
    branch_overlap: float


def _entropy_of_spectrum(w: np.ndarray) -> float:
    w = np.asarray(w).real
    low = w.min() if w.size else 0.0
    if low < -_EIG_CLIP:
        raise DomainError(f"density operator has eigenvalue {low:.3e} < -{_EIG_CLIP}")
    w = np.clip(w, 0.0, 1.0)
    w = w[w > 0.0]
    return float(-(w * np.log(w)).sum())


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr(rho ln rho) from the eigenvalues, clipping roundoff negatives."""
    return _entropy_of_spectrum(np.linalg.eigvalsh(rho))


def entropy_from_factors(factors: np.ndarray) -> float:
    """Entropy of sum_k |f_k><f_k| via the Gram matrix of the factor rows.

    The nonzero spectrum of M^dag M equals that of the small M M^dag, so a
    low-rank mixture over an n_ph-dimensional space only needs a k x k solve.
    """
    m = np.asarray(factors)
    gram = m @ m.conj().T
    return _entropy_of_spectrum(np.linalg.eigvalsh(gram))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log(p) - (1.0 - p) * np.log(1.0 - p))


def bose_entropy(x: float) -> float:
    """Entropy (1+x)ln(1+x) - x ln(x) of a thermal state with occupation x."""
    if x <= 0.0:
        return 0.0
    return float((1.0 + x) * np.log(1.0 + x) - x * np.log(x))


def _bisect(f, lo: float, hi: float, target: float) -> float:
    # f monotone increasing on [lo, hi]; absolute tolerance on the residual
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if abs(val - target) <= _BISECT_TOL:
            return mid
        if val < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def qubit_effective_occupation(s: float) -> float:
    """Excited-state population p <= 1/2 of the qubit thermal state with entropy s."""
    if s > LN2 + 1e-9:
        raise DomainError(f"qubit entropy {s} exceeds ln 2")
    if s <= 1e-15:
        if s < -1e-9:
            raise DomainError(f"negative entropy {s}")
        return 0.0
    if s >= LN2:
        return 0.5
    return _bisect(binary_entropy, 0.0, 0.5, s)


def cavity_effective_occupation(s: float) -> float:
    """Occupation nbar_eff of the cavity thermal state with entropy s."""
    if s <= 1e-15:
        if s < -1e-9:
            raise DomainError(f"negative entropy {s}")
        return 0.0
    hi = max(1.0, float(np.exp(s)))
    return _bisect(bose_entropy, 0.0, hi, s)


def beta_of_nbar(nbar: float) -> float:
    """Inverse temperature (units 1/hbar omega_0) of a thermal state with occupation nbar."""
    if nbar <= 0.0:
        return np.inf
    return float(np.log(1.0 + 1.0 / nbar))


def heat_and_work(eth_0: float, eth_t: float, e_0: float, e_t: float) -> tuple[float, float]:
    """Cumulative (Q, W) provided by a subsystem between t=0 and t."""
    q = -(eth_t - eth_0)
    w = -(e_t - e_0) - q
    return q, w


def mutual_information(s_q: float, s_c: float, s_qc: float) -> float:
    return s_q + s_c - s_qc


def clausius_sigma(delta_s: float, beta_other: float, q_other: float) -> float:
    """Entropy production Delta S - beta * Q for an initially uncorrelated pair."""
    if not np.isfinite(beta_other):
        return np.nan
    return delta_s - beta_other * q_other


def demon_terms(
    s_q_tc: float,
    q_c_tc: float,
    i_tc: float,
    beta_c_tc: float,
    s_q_t: float,
    q_c_t: float,
    i_t: float,
) -> tuple[float, float]:
    """Information-corrected Clausius terms over the interval [t_c, t].

    lhs = Delta S_Q - beta_C(t_c) * Q_C(t_c -> t), rhs = Delta I; the second
    law with a feedback resource reads lhs >= rhs.
    """
    lhs = (s_q_t - s_q_tc) - beta_c_tc * (q_c_t - q_c_tc)
    rhs = i_t - i_tc
    return lhs, rhs


def gaussian_entropy(v: np.ndarray) -> float:
    """Entropy h(sqrt(det V)) of a Gaussian state with covariance V.

    h(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2); x = 1/2 gives zero.
    """
    v = np.asarray(v, dtype=float)
    det = float(v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0])
    if det < 0.25 - 1e-6:
        raise DomainError(f"covariance determinant {det} below the uncertainty bound 1/4")
    x = np.sqrt(max(det, 0.25))
    plus = (x + 0.5) * np.log(x + 0.5)
    minus = 0.0 if x - 0.5 <= 0.0 else (x - 0.5) * np.log(x - 0.5)
    return float(plus - minus)
