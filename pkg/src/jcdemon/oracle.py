"""Closed-form predictions used as independent oracles against exact numerics.

Short-time quantities are power series in 1/n0 at fixed rotation angle
theta = 2 gt sqrt(n0); the longer-time regime is described by conditional
field amplitudes alpha_(+/-) = sqrt(n0) exp(+/- i gt / (2 sqrt(n0))), the
qubit basis they select, and the entropy bookkeeping of the two-branch
mixture.  Everything here is a pure function of the scenario parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .thermo import LN2, beta_of_nbar, bose_entropy, cavity_effective_occupation

SQRT2 = float(np.sqrt(2.0))


@dataclass(frozen=True)
class ExpansionPrediction:
    """Short-time series at rotation angle theta for an initially excited qubit."""

    theta: float
    n0: float
    nbar: float
    phi0: float
    in_window: bool  # theta <= sqrt(n0): first-order truncation trustworthy
    p_e0: float
    d_p_e: float  # coefficient of 1/n0
    d2_p_e: float  # coefficient of 1/n0^2
    c_eg0: complex
    d_c_eg: complex
    d2_c_eg: complex
    s_q: float
    mean_a: complex
    mean_a2: complex
    mean_n: float
    sqrt_det_v: float
    q_c: float
    q_c_first_order: float
    d_e_c: float
    w_c: float
    sigma_q: float

    @property
    def p_e_first_order(self) -> float:
        return self.p_e0 + self.d_p_e / self.n0

    @property
    def p_e_second_order(self) -> float:
        return self.p_e0 + self.d_p_e / self.n0 + self.d2_p_e / self.n0**2

    @property
    def c_eg_first_order(self) -> complex:
        return self.c_eg0 + self.d_c_eg / self.n0

    @property
    def c_eg_second_order(self) -> complex:
        return self.c_eg0 + self.d_c_eg / self.n0 + self.d2_c_eg / self.n0**2


def delta_p_e(theta: float, nbar: float) -> float:
    """First-order population correction."""
    return -(theta / 16.0) * (
        (1.0 + 2.0 * nbar) * theta * np.cos(theta) + (3.0 + 2.0 * nbar) * np.sin(theta)
    )


def delta_c_eg(theta: float, nbar: float) -> float:
    """First-order coherence correction (before the -e^{i phi0} prefactor)."""
    return (
        -2.0 * theta
        + (3.0 + 2.0 * nbar) * theta * np.cos(theta)
        - (1.0 + 2.0 * nbar) * (1.0 + theta**2) * np.sin(theta)
    ) / 16.0


def _d2_p_e(theta: float, nbar: float) -> float:
    return -theta * (1.0 + nbar) * (1.0 + 2.0 * nbar) * (theta * np.cos(theta) - np.sin(theta)) / 16.0


def _d2_c_eg(theta: float, nbar: float) -> float:
    return (
        (5.0 + 8.0 * nbar) * 2.0 * theta
        - (11.0 + 4.0 * nbar * (11.0 + 9.0 * nbar)) * 2.0 * theta * np.cos(theta)
        + (12.0 + 72.0 * nbar * (1.0 + nbar) - (9.0 + 8.0 * nbar * (4.0 + 3.0 * nbar)) * theta**2)
        * np.sin(theta)
    ) / 64.0


def eps_q(theta: float, nbar: float) -> float:
    """Leading small eigenvalue of the qubit state, times n0."""
    return (
        (1.0 + 2.0 * nbar) * (1.0 + 2.0 * theta**2 - np.cos(2.0 * theta))
        + 4.0 * theta * np.sin(theta)
    ) / 32.0


def entropy_series(theta: float, n0: float, nbar: float) -> float:
    """Qubit entropy estimate eps*(1 - ln(eps) + ln(n0))/n0; a band, not a strict order."""
    eps = eps_q(theta, nbar)
    if eps <= 0.0:
        return 0.0
    return float(eps * (-np.log(eps / np.e) + np.log(n0)) / n0)


def heat_bracket(theta: float, nbar: float) -> float:
    return theta**2 + np.sin(theta) ** 2 + 2.0 * (1.0 + 2.0 * nbar) * theta * np.sin(theta)


def sqrt_det_v_series(theta: float, n0: float, nbar: float) -> float:
    """sqrt(det V) of the Gaussian cavity description at angle theta."""
    return float(
        (nbar + 0.5)
        * np.sqrt(1.0 + heat_bracket(theta, nbar) / (4.0 * n0 * (2.0 * nbar + 1.0)))
    )


def q_c_series(theta: float, n0: float, nbar: float) -> float:
    """Cavity heat from the Gaussian entropy route: (nbar + 1/2) - sqrt(det V)."""
    return float(nbar + 0.5) - sqrt_det_v_series(theta, n0, nbar)


def q_c_first_order(theta: float, n0: float, nbar: float) -> float:
    return -heat_bracket(theta, nbar) / (16.0 * n0)


def mean_a_series(theta: float, n0: float, nbar: float, phi0: float = 0.0) -> complex:
    """Field amplitude to third order in 1/n0."""
    s2 = np.sin(theta / 2.0) ** 2
    c, s = np.cos(theta), np.sin(theta)
    second = (
        -2.0 * s2 * (1.0 + theta**2 / 2.0)
        + (theta / 2.0) * s
        + nbar * theta * (theta * c - s)
    )
    third = (
        13.0
        + 5.0 * theta**2 / 4.0
        + 8.0 * nbar * (7.0 + 6.0 * nbar + theta**2 / 4.0)
        + (-13.0 + 9.0 * theta**2 / 4.0 + 8.0 * nbar * (-7.0 - 6.0 * nbar + (4.0 + 3.0 * nbar) * theta**2 / 4.0)) * c
        - 2.0 * (5.0 + nbar * (19.0 + 15.0 * nbar)) * theta * s
    )
    series = 1.0 + s2 / (2.0 * n0) + second / (16.0 * n0**2) + third / (32.0 * n0**3)
    return complex(np.sqrt(n0) * series * np.exp(1j * phi0))


def mean_a2_series(theta: float, n0: float, nbar: float, phi0: float = 0.0) -> complex:
    """Squared field amplitude to third order in 1/n0."""
    s2 = np.sin(theta / 2.0) ** 2
    c, s = np.cos(theta), np.sin(theta)
    second = (
        (1.0 + 2.0 * nbar) * ((1.0 + theta**2 / 4.0) * c - 1.0)
        + (3.0 + 2.0 * nbar) * (theta / 4.0) * s
        - theta**2 / 2.0
    )
    third = (
        5.0
        + 3.0 * theta**2 / 4.0
        + 6.0 * nbar * (4.0 + 4.0 * nbar + theta**2 / 4.0)
        + (-5.0 + theta**2 + 3.0 * nbar * (-8.0 * (1.0 + nbar) + (5.0 + 4.0 * nbar) * theta**2 / 4.0)) * c
        - (17.0 + 69.0 * nbar + 60.0 * nbar**2) * (theta / 4.0) * s
    )
    series = 1.0 + s2 / n0 + second / (4.0 * n0**2) + third / (4.0 * n0**3)
    return complex(n0 * series * np.exp(2j * phi0))


def mean_n_series(theta: float, n0: float, nbar: float) -> float:
    """Photon number via excitation conservation, with P_e to second order."""
    s2 = np.sin(theta / 2.0) ** 2
    c, s = np.cos(theta), np.sin(theta)
    first = theta * ((1.0 + 2.0 * nbar) * theta * c + (3.0 + 2.0 * nbar) * s) / 16.0
    second = theta * (1.0 + nbar) * (1.0 + 2.0 * nbar) * (theta * c - s) / 16.0
    return float(nbar + n0 + s2 + first / n0 + second / n0**2)


def unitary_expansion(theta: float, n0: float, nbar: float, phi0: float = 0.0) -> ExpansionPrediction:
    """All short-time predictions at rotation angle theta, initial qubit |e>."""
    if n0 <= 0:
        raise DomainError(f"n0 must be positive, got {n0}")
    phase = -np.exp(1j * phi0)
    p_e0 = float(np.cos(theta / 2.0) ** 2)
    d_p = delta_p_e(theta, nbar)
    d2_p = _d2_p_e(theta, nbar)
    c_eg0 = phase * 0.5 * np.sin(theta)
    d_c = phase * delta_c_eg(theta, nbar)
    d2_c = phase * _d2_c_eg(theta, nbar)
    s_q = entropy_series(theta, n0, nbar)
    q_c = q_c_series(theta, n0, nbar)
    p_e_2nd = p_e0 + d_p / n0 + d2_p / n0**2
    d_e_c = 1.0 - p_e_2nd
    beta0 = beta_of_nbar(nbar)
    return ExpansionPrediction(
        theta=theta,
        n0=n0,
        nbar=nbar,
        phi0=phi0,
        in_window=bool(theta <= np.sqrt(n0)),
        p_e0=p_e0,
        d_p_e=d_p,
        d2_p_e=d2_p,
        c_eg0=complex(c_eg0),
        d_c_eg=complex(d_c),
        d2_c_eg=complex(d2_c),
        s_q=s_q,
        mean_a=mean_a_series(theta, n0, nbar, phi0),
        mean_a2=mean_a2_series(theta, n0, nbar, phi0),
        mean_n=mean_n_series(theta, n0, nbar),
        sqrt_det_v=sqrt_det_v_series(theta, n0, nbar),
        q_c=q_c,
        q_c_first_order=q_c_first_order(theta, n0, nbar),
        d_e_c=d_e_c,
        w_c=-d_e_c - q_c,
        sigma_q=(s_q - beta0 * q_c) if np.isfinite(beta0) else np.nan,
    )


def measurement_basis(phi0: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Qubit basis selected by the initial field phase, in the (|e>, |g>) basis.

    These are the eigenvectors of the initial effective drive
    i g (alpha_0 sigma_+ - alpha_0^* sigma_-); for phi0 = 0 they are |+y>, |-y>.
    """
    plus = np.array([1.0, 1j * np.exp(-1j * phi0)]) / SQRT2
    minus = np.array([1.0, -1j * np.exp(-1j * phi0)]) / SQRT2
    return plus, minus


def branch_qubit_states(gt: float, n0: float, phi0: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Slowly rotating branch states the measurement basis evolves into."""
    rot = gt / (2.0 * np.sqrt(n0))
    plus = np.array([np.exp(1j * phi0), 1j * np.exp(-1j * rot)]) / SQRT2
    minus = np.array([np.exp(1j * phi0), -1j * np.exp(1j * rot)]) / SQRT2
    return plus, minus


def conditional_amplitudes(gt: float, n0: float) -> tuple[complex, complex]:
    """Field amplitudes conditioned on the two measurement branches."""
    rot = gt / (2.0 * np.sqrt(n0))
    root = np.sqrt(n0)
    return complex(root * np.exp(1j * rot)), complex(root * np.exp(-1j * rot))


def cross_trace(gt: float, n0: float, nbar: float) -> complex:
    """Trace of the off-diagonal conditional cavity operator (finite-n0 form).

    Magnitude exp(-2 n0 (2 nbar + 1) sin^2(gt / 2 sqrt(n0))) from the thermal
    characteristic function at the branch separation, with the dynamical and
    displacement-composition phases.
    """
    root = np.sqrt(n0)
    half = gt / (2.0 * root)
    chi = gt * (root + 1.0 / root)
    mag = np.exp(-2.0 * n0 * (2.0 * nbar + 1.0) * np.sin(half) ** 2)
    return complex(np.exp(1j * chi) * np.exp(1j * n0 * np.sin(2.0 * half)) * mag)


def cross_trace_limit(gt: float, n0: float, nbar: float) -> complex:
    """Large-n0 form of cross_trace with the leading 1/n0 correction."""
    mag = np.exp(
        -(2.0 * nbar + 1.0) * gt**2 / 2.0 + (2.0 * nbar + 1.0) * gt**4 / (24.0 * n0)
    )
    return complex(np.exp(2j * gt * np.sqrt(n0)) * mag)


def branch_overlap(gt: float, n0: float, nbar: float) -> float:
    """Overlap Tr[rho_+ rho_-] of the two normalized conditional cavity states."""
    half = gt / (2.0 * np.sqrt(n0))
    return float(
        np.exp(-4.0 * n0 * np.sin(half) ** 2 / (2.0 * nbar + 1.0)) / (2.0 * nbar + 1.0)
    )


def collapse_time(n0: float, nbar: float, threshold: float = 0.05) -> float:
    """First time |cross_trace| falls to the threshold (operational t_c)."""
    if not (0.0 < threshold < 1.0):
        raise DomainError(f"threshold must be in (0, 1), got {threshold}")
    rhs = np.log(1.0 / threshold) / (2.0 * n0 * (2.0 * nbar + 1.0))
    if rhs >= 1.0:
        # suppression never reaches the threshold; strongest at half revival
        return float(np.pi * np.sqrt(n0))
    return float(2.0 * np.sqrt(n0) * np.arcsin(np.sqrt(rhs)))


def feedback_drive(gt: float, n0: float, branch: int, phi0: float = 0.0) -> np.ndarray:
    """Effective 2x2 branch Hamiltonian i(alpha sigma+ - alpha* sigma-), units of hbar*g."""
    if branch not in (+1, -1):
        raise DomainError(f"branch must be +1 or -1, got {branch}")
    a_plus, a_minus = conditional_amplitudes(gt, n0)
    alpha = (a_plus if branch == +1 else a_minus) * np.exp(1j * phi0)
    return np.array([[0.0, 1j * alpha], [-1j * np.conj(alpha), 0.0]])


@dataclass(frozen=True)
class PurificationSchedule:
    t_c: float  # collapse reference, units of 1/g
    t_min: float  # first purification time pi sqrt(n0)
    t_k: tuple[float, ...]  # successive purification times (2k-1) pi sqrt(n0)
    target_state: np.ndarray  # (|g> + e^{i phi0} |e>)/sqrt2 in the (e, g) basis


def purification_schedule(n0: float, phi0: float = 0.0, k_max: int = 3) -> PurificationSchedule:
    root_pi = np.pi * np.sqrt(n0)
    return PurificationSchedule(
        t_c=1.0,
        t_min=float(root_pi),
        t_k=tuple(float((2 * k - 1) * root_pi) for k in range(1, k_max + 1)),
        target_state=np.array([np.exp(1j * phi0), 1.0]) / SQRT2,
    )


@dataclass(frozen=True)
class DemonPrediction:
    s_c_tc: float  # cavity entropy after the measurement step
    nbar_tc: float  # matching effective occupation
    q_c_plateau: float  # nbar - nbar_tc, in units of hbar*omega_0
    i_targets: tuple[float, float, float]  # mutual information at (0, t_c, t_min)


def demon_predictions(n0: float, nbar: float) -> DemonPrediction:
    """Large-n0 targets for the maximally-mixed-qubit scenario."""
    s_c_tc = LN2 + bose_entropy(nbar)
    nbar_tc = cavity_effective_occupation(s_c_tc)
    return DemonPrediction(
        s_c_tc=s_c_tc,
        nbar_tc=nbar_tc,
        q_c_plateau=nbar - nbar_tc,
        i_targets=(0.0, LN2, 0.0),
    )


@dataclass(frozen=True)
class RegimePrediction:
    """Bundle of the longer-time closed forms at one (gt, n0, nbar, phi0)."""

    alpha_plus: complex
    alpha_minus: complex
    chi: float
    cross_trace: complex
    cross_trace_limit: complex
    branch_overlap: float
    basis_plus: np.ndarray
    basis_minus: np.ndarray
    h_eff_plus: np.ndarray
    h_eff_minus: np.ndarray
    t_c: float
    t_min: float
    t_k: tuple[float, ...]
    s_c_tc: float
    nbar_tc: float
    q_c_plateau: float
    target_state: np.ndarray


def regime_prediction(
    gt: float, n0: float, nbar: float, phi0: float = 0.0, threshold: float = 0.05
) -> RegimePrediction:
    a_plus, a_minus = conditional_amplitudes(gt, n0)
    basis = measurement_basis(phi0)
    sched = purification_schedule(n0, phi0)
    demon = demon_predictions(n0, nbar)
    return RegimePrediction(
        alpha_plus=a_plus,
        alpha_minus=a_minus,
        chi=float(gt * (np.sqrt(n0) + 1.0 / np.sqrt(n0))),
        cross_trace=cross_trace(gt, n0, nbar),
        cross_trace_limit=cross_trace_limit(gt, n0, nbar),
        branch_overlap=branch_overlap(gt, n0, nbar),
        basis_plus=basis[0],
        basis_minus=basis[1],
        h_eff_plus=feedback_drive(gt, n0, +1, phi0),
        h_eff_minus=feedback_drive(gt, n0, -1, phi0),
        t_c=collapse_time(n0, nbar, threshold),
        t_min=sched.t_min,
        t_k=sched.t_k,
        s_c_tc=demon.s_c_tc,
        nbar_tc=demon.nbar_tc,
        q_c_plateau=demon.q_c_plateau,
        target_state=sched.target_state,
    )
