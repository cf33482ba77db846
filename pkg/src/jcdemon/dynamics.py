"""Exact resonant qubit-cavity evolution via the closed-form block propagator.

The interaction conserves total excitation number, so the propagator acts as
independent 2x2 rotations on the pairs {|e,n>, |g,n+1>} with angle
gt*sqrt(n+1), leaves |g,0> invariant, and (in the truncated space) holds the
orphan top level |e, n_ph-1> fixed to stay exactly unitary.  Evolution is
always from the stored t=0 state; there is no step composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, TruncationError
from .fock import DensityOperator, SpaceConfig, displacement, thermal_probabilities


@dataclass(frozen=True)
class Propagator:
    """Block rotations cos/sin(gt sqrt(n+1)) for pairs (|e,n>, |g,n+1>)."""

    gt: float
    cfg: SpaceConfig
    cos_block: np.ndarray  # length n_ph - 1
    sin_block: np.ndarray

    def as_matrix(self) -> np.ndarray:
        """Dense 2*n_ph x 2*n_ph unitary, qubit (x) cavity ordering."""
        n = self.cfg.n_ph
        u = np.zeros((2 * n, 2 * n), dtype=complex)
        u[n - 1, n - 1] = 1.0  # orphan |e, n_ph-1>
        u[n, n] = 1.0  # |g, 0>
        idx = np.arange(n - 1)
        u[idx, idx] = self.cos_block
        u[idx, n + 1 + idx] = self.sin_block
        u[n + 1 + idx, idx] = -self.sin_block
        u[n + 1 + idx, n + 1 + idx] = self.cos_block
        return u

    def apply_to_vectors(self, vectors: np.ndarray) -> np.ndarray:
        """Rotate pure-state branches of shape (..., 2, n_ph)."""
        n = self.cfg.n_ph
        e = vectors[..., 0, :]
        g = vectors[..., 1, :]
        out = np.empty_like(vectors)
        c, s = self.cos_block, self.sin_block
        out[..., 0, : n - 1] = c * e[..., : n - 1] + s * g[..., 1:]
        out[..., 0, n - 1] = e[..., n - 1]
        out[..., 1, 1:] = -s * e[..., : n - 1] + c * g[..., 1:]
        out[..., 1, 0] = g[..., 0]
        return out


def build_propagator(gt: float, cfg: SpaceConfig) -> Propagator:
    root = np.sqrt(np.arange(1.0, cfg.n_ph))
    return Propagator(
        gt=float(gt),
        cfg=cfg,
        cos_block=np.cos(gt * root),
        sin_block=np.sin(gt * root),
    )


@dataclass
class JointState:
    """Qubit-cavity state at t=0, dense or as a mixture of pure branches.

    Branch form: weights (B,) summing to one up to the truncation deficit and
    vectors (B, 2, n_ph); the state is sum_b w_b |v_b><v_b|.
    """

    cfg: SpaceConfig
    dense: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    vectors: Optional[np.ndarray] = None

    @property
    def is_dense(self) -> bool:
        return self.dense is not None

    def __post_init__(self):
        n = self.cfg.n_ph
        if self.is_dense:
            if self.dense.shape != (2 * n, 2 * n):
                raise DimensionMismatch(
                    f"dense joint state must be {2 * n}x{2 * n}, got {self.dense.shape}"
                )
        else:
            if self.weights is None or self.vectors is None:
                raise DimensionMismatch("branch state needs weights and vectors")
            if self.vectors.shape != (len(self.weights), 2, n):
                raise DimensionMismatch(
                    f"branch vectors must be (B, 2, {n}), got {self.vectors.shape}"
                )


def tensor_state(rho_q: np.ndarray, rho_c: DensityOperator, cfg: SpaceConfig) -> JointState:
    from .fock import tensor

    return JointState(cfg=cfg, dense=tensor(rho_q, rho_c.matrix))


def decompose_thermal_branches(
    rho_q0: np.ndarray,
    alpha: complex,
    nbar: float,
    cfg: SpaceConfig,
    rank_tol: float = 1e-12,
) -> JointState:
    """Spectral branch decomposition of rho_Q(0) (x) D(alpha) w_nbar D(alpha)^dag.

    Keeps qubit eigenvectors with weight above rank_tol/2 and thermal levels
    until the geometric tail drops below rank_tol/2, so the total discarded
    weight is at most rank_tol.
    """
    rho_q0 = np.asarray(rho_q0, dtype=complex)
    if rho_q0.shape != (2, 2):
        raise DimensionMismatch(f"qubit state must be 2x2, got {rho_q0.shape}")
    evals, evecs = np.linalg.eigh(rho_q0)
    keep_q = evals > max(rank_tol / 2.0, 1e-15)
    q_weights = evals[keep_q]
    q_vecs = evecs[:, keep_q]

    if nbar <= 0:
        n_levels = 1
    else:
        n_levels = min(
            int(np.ceil(np.log(rank_tol / 2.0) / np.log(nbar / (1.0 + nbar)))), cfg.n_ph
        )
    p = thermal_probabilities(nbar, n_levels)
    cols = displacement(alpha, cfg)[:, :n_levels]  # displaced number states

    n_q = q_weights.size
    weights = np.empty(n_q * n_levels)
    vectors = np.zeros((n_q * n_levels, 2, cfg.n_ph), dtype=complex)
    for i in range(n_q):
        sl = slice(i * n_levels, (i + 1) * n_levels)
        weights[sl] = q_weights[i] * p
        vectors[sl, 0, :] = q_vecs[0, i] * cols.T
        vectors[sl, 1, :] = q_vecs[1, i] * cols.T
    return JointState(cfg=cfg, weights=weights, vectors=vectors)


def evolve(state0: JointState, gt: float) -> JointState:
    """Propagate the stored t=0 state to time gt (exact, no stepping)."""
    prop = build_propagator(gt, state0.cfg)
    n = state0.cfg.n_ph
    if state0.is_dense:
        u = prop.as_matrix()
        rho = u @ state0.dense @ u.conj().T
        top = float(np.real(rho[n - 1, n - 1] + rho[2 * n - 1, 2 * n - 1]))
        if top > state0.cfg.tail_tol:
            raise TruncationError(
                f"top-band population {top:.3e} exceeds tail_tol at gt={gt}"
            )
        return JointState(cfg=state0.cfg, dense=rho)
    vecs = prop.apply_to_vectors(state0.vectors)
    top = float(
        np.sum(state0.weights * (np.abs(vecs[:, 0, n - 1]) ** 2 + np.abs(vecs[:, 1, n - 1]) ** 2))
    )
    if top > state0.cfg.tail_tol:
        raise TruncationError(f"top-band population {top:.3e} exceeds tail_tol at gt={gt}")
    return JointState(cfg=state0.cfg, weights=state0.weights, vectors=vecs)


def reduced_qubit(state: JointState) -> np.ndarray:
    if state.is_dense:
        from .fock import partial_trace_cavity

        return partial_trace_cavity(state.dense)
    overlaps = np.einsum("bqn,brn->bqr", state.vectors, state.vectors.conj())
    return np.einsum("b,bqr->qr", state.weights, overlaps)


def reduced_cavity(state: JointState) -> np.ndarray:
    """Dense cavity reduction (materializes an n_ph x n_ph matrix)."""
    if state.is_dense:
        from .fock import partial_trace_qubit

        return partial_trace_qubit(state.dense)
    m = cavity_factors(state)
    return np.einsum("kn,km->nm", m, m.conj())


def cavity_factors(state: JointState) -> np.ndarray:
    """Rows f_k = sqrt(w_b) v_{b,q} such that rho_C = sum_k |f_k><f_k|."""
    if state.is_dense:
        raise DimensionMismatch("cavity_factors is only defined for branch states")
    b = state.vectors.shape[0]
    w = np.sqrt(state.weights)
    return (w[:, None, None] * state.vectors).reshape(2 * b, state.cfg.n_ph)


def conserved_excitation(state: JointState) -> float:
    """<a^dag a> + P_e, a constant of motion of the resonant interaction."""
    n = np.arange(state.cfg.n_ph)
    if state.is_dense:
        blocks = state.dense.reshape(2, state.cfg.n_ph, 2, state.cfg.n_ph)
        p_e = float(np.real(np.trace(blocks[0, :, 0, :])))
        occ = float(np.real(np.einsum("qnqn,n->", blocks, n)))
        return occ + p_e
    p_e = float(np.real(np.sum(state.weights * np.sum(np.abs(state.vectors[:, 0, :]) ** 2, axis=1))))
    occ = float(np.real(np.sum(state.weights * np.einsum("bqn,n->b", np.abs(state.vectors) ** 2, n))))
    return occ + p_e
