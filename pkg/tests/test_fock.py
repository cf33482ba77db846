import numpy as np
import pytest

from jcdemon import (
    DimensionMismatch,
    SpaceConfig,
    TruncationError,
    annihilation,
    cavity_moments,
    covariance,
    displaced_thermal,
    displacement,
    partial_trace_cavity,
    partial_trace_qubit,
    tensor,
    thermal_state,
    von_neumann_entropy,
)
from jcdemon.fock import auto_truncation, displacement_generator_exp, thermal_level_cut

LN2 = np.log(2.0)


def test_annihilation_entries():
    a2 = annihilation(SpaceConfig(2))
    assert a2[0, 1] == pytest.approx(1.0)
    assert np.count_nonzero(a2) == 1
    # vacuum is annihilated
    vac = np.zeros(2)
    vac[0] = 1.0
    assert np.allclose(a2 @ vac, 0.0)
    a5 = annihilation(SpaceConfig(5))
    assert a5[3, 4] == pytest.approx(2.0)


def test_displacement_zero_is_identity():
    assert np.allclose(displacement(0.0, SpaceConfig(8)), np.eye(8))


def test_displacement_coherent_overlap():
    d = displacement(1.0, SpaceConfig(32))
    assert d[0, 0].real == pytest.approx(np.exp(-0.5), abs=1e-12)


def _deep_columns(alpha, n_ph):
    # columns whose displaced band edge (|a| + sqrt(n))^2 stays well inside
    # the truncation; past this the exact projected elements legitimately
    # differ from the reflecting-wall exponential by the leaked flux
    return int(np.floor((np.sqrt(0.6 * n_ph) - abs(alpha)) ** 2))


def test_displacement_matches_generator_exponential():
    cfg = SpaceConfig(64)
    for alpha in (2.0, 1.0 + 0.5j):
        d = displacement(alpha, cfg)
        ref = displacement_generator_exp(alpha, cfg)
        n_deep = _deep_columns(alpha, cfg.n_ph)
        assert n_deep >= 10
        assert np.abs(d[:, :n_deep] - ref[:, :n_deep]).max() < 1e-10


def test_displacement_inverse_identity():
    cfg = SpaceConfig(64)
    d = displacement(2.0, cfg)
    dinv = displacement(-2.0, cfg)
    blk = _deep_columns(2.0, cfg.n_ph)
    block = (d @ dinv)[:blk, :blk]
    assert np.abs(block - np.eye(blk)).max() < 1e-9


def test_displacement_truncation_error():
    with pytest.raises(TruncationError):
        displacement(10.0, SpaceConfig(16))


def test_thermal_state_zero_temperature():
    w = thermal_state(0.0, SpaceConfig(8))
    expect = np.zeros((8, 8))
    expect[0, 0] = 1.0
    assert np.allclose(w.matrix, expect)
    assert w.trace_deficit == 0.0


def test_thermal_state_geometric():
    w = thermal_state(1.0, SpaceConfig(64))
    n = np.arange(64)
    assert np.allclose(np.diag(w.matrix).real, 2.0 ** -(n + 1.0), rtol=1e-13)
    assert w.trace_deficit == pytest.approx(2.0**-64.0, rel=1e-12)
    assert von_neumann_entropy(w.matrix) == pytest.approx(2 * LN2, abs=1e-12)


def test_displaced_thermal_reduces_to_thermal():
    cfg = SpaceConfig(64)
    rho = displaced_thermal(0.0, 1.0, cfg)
    w = thermal_state(1.0, cfg)
    assert np.abs(rho.matrix - w.matrix).max() < 1e-12


def test_displaced_thermal_coherent_purity():
    cfg = SpaceConfig(64)
    rho = displaced_thermal(np.sqrt(4.0), 0.0, cfg)
    purity = np.trace(rho.matrix @ rho.matrix).real
    assert purity == pytest.approx(1.0, abs=1e-9)


def test_displaced_thermal_first_moment():
    cfg = SpaceConfig(500)
    rho = displaced_thermal(10.0, 1.0, cfg)
    mom = cavity_moments(rho.matrix)
    assert mom.mean_n == pytest.approx(101.0, abs=1e-6)
    assert mom.mean_a == pytest.approx(10.0 + 0j, abs=1e-6)


def test_displaced_thermal_truncation_error():
    with pytest.raises(TruncationError):
        displaced_thermal(np.sqrt(100.0), 1.0, SpaceConfig(110))


def test_auto_truncation_adequacy():
    for n0, nbar in [(25.0, 1.0), (100.0, 1.0), (500.0, 1.0), (50.0, 0.0)]:
        cfg = SpaceConfig(auto_truncation(n0, nbar))
        rho = displaced_thermal(np.sqrt(n0), nbar, cfg)
        assert abs(rho.trace_deficit) < cfg.tail_tol


def test_positivity_of_constructed_states():
    cfg = SpaceConfig(128)
    for rho in (thermal_state(1.0, cfg), displaced_thermal(3.0 + 1.0j, 0.5, cfg)):
        assert np.linalg.eigvalsh(rho.matrix).min() > -1e-10


def test_tensor_and_partial_traces_product():
    cfg = SpaceConfig(16)
    rho_q = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]], dtype=complex)
    rho_c = thermal_state(0.5, cfg).matrix
    joint = tensor(rho_q, rho_c)
    assert np.abs(partial_trace_cavity(joint) - rho_q * np.trace(rho_c)).max() < 1e-12
    assert np.abs(partial_trace_qubit(joint) - rho_c).max() < 1e-12
    assert np.trace(partial_trace_cavity(joint)) == pytest.approx(np.trace(joint), abs=1e-12)
    assert np.trace(partial_trace_qubit(joint)) == pytest.approx(np.trace(joint), abs=1e-12)


def test_partial_trace_bell_like():
    n = 4
    vec = np.zeros(2 * n, dtype=complex)
    vec[0] = 1.0 / np.sqrt(2)  # |e,0>
    vec[n + 1] = 1.0 / np.sqrt(2)  # |g,1>
    joint = np.outer(vec, vec.conj())
    assert np.abs(partial_trace_cavity(joint) - 0.5 * np.eye(2)).max() < 1e-12


def test_tensor_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tensor(np.eye(3), np.eye(4))
    with pytest.raises(DimensionMismatch):
        partial_trace_cavity(np.eye(5))


def test_covariance_vacuum_and_thermal():
    cfg = SpaceConfig(32)
    vac = displaced_thermal(0.0, 0.0, cfg)
    v = covariance(cavity_moments(vac.matrix))
    assert np.abs(v - 0.5 * np.eye(2)).max() < 1e-12
    th = thermal_state(1.0, SpaceConfig(64))
    v = covariance(cavity_moments(th.matrix))
    assert np.abs(v - 1.5 * np.eye(2)).max() < 1e-10


def test_covariance_displacement_invariance():
    cfg = SpaceConfig(256)
    nbar = 1.0
    v_th = covariance(cavity_moments(thermal_state(nbar, cfg).matrix))
    rho = displaced_thermal(5.0 * np.exp(0.3j), nbar, cfg)
    v_d = covariance(cavity_moments(rho.matrix))
    assert np.abs(v_d - v_th).max() < 1e-8
    det = v_d[0, 0] * v_d[1, 1] - v_d[0, 1] ** 2
    assert np.sqrt(det) == pytest.approx(nbar + 0.5, abs=1e-8)


def test_thermal_level_cut():
    assert thermal_level_cut(0.0) == 1
    # geometric tail 2^-K below the cut for nbar = 1
    k = thermal_level_cut(1.0)
    assert 0.5**k <= 1e-16 < 0.5 ** (k - 1)
