"""Scenario runner: evolve, build the thermodynamic ledger, compare to oracles."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import find_peaks

from . import dynamics, fock, oracle, thermo
from .config import DENSE_LIMIT, ScenarioConfig, bloch_to_density
from .errors import InvariantViolation
from .thermo import LN2, ThermoRecord

CSV_COLUMNS = (
    "gt", "theta", "Pe", "Re_Ceg", "Im_Ceg", "E_Q", "E_C", "S_Q", "S_C", "S_QC",
    "I_QC", "p_eff_Q", "nbar_eff_C", "Eth_Q", "Eth_C", "Q_C", "W_C", "Q_Q", "W_Q",
    "sigma_Q", "demon_lhs", "demon_rhs", "Re_mean_a", "Im_mean_a",
    "abs_cross_trace", "branch_overlap",
)

# run-level invariant suite (exit code 3 when violated)
SIGMA_Q_FLOOR = -1e-6
FIRST_LAW_TOL = 1e-10
S_QC_DRIFT_TOL = 1e-7

_DUAL_COND_LIMIT = 1e-6  # |cos| of the branch half-angle below which duals blow up


@dataclass
class RawPoint:
    gt: float
    p_e: float
    c_eg: complex
    mean_a: complex
    mean_a2: complex
    mean_n: float
    sqrt_det_v: float
    s_q: float
    s_c: float
    cross_trace: complex
    branch_overlap: float
    excitation: float


@dataclass
class RunSummary:
    t_c: float
    t_min_observed: float
    s_q_minima: list
    s_q_maxima: list
    s_q_min_value: float
    fidelity_target_at_min: float
    oracle_max_dev: dict
    sigma_q_min: float
    first_law_max: float
    excitation_drift: float
    s_qc_spot_drift: float
    demon_margin_min: float
    demon_gap_at_tmin: float
    landauer_margin: float
    q_c_plateau: float


@dataclass
class RunReport:
    config: ScenarioConfig
    n_ph: int
    method: str
    grid: np.ndarray
    records: list
    predictions: list
    summary: RunSummary
    s_qc0: float


def resolve_method(method: str, n_ph: int) -> str:
    if method != "auto":
        return method
    return "dense" if n_ph <= DENSE_LIMIT else "branches"


def _dual_pair(gt: float, n0: float, phi0: float):
    """Branch basis at time gt and its dual (None when the branches merge)."""
    plus, minus = oracle.branch_qubit_states(gt, n0, phi0)
    m = np.column_stack([plus, minus])
    if abs(np.cos(gt / (2.0 * np.sqrt(n0)))) < _DUAL_COND_LIMIT:
        return m, None
    return m, np.linalg.inv(m)


def _measure(state, gt: float, cfg: ScenarioConfig, rho_pm0: complex) -> RawPoint:
    n0, phi0 = cfg.n0, cfg.phi0
    rho_q = dynamics.reduced_qubit(state)
    p_e = float(rho_q[0, 0].real)
    c_eg = complex(rho_q[0, 1])
    s_q = thermo.von_neumann_entropy(rho_q)

    if state.is_dense:
        rho_c = dynamics.reduced_cavity(state)
        mom = fock.cavity_moments(rho_c)
        s_c = thermo.von_neumann_entropy(rho_c)
    else:
        factors = dynamics.cavity_factors(state)
        mom = _moments_from_factors(factors)
        s_c = thermo.entropy_from_factors(factors)
    cov = fock.covariance(mom)
    det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
    sqrt_det_v = float(np.sqrt(max(det, 0.0)))

    _, minv = _dual_pair(gt, n0, phi0)
    if minv is None:
        cross = complex(np.nan, np.nan)
        overlap = np.nan
    else:
        coef = minv @ rho_q @ minv.conj().T
        cross = complex(coef[0, 1] / rho_pm0) if abs(rho_pm0) > 1e-12 else complex(np.nan, np.nan)
        overlap = _conditional_overlap(state, minv, coef)
    return RawPoint(
        gt=gt, p_e=p_e, c_eg=c_eg, mean_a=mom.mean_a, mean_a2=mom.mean_a2,
        mean_n=mom.mean_n, sqrt_det_v=sqrt_det_v, s_q=s_q, s_c=s_c,
        cross_trace=cross, branch_overlap=overlap,
        excitation=mom.mean_n + p_e,
    )


def _moments_from_factors(factors: np.ndarray) -> fock.CavityMoments:
    n = np.arange(factors.shape[1])
    absq = np.abs(factors) ** 2
    mean_n = float(np.real(absq @ n).sum())
    mean_a = complex(np.einsum("km,km->", factors[:, :-1].conj() * np.sqrt(n[1:]), factors[:, 1:]))
    mean_a2 = complex(
        np.einsum("km,km->", factors[:, :-2].conj() * np.sqrt(n[1:-1] * n[2:]), factors[:, 2:])
    )
    return fock.CavityMoments(mean_a=mean_a, mean_a2=mean_a2, mean_n=mean_n)


def _conditional_overlap(state, minv: np.ndarray, coef: np.ndarray) -> float:
    """Tr[rho_+ rho_-] of the normalized branch-conditioned cavity operators."""
    p_plus, p_minus = float(coef[0, 0].real), float(coef[1, 1].real)
    if min(p_plus, p_minus) < 1e-12:
        return np.nan
    if state.is_dense:
        n = state.cfg.n_ph
        blocks = state.dense.reshape(2, n, 2, n)
        b_pp = np.einsum("q,qnrm,r->nm", minv[0], blocks, minv[0].conj())
        b_mm = np.einsum("q,qnrm,r->nm", minv[1], blocks, minv[1].conj())
        num = float(np.real(np.einsum("nm,mn->", b_pp, b_mm)))
    else:
        u_plus = np.einsum("q,bqn->bn", minv[0], state.vectors)
        u_minus = np.einsum("q,bqn->bn", minv[1], state.vectors)
        x = np.einsum("bn,cn->bc", u_plus.conj(), u_minus)
        num = float(state.weights @ (np.abs(x) ** 2) @ state.weights)
    return num / (p_plus * p_minus)


def _parabolic_refine(gts: np.ndarray, vals: np.ndarray, i: int):
    y0, y1, y2 = vals[i - 1], vals[i], vals[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if abs(denom) < 1e-300:
        return float(gts[i]), float(y1)
    delta = 0.5 * (y0 - y2) / denom
    delta = float(np.clip(delta, -1.0, 1.0))
    step = gts[i + 1] - gts[i]
    return float(gts[i] + delta * step), float(y1 - 0.25 * (y0 - y2) * delta)


def locate_extrema(gts, values, min_prominence: float = 0.0):
    """Interior minima and maxima with parabolic refinement.

    Returns (minima, maxima) as lists of (gt, value); a monotone series has
    neither.  min_prominence filters grid-level ripples.
    """
    gts = np.asarray(gts, dtype=float)
    values = np.asarray(values, dtype=float)
    if gts.size < 3:
        return [], []
    prom = min_prominence if min_prominence > 0 else None
    minima = [
        _parabolic_refine(gts, values, i)
        for i in find_peaks(-values, prominence=prom)[0]
    ]
    maxima = [
        _parabolic_refine(gts, values, i)
        for i in find_peaks(values, prominence=prom)[0]
    ]
    return minima, maxima


def _oracle_deviation(records, predictions, in_window_only: bool = True) -> dict:
    dev = {k: 0.0 for k in (
        "p_e", "c_eg", "q_c_first", "q_c", "sqrt_det_v", "mean_a", "mean_n", "s_q",
    )}
    used = False
    for rec, pred in zip(records, predictions):
        if in_window_only and not pred.in_window:
            continue
        used = True
        dev["p_e"] = max(dev["p_e"], abs(rec.p_e - pred.p_e_first_order))
        dev["c_eg"] = max(dev["c_eg"], abs(rec.c_eg - pred.c_eg_first_order))
        dev["q_c_first"] = max(dev["q_c_first"], abs(rec.q_c - pred.q_c_first_order))
        dev["q_c"] = max(dev["q_c"], abs(rec.q_c - pred.q_c))
        dev["sqrt_det_v"] = max(dev["sqrt_det_v"], abs(rec.sqrt_det_v_exact - pred.sqrt_det_v))
        dev["mean_a"] = max(dev["mean_a"], abs(rec.mean_a - pred.mean_a))
        dev["mean_n"] = max(dev["mean_n"], abs(rec.e_c - pred.mean_n))
        dev["s_q"] = max(dev["s_q"], abs(rec.s_q - pred.s_q))
    return dev if used else {k: np.nan for k in dev}


@dataclass
class LedgerRecord(ThermoRecord):
    """ThermoRecord plus diagnostics that do not go to CSV."""

    sqrt_det_v_exact: float = np.nan
    excitation: float = np.nan


def run_scenario(cfg: ScenarioConfig, min_prominence: float = 0.01) -> RunReport:
    """Evolve the configured scenario over its grid and assemble the ledger."""
    cfg = cfg.validate()
    n_ph = cfg.n_ph if cfg.n_ph > 0 else fock.auto_truncation(cfg.n0, cfg.nbar)
    space = fock.SpaceConfig(n_ph=n_ph)
    method = resolve_method(cfg.method, n_ph)

    rho_q0 = bloch_to_density(cfg.init_qubit)
    alpha0 = np.sqrt(cfg.n0) * np.exp(1j * cfg.phi0)
    if method == "dense":
        rho_c0 = fock.displaced_thermal(alpha0, cfg.nbar, space)
        state0 = dynamics.tensor_state(rho_q0, rho_c0, space)
    else:
        state0 = dynamics.decompose_thermal_branches(
            rho_q0, alpha0, cfg.nbar, space, rank_tol=cfg.rank_tol
        )

    basis0, minv0 = _dual_pair(0.0, cfg.n0, cfg.phi0)
    rho_pm0 = complex((minv0 @ rho_q0 @ minv0.conj().T)[0, 1])

    grid = np.linspace(0.0, cfg.gt_max, cfg.steps)
    raws = [_measure(dynamics.evolve(state0, gt), gt, cfg, rho_pm0) for gt in grid]

    s_qc0 = raws[0].s_q + raws[0].s_c
    t_c = oracle.collapse_time(cfg.n0, cfg.nbar)
    tc_idx = int(np.searchsorted(grid, t_c))
    tc_idx = min(tc_idx, len(grid) - 1)

    records = _build_records(raws, cfg, s_qc0, tc_idx)
    predictions = [
        oracle.unitary_expansion(rec.theta, cfg.n0, cfg.nbar, cfg.phi0) for rec in records
    ]
    summary = _summarize(cfg, grid, records, predictions, t_c, min_prominence)
    summary.s_qc_spot_drift = _s_qc_spot_check(state0, grid, s_qc0)
    _assert_invariants(summary)

    report = RunReport(
        config=cfg, n_ph=n_ph, method=method, grid=grid, records=records,
        predictions=predictions, summary=summary, s_qc0=s_qc0,
    )
    if cfg.out_path:
        write_csv(cfg.out_path, records)
    return report


def _build_records(raws, cfg: ScenarioConfig, s_qc0: float, tc_idx: int):
    root = 2.0 * np.sqrt(cfg.n0)
    beta_c0 = thermo.beta_of_nbar(cfg.nbar)
    r0 = raws[0]
    eth_q0 = thermo.qubit_effective_occupation(r0.s_q)
    eth_c0 = thermo.cavity_effective_occupation(r0.s_c)

    # first pass: everything except the demon columns (they need the t_c row)
    partial = []
    for r in raws:
        p_eff = thermo.qubit_effective_occupation(r.s_q)
        nbar_eff = thermo.cavity_effective_occupation(r.s_c)
        q_q, w_q = thermo.heat_and_work(eth_q0, p_eff, r0.p_e, r.p_e)
        q_c, w_c = thermo.heat_and_work(eth_c0, nbar_eff, r0.mean_n, r.mean_n)
        i_qc = thermo.mutual_information(r.s_q, r.s_c, s_qc0)
        sigma = thermo.clausius_sigma(r.s_q - r0.s_q, beta_c0, q_c)
        partial.append(
            LedgerRecord(
                gt=r.gt, theta=root * r.gt, p_e=r.p_e, c_eg=r.c_eg, e_q=r.p_e,
                e_c=r.mean_n, s_q=r.s_q, s_c=r.s_c, s_qc=s_qc0, i_qc=i_qc,
                p_eff_q=p_eff, nbar_eff_c=nbar_eff, eth_q=p_eff, eth_c=nbar_eff,
                q_q=q_q, q_c=q_c, w_q=w_q, w_c=w_c, sigma_q=sigma,
                demon_lhs=np.nan, demon_rhs=np.nan, mean_a=r.mean_a,
                cross_trace=r.cross_trace, branch_overlap=r.branch_overlap,
                sqrt_det_v_exact=r.sqrt_det_v, excitation=r.excitation,
            )
        )
    ref = partial[tc_idx]
    beta_tc = thermo.beta_of_nbar(ref.nbar_eff_c)
    if np.isfinite(beta_tc):
        for rec in partial:
            rec.demon_lhs, rec.demon_rhs = thermo.demon_terms(
                ref.s_q, ref.q_c, ref.i_qc, beta_tc, rec.s_q, rec.q_c, rec.i_qc
            )
    return partial


def _summarize(cfg, grid, records, predictions, t_c, min_prominence) -> RunSummary:
    s_q = np.array([rec.s_q for rec in records])
    minima, maxima = locate_extrema(grid, s_q, min_prominence)
    if minima:
        t_min_obs, s_q_min = minima[0]
    else:
        t_min_obs, s_q_min = np.nan, np.nan

    eval_t = t_min_obs if np.isfinite(t_min_obs) else np.pi * np.sqrt(cfg.n0)
    idx_min = int(np.argmin(np.abs(grid - eval_t)))
    fid = 0.5 + float(np.real(np.exp(-1j * cfg.phi0) * records[idx_min].c_eg))

    sigma_vals = np.array([rec.sigma_q for rec in records])
    first_law = max(
        max(abs(rec.w_q + rec.q_q + (rec.e_q - records[0].e_q)) for rec in records),
        max(abs(rec.w_c + rec.q_c + (rec.e_c - records[0].e_c)) for rec in records),
    )
    excitation = np.array([rec.excitation for rec in records])

    demon_margin, demon_gap = np.nan, np.nan
    landauer = np.nan
    if np.isfinite(t_min_obs):
        mask = (grid >= t_c) & (grid <= t_min_obs)
        lhs = np.array([rec.demon_lhs for rec in records])
        rhs = np.array([rec.demon_rhs for rec in records])
        if mask.any() and np.isfinite(lhs[mask]).all():
            demon_margin = float(np.min(lhs[mask] - rhs[mask]))
        demon_gap = float(abs(lhs[idx_min] - rhs[idx_min]))
        beta0 = thermo.beta_of_nbar(cfg.nbar)
        if np.isfinite(beta0):
            landauer = float(records[idx_min].w_c - LN2 / beta0)

    win_hi = 0.9 * np.pi * np.sqrt(cfg.n0)
    win = (grid >= 2.0) & (grid <= win_hi)
    q_c = np.array([rec.q_c for rec in records])
    plateau = float(np.median(q_c[win])) if win.sum() >= 3 else np.nan

    return RunSummary(
        t_c=t_c,
        t_min_observed=t_min_obs,
        s_q_minima=minima,
        s_q_maxima=maxima,
        s_q_min_value=s_q_min,
        fidelity_target_at_min=fid,
        oracle_max_dev=_oracle_deviation(records, predictions),
        sigma_q_min=float(np.nanmin(sigma_vals)) if np.isfinite(sigma_vals).any() else np.nan,
        first_law_max=float(first_law),
        excitation_drift=float(np.max(np.abs(excitation - excitation[0]))),
        s_qc_spot_drift=0.0,
        demon_margin_min=demon_margin,
        demon_gap_at_tmin=demon_gap,
        landauer_margin=landauer,
        q_c_plateau=plateau,
    )


def _s_qc_spot_check(state0, grid, s_qc0: float) -> float:
    """Global-entropy constancy at three interior grid times."""
    spots = [len(grid) // 4, len(grid) // 2, (3 * len(grid)) // 4]
    drift = 0.0
    for i in spots:
        state = dynamics.evolve(state0, float(grid[i]))
        if state.is_dense:
            s = thermo.von_neumann_entropy(state.dense)
        else:
            norms = np.einsum("bqn,bqn->b", state.vectors.conj(), state.vectors).real
            w = np.clip(state.weights * norms, 0.0, 1.0)
            w = w[w > 0.0]
            s = float(-(w * np.log(w)).sum())
        drift = max(drift, abs(s - s_qc0))
    return drift


def _assert_invariants(summary: RunSummary) -> None:
    problems = []
    if np.isfinite(summary.sigma_q_min) and summary.sigma_q_min < SIGMA_Q_FLOOR:
        problems.append(f"Clausius: min sigma_Q = {summary.sigma_q_min:.3e} < {SIGMA_Q_FLOOR}")
    if summary.first_law_max > FIRST_LAW_TOL:
        problems.append(f"first law: max |W+Q+dE| = {summary.first_law_max:.3e} > {FIRST_LAW_TOL}")
    if summary.s_qc_spot_drift > S_QC_DRIFT_TOL:
        problems.append(f"S_QC drift {summary.s_qc_spot_drift:.3e} > {S_QC_DRIFT_TOL}")
    if problems:
        raise InvariantViolation("; ".join(problems))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: str, records) -> None:
    """Fixed-order CSV contract, 17 significant digits, '\\n' newlines."""
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join(_fmt(v) for v in (
            r.gt, r.theta, r.p_e, r.c_eg.real, r.c_eg.imag, r.e_q, r.e_c,
            r.s_q, r.s_c, r.s_qc, r.i_qc, r.p_eff_q, r.nbar_eff_c, r.eth_q,
            r.eth_c, r.q_c, r.w_c, r.q_q, r.w_q, r.sigma_q, r.demon_lhs,
            r.demon_rhs, r.mean_a.real, r.mean_a.imag, abs(r.cross_trace),
            r.branch_overlap,
        )))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


COMPARE_COLUMNS = (
    "n0", "n_ph", "method", "dev_Pe", "dev_Ceg", "dev_QC1", "dev_QC",
    "dev_sqrt_detV", "dev_mean_a", "dev_mean_n", "dev_S_Q",
    "ratio_Pe", "ratio_Ceg", "ratio_QC1",
)


@dataclass
class CompareReport:
    n0_list: list
    rows: list  # dicts keyed by COMPARE_COLUMNS
    reports: list


def run_compare(cfg: ScenarioConfig, n0_list, theta_max: float = 2.0 * np.pi) -> CompareReport:
    """Exact-vs-oracle deviation table over a rotation-angle grid per n0.

    The grid covers theta in [0, theta_max] so deviations are comparable
    across n0; the ratio columns divide the previous row's deviation by the
    current one (the first-order truncation scales as 1/n0^2).
    """
    rows, reports = [], []
    prev = None
    for n0 in n0_list:
        sub = replace(
            cfg, scenario="custom", n0=float(n0),
            gt_max=theta_max / (2.0 * np.sqrt(float(n0))), out_path="",
        ).validate()
        rep = run_scenario(sub)
        # the compare grid itself is theta <= theta_max, so measure every row
        # to keep deviations comparable across n0
        dev = _oracle_deviation(rep.records, rep.predictions, in_window_only=False)
        row = {
            "n0": float(n0),
            "n_ph": rep.n_ph,
            "method": rep.method,
            "dev_Pe": dev["p_e"],
            "dev_Ceg": dev["c_eg"],
            "dev_QC1": dev["q_c_first"],
            "dev_QC": dev["q_c"],
            "dev_sqrt_detV": dev["sqrt_det_v"],
            "dev_mean_a": dev["mean_a"],
            "dev_mean_n": dev["mean_n"],
            "dev_S_Q": dev["s_q"],
            "ratio_Pe": np.nan if prev is None else prev["dev_Pe"] / dev["p_e"],
            "ratio_Ceg": np.nan if prev is None else prev["dev_Ceg"] / dev["c_eg"],
            "ratio_QC1": np.nan if prev is None else prev["dev_QC1"] / dev["q_c_first"],
        }
        rows.append(row)
        reports.append(rep)
        prev = row
    if cfg.out_path:
        write_compare_csv(cfg.out_path, rows)
    return CompareReport(n0_list=list(n0_list), rows=rows, reports=reports)


def write_compare_csv(path: str, rows) -> None:
    lines = [",".join(COMPARE_COLUMNS)]
    for row in rows:
        cells = []
        for key in COMPARE_COLUMNS:
            val = row[key]
            cells.append(val if isinstance(val, str) else _fmt(float(val)))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
