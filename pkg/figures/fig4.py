"""Maximally-mixed-qubit scenario: entropies and mutual information on top,
cavity heat/work/energy below."""

from __future__ import annotations

import matplotlib.pyplot as plt

from loader import LedgerTable
from style import save


def render(tables: list[LedgerTable], out_path: str, fmt: str) -> None:
    table = tables[0]
    gt = table.col("gt")
    fig, (ax_a, ax_b) = plt.subplots(2, 1, figsize=(5.0, 5.4), sharex=True)
    ax_a.plot(gt, table.col("S_C"), color="tab:blue", label=r"$S_C$")
    ax_a.plot(gt, table.col("S_Q"), color="tab:orange", label=r"$S_Q$")
    ax_a.plot(gt, table.col("I_QC"), color="tab:purple", label=r"$I_{QC}$")
    ax_a.set_ylabel("entropy [nats]")
    ax_a.legend(loc="best")
    de_c = table.col("E_C") - table.col("E_C")[0]
    ax_b.plot(gt, table.col("Q_C"), color="tab:red", label=r"$Q_C$")
    ax_b.plot(gt, table.col("W_C"), color="tab:green", label=r"$W_C$")
    ax_b.plot(gt, de_c, color="tab:blue", label=r"$\Delta E_C$")
    ax_b.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    ax_b.set_xlabel("g t")
    ax_b.set_ylabel(r"energy [$\hbar\omega_0$]")
    ax_b.legend(loc="best")
    fig.tight_layout()
    save(fig, out_path, fmt)
