"""Cavity heat, work and internal-energy change against the rotation angle."""

from __future__ import annotations

import matplotlib.pyplot as plt

from loader import LedgerTable
from style import save


def render(tables: list[LedgerTable], out_path: str, fmt: str) -> None:
    table = tables[0]
    theta = table.col("theta")
    de_c = table.col("E_C") - table.col("E_C")[0]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(theta, table.col("Q_C"), color="tab:red", label=r"$Q_C$")
    ax.plot(theta, table.col("W_C"), color="tab:green", label=r"$W_C$")
    ax.plot(theta, de_c, color="tab:blue", label=r"$\Delta E_C$")
    ax.set_xlabel(r"$\theta = 2 g t \sqrt{n_0}$")
    ax.set_ylabel(r"energy [$\hbar\omega_0$]")
    ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    ax.legend(loc="best")
    fig.tight_layout()
    save(fig, out_path, fmt)
