"""Feedback trajectories: the qubit on the Bloch equator and the mean field
amplitude in phase space, one curve per input CSV (one per branch)."""

from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from loader import LedgerTable
from style import save

_COLORS = ("tab:blue", "tab:green")


def render(tables: list[LedgerTable], out_path: str, fmt: str) -> None:
    fig, (ax_q, ax_f) = plt.subplots(1, 2, figsize=(7.2, 3.6))
    circle = np.linspace(0.0, 2.0 * np.pi, 241)
    ax_q.plot(np.cos(circle), np.sin(circle), color="0.85", lw=0.8, zorder=0)
    for i, table in enumerate(tables):
        color = _COLORS[i % len(_COLORS)]
        r_x = 2.0 * table.col("Re_Ceg")
        r_y = -2.0 * table.col("Im_Ceg")
        ax_q.plot(r_x, r_y, color=color, label=f"branch {i + 1}")
        ax_q.plot(r_x[-1], r_y[-1], "o", color="tab:red", ms=5, zorder=5)
        re_a, im_a = table.col("Re_mean_a"), table.col("Im_mean_a")
        ax_f.plot(re_a, im_a, color=color)
        ax_f.plot(re_a[0], im_a[0], "o", color="gold", ms=6, zorder=5)
    ax_q.set_xlabel(r"$\langle\sigma_x\rangle$")
    ax_q.set_ylabel(r"$\langle\sigma_y\rangle$")
    ax_q.set_aspect("equal")
    ax_q.set_title("qubit, Bloch equator", fontsize=9)
    ax_q.legend(loc="lower left")
    ax_f.set_xlabel(r"Re $\langle a \rangle$")
    ax_f.set_ylabel(r"Im $\langle a \rangle$")
    ax_f.set_aspect("equal")
    ax_f.set_title("mean field amplitude", fontsize=9)
    fig.tight_layout()
    save(fig, out_path, fmt)
