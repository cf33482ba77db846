"""Qubit entropy change over the full sweep, one trace per initial state,
with a semilog zoom of the early times."""

from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from loader import LedgerTable
from style import save

_COLORS = ("tab:blue", "tab:green", "tab:red")


def render(tables: list[LedgerTable], out_path: str, fmt: str) -> None:
    fig, (ax_main, ax_zoom) = plt.subplots(
        2, 1, figsize=(5.0, 5.2), height_ratios=[2.0, 1.0]
    )
    for i, table in enumerate(tables):
        gt = table.col("gt")
        ds_q = table.col("S_Q") - table.col("S_Q")[0]
        label = f"state {i + 1}"
        color = _COLORS[i % len(_COLORS)]
        ax_main.plot(gt, ds_q, color=color, label=label)
        early = gt <= max(5.0, gt.max() / 20.0)
        positive = ds_q[early] > 0
        if positive.any():
            ax_zoom.semilogy(gt[early][positive], ds_q[early][positive], color=color)
    ax_main.set_xlabel("g t")
    ax_main.set_ylabel(r"$\Delta S_Q$ [nats]")
    ax_main.legend(loc="best")
    ax_zoom.set_xlabel("g t")
    ax_zoom.set_ylabel(r"$\Delta S_Q$ [nats]")
    ax_zoom.set_title("early times", fontsize=8)
    fig.tight_layout()
    save(fig, out_path, fmt)
