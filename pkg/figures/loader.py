"""Shared CSV loader for the figure scripts.

Validates the ledger-CSV column contract exactly (names and order) and hands
back named columns.  The figures consume CSV files only; no physics is
recomputed here.
"""

from __future__ import annotations

import numpy as np

COLUMNS = (
    "gt", "theta", "Pe", "Re_Ceg", "Im_Ceg", "E_Q", "E_C", "S_Q", "S_C", "S_QC",
    "I_QC", "p_eff_Q", "nbar_eff_C", "Eth_Q", "Eth_C", "Q_C", "W_C", "Q_Q", "W_Q",
    "sigma_Q", "demon_lhs", "demon_rhs", "Re_mean_a", "Im_mean_a",
    "abs_cross_trace", "branch_overlap",
)


class SchemaError(Exception):
    """The CSV does not match the ledger column contract."""


class LedgerTable:
    def __init__(self, path: str):
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
        names = tuple(header.split(","))
        if names != COLUMNS:
            raise SchemaError(
                f"{path}: header does not match the ledger contract.\n"
                f"  expected: {','.join(COLUMNS)}\n"
                f"  found:    {header}"
            )
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.shape[1] != len(COLUMNS):
            raise SchemaError(f"{path}: expected {len(COLUMNS)} columns, found {data.shape[1]}")
        self.path = path
        self._data = data

    def __len__(self) -> int:
        return self._data.shape[0]

    def col(self, name: str) -> np.ndarray:
        return self._data[:, COLUMNS.index(name)]


def load(path: str) -> LedgerTable:
    return LedgerTable(path)


def split_csv_list(arg: str) -> list[str]:
    paths = [p.strip() for p in arg.split(",") if p.strip()]
    if not paths:
        raise SchemaError("no CSV paths given")
    return paths
