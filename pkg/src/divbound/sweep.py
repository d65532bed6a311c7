"""Tabulate closed-form minima over (eps, q) grids."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bounds import brute_force_min, jeffrey_min, jst_min
from .quantum import chernoff_min_closed_form

QUANTITIES = ("jst_min", "jeffrey_min", "chernoff_min")


@dataclass(frozen=True)
class SweepSpec:
    eps_grid: tuple[float, ...]
    q_grid: tuple[float, ...]
    quantity: str
    oracle: bool = False
    support: int = 2
    grid: int = 2000

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}; expected one of {QUANTITIES}")
        if not self.eps_grid or not self.q_grid:
            raise ValueError("sweep grids must be nonempty")
        if any(not 0.0 <= e <= 1.0 for e in self.eps_grid):
            raise ValueError("eps values must lie in [0, 1]")
        if any(not q > 0 for q in self.q_grid):
            raise ValueError("q values must be > 0")
        if self.oracle and self.quantity == "chernoff_min":
            raise ValueError("no brute-force oracle for chernoff_min")


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One row per ``(eps, q)``; ``chernoff_min`` ignores ``q``."""
    rows = []
    q_values: Sequence[float] = spec.q_grid if spec.quantity != "chernoff_min" else (float("nan"),)
    for eps in spec.eps_grid:
        for q in q_values:
            if spec.quantity == "jst_min":
                value = jst_min(eps, q)
            elif spec.quantity == "jeffrey_min":
                value = jeffrey_min(eps, q)
            else:
                value = chernoff_min_closed_form(eps)
            row = {"quantity": spec.quantity, "eps": eps, "q": q, "value": value}
            if spec.oracle:
                name = spec.quantity.removesuffix("_min")
                oracle = brute_force_min(name, q, eps, spec.support, spec.grid)
                row["oracle"] = oracle
                row["slack"] = oracle - value
            rows.append(row)
    return rows
