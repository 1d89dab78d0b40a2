"""Iteration trace records and CSV emission."""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from typing import Iterable, Optional

TRACE_HEADER = [
    "k",
    "phase",
    "f",
    "F_mu",
    "v_norm_x",
    "alpha",
    "zeta",
    "l_estimate",
    "inner_trial",
    "grad_residual",
    "complementarity",
    "wall_time_ns",
]


@dataclass(frozen=True)
class TraceRecord:
    k: int
    phase: str  # "outer" | "inner" | "analytic_center"
    f: float
    f_mu: float
    v_norm_x: float
    alpha: float
    zeta: float
    l_estimate: float
    inner_trial: int
    grad_residual: float
    complementarity: float
    wall_time_ns: int

    def row(self) -> list:
        vals = [getattr(self, f.name) for f in fields(self)]
        out = []
        for v in vals:
            if isinstance(v, float):
                out.append(format(v, ".17g"))
            else:
                out.append(v)
        return out


def write_trace_csv(path, records: Iterable[TraceRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_HEADER)
        for rec in records:
            w.writerow(rec.row())


class TraceBuffer:
    """In-memory sink; optionally forwards to a user callback."""

    def __init__(self, callback=None):
        self.records: list[TraceRecord] = []
        self._callback = callback

    def emit(self, rec: TraceRecord) -> None:
        self.records.append(rec)
        if self._callback is not None:
            self._callback(rec)
