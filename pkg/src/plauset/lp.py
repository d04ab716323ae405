"""Dense two-phase simplex for the small LPs built by the set constructions."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _kernels

STATUS = {
    _kernels.OPTIMAL: "optimal",
    _kernels.INFEASIBLE: "infeasible",
    _kernels.UNBOUNDED: "unbounded",
    _kernels.ITERATION_LIMIT: "iteration limit",
    _kernels.SINGULAR: "numerically singular",
}


class LinearProgramError(RuntimeError):
    pass


class LPResult(NamedTuple):
    x: np.ndarray
    objective: float
    duals: np.ndarray


def solve_standard_form(c, A_eq, b_eq) -> LPResult:
    """Solve ``min c.x  s.t.  A_eq x = b_eq, x >= 0`` exactly (up to pivoting round-off).

    ``duals`` are the row multipliers ``y`` satisfying ``c - A_eq^T y >= 0``.
    """
    c = np.ascontiguousarray(c, dtype=float)
    A = np.ascontiguousarray(np.atleast_2d(A_eq), dtype=float)
    b = np.ascontiguousarray(b_eq, dtype=float)
    if A.shape != (b.shape[0], c.shape[0]):
        raise ValueError(f"inconsistent LP dimensions: A {A.shape}, b {b.shape}, c {c.shape}")
    status, x, obj, duals = _kernels.simplex(c, A, b)
    if status != _kernels.OPTIMAL:
        raise LinearProgramError(f"linear program is {STATUS[status]}")
    return LPResult(x, float(obj), duals)
