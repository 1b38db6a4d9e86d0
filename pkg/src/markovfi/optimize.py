"""Multi-start simplex search and one-dimensional grid refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import OptimizerDidNotConverge


@dataclass(frozen=True)
class MultiStartResult:
    """Best point over a set of restarts with aggregate diagnostics."""

    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    restarts: int
    converged: int


def multistart_minimize(fun: Callable[[np.ndarray], float],
                        starts: Sequence[np.ndarray],
                        xatol: float = 1e-9,
                        fatol: float = 1e-12,
                        maxiter: int | None = None) -> MultiStartResult:
    """Nelder-Mead from every start; keep the lowest value.

    Restarts are processed in input order and the first strictly lowest
    value wins, so the outcome is independent of scheduling.

    Raises
    ------
    OptimizerDidNotConverge
        If no restart met the simplex tolerance within ``maxiter``.
    """
    best_x, best_f = None, np.inf
    iters = evals = converged = 0
    for x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        limit = maxiter if maxiter is not None else 2000 * max(x0.size, 1)
        res = minimize(fun, x0, method="Nelder-Mead",
                       options={"xatol": xatol, "fatol": fatol,
                                "maxiter": limit, "maxfev": 2 * limit})
        iters += int(res.nit)
        evals += int(res.nfev)
        if res.success:
            converged += 1
        if np.isfinite(res.fun) and res.fun < best_f:
            best_x, best_f = np.asarray(res.x), float(res.fun)
    if converged == 0 or best_x is None:
        raise OptimizerDidNotConverge(
            f"none of {len(starts)} restarts converged")
    return MultiStartResult(best_x, best_f, iters, evals, len(starts), converged)


def grid_golden_minimize(fun: Callable[[float], float], lo: float, hi: float,
                         n: int = 2048):
    """Minimise a scalar function on the open interval ``(lo, hi)``.

    The function is evaluated on ``n`` cell midpoints; the best cell and its
    neighbours form a bracket refined by golden-section search.

    Returns
    -------
    x, fx, grid_min : float
        Refined minimiser, its value, and the plain grid minimum.
    """
    h = (hi - lo) / n
    xs = lo + h * (np.arange(n) + 0.5)
    fs = np.array([fun(x) for x in xs])
    k = int(np.argmin(fs))
    grid_min = float(fs[k])
    x_best, f_best = float(xs[k]), grid_min
    if 0 < k < n - 1 and fs[k] < fs[k - 1] and fs[k] < fs[k + 1]:
        res = minimize_scalar(fun, bracket=(xs[k - 1], xs[k], xs[k + 1]),
                              method="golden", tol=1e-10)
        if lo < res.x < hi and res.fun < f_best:
            x_best, f_best = float(res.x), float(res.fun)
    return x_best, f_best, grid_min
