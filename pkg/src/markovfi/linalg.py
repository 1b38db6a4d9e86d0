"""Dense symmetric eigensolver by cyclic Jacobi rotations."""

from __future__ import annotations

import numpy as np

from .errors import EigensolveFailure


def jacobi_eigh(a, tol: float = 1e-14, max_sweeps: int = 100):
    """Eigen-decomposition of a real symmetric matrix.

    Cyclic Jacobi: each sweep annihilates every off-diagonal pair once.
    Iteration stops when the off-diagonal Frobenius norm falls below
    ``tol`` times the Frobenius norm of the input.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Symmetric matrix; only symmetry up to rounding is assumed.
    tol : float
        Relative off-diagonal threshold.
    max_sweeps : int
        Sweep budget.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n)
        Orthonormal eigenvectors as columns, matching ``w``.

    Raises
    ------
    EigensolveFailure
        If the sweep budget is exhausted.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EigensolveFailure("matrix must be square")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    target = tol * scale
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a[mask]))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        off = float(np.linalg.norm(a[mask]))
        if off > target:
            raise EigensolveFailure(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e})")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
