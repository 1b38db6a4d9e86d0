"""Scalar functionals of observables and densities.

Dirichlet forms, entropies and Fisher informations with respect to an
arbitrary strictly positive reference measure ``zeta``. Arguments may be the
package types or plain arrays; densities passed as plain arrays are only
required to be positive, and the formulas are evaluated as written.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .chain import as_array
from .errors import (
    DeltaTooLarge,
    DensityUnderflow,
    DimensionMismatch,
    LambdaOutOfRange,
    NonPositiveValue,
    ValidationError,
)

RATIO_FLOOR = 1e-300
_SERIES_CUTOFF = 1e-2


def _series_phi(h):
    # x - 1 - log x at x = 1 + h: sum_{k>=2} (-h)^k / k
    out = np.zeros_like(h)
    p = h * h
    for k in range(2, 13):
        out += (1.0 if k % 2 == 0 else -1.0) * p / k
        p = p * h
    return out


def _series_psi(h):
    # x log x - x + 1 at x = 1 + h: sum_{k>=2} (-h)^k / (k (k-1))
    out = np.zeros_like(h)
    p = h * h
    for k in range(2, 13):
        out += (1.0 if k % 2 == 0 else -1.0) * p / (k * (k - 1))
        p = p * h
    return out


def phi_divergence(x):
    """``x - 1 - log x``, accurate near ``x = 1``."""
    x = np.asarray(x, dtype=float)
    h = x - 1.0
    small = np.abs(h) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, _series_phi(h), safe - 1.0 - np.log(safe))


def psi_entropy(x):
    """``x log x - x + 1``, accurate near ``x = 1``; equals 1 at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    h = x - 1.0
    small = np.abs(h) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, _series_psi(h), xlogy(safe, safe) - safe + 1.0)


def _phi_1p(h):
    # Phi(1 + h) from the increment, avoiding the rounding of 1 + h
    h = np.asarray(h, dtype=float)
    small = np.abs(h) < _SERIES_CUTOFF
    safe = np.where(small, 0.0, h)
    return np.where(small, _series_phi(h), safe - np.log1p(safe))


def _psi_1p(h):
    h = np.asarray(h, dtype=float)
    small = np.abs(h) < _SERIES_CUTOFF
    safe = np.where(small, 0.0, h)
    return np.where(small, _series_psi(h), (1.0 + safe) * np.log1p(safe) - safe)


def _pair(zeta, f):
    z = as_array(zeta)
    v = as_array(f)
    if z.shape != v.shape or z.ndim != 1:
        raise DimensionMismatch("measure and function sizes differ")
    return z, v


def _triple(zeta, f, M):
    z, v = _pair(zeta, f)
    rates = as_array(M)
    if rates.shape != (z.size, z.size):
        raise DimensionMismatch("generator size differs from measure size")
    return z, v, rates


def _positive(v, what="values"):
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise NonPositiveValue(f"{what} must be finite and strictly positive")


def _offdiag(rates):
    off = rates.copy()
    np.fill_diagonal(off, 0.0)
    return off


def expectation(zeta, f) -> float:
    z, v = _pair(zeta, f)
    return float(z @ v)


def inner(zeta, f, g) -> float:
    """Weighted inner product ``(f, g)_zeta``."""
    z, a = _pair(zeta, f)
    b = as_array(g)
    return float(z @ (a * b))


def variance(zeta, f) -> float:
    """``E[f^2] - E[f]^2`` under ``zeta``, computed in centred form."""
    z, v = _pair(zeta, f)
    c = v - z @ v
    return float(z @ (c * c))


def relative_entropy(zeta, phi) -> float:
    """``sum phi log phi zeta``.

    Evaluated as ``sum zeta Psi(phi) + sum zeta (phi - 1)`` with
    ``Psi(x) = x log x - x + 1``, which is algebraically identical and keeps
    full relative accuracy for densities close to one.
    """
    z, v = _pair(zeta, phi)
    _positive(v, "density values")
    return float(z @ psi_entropy(v) + z @ (v - 1.0))


def centred_entropy(zeta, f) -> float:
    """``sum f log f zeta - E[f] log E[f]`` for positive ``f``.

    Raises
    ------
    NonPositiveValue
    """
    z, v = _pair(zeta, f)
    _positive(v)
    m = float(z @ v)
    return m * float(z @ psi_entropy(v / m))


def gen_dirichlet(zeta, f, M) -> float:
    """Generalised Dirichlet form ``1/2 sum M(z,z') zeta(z) (f(z)-f(z'))^2``."""
    z, v, rates = _triple(zeta, f, M)
    diff = v[:, None] - v[None, :]
    return 0.5 * float(np.sum(_offdiag(rates) * z[:, None] * diff * diff))


def dirichlet_pairing(zeta, f, M) -> float:
    """``(f, -M f)_zeta``; equals the Dirichlet form only at stationarity."""
    z, v, rates = _triple(zeta, f, M)
    return -float(z @ (v * (rates @ v)))


def _ratios(v, rates):
    off = _offdiag(rates)
    i, j = np.nonzero(off)
    r = v[j] / v[i]
    if np.any(r < RATIO_FLOOR):
        raise DensityUnderflow("density ratio below 1e-300")
    return off[i, j], i, j, r


def gen_fisher(zeta, phi, M) -> float:
    """Generalised Fisher information.

    ``sum_{z != z'} M(z,z') zeta(z) phi(z) Phi(phi(z')/phi(z))`` with
    ``Phi(x) = x - 1 - log x``. Diagonal terms vanish and are skipped.
    """
    z, v, rates = _triple(zeta, phi, M)
    _positive(v, "density values")
    m, i, j, r = _ratios(v, rates)
    return float(np.sum(m * z[i] * v[i] * phi_divergence(r)))


def gen_fisher_lambda(zeta, f, M, lam: float) -> float:
    """Fisher-type functional with integrand ``x - 1 - (x^lam - 1)/lam``.

    Raises
    ------
    LambdaOutOfRange
        Unless ``0 < lam < 1``.
    """
    if not 0.0 < lam < 1.0:
        raise LambdaOutOfRange(f"lambda must lie in (0, 1), got {lam}")
    z, v, rates = _triple(zeta, f, M)
    _positive(v)
    m, i, j, r = _ratios(v, rates)
    integrand = (r - 1.0) - np.expm1(lam * np.log(r)) / lam
    return float(np.sum(m * z[i] * v[i] * integrand))


def classical_fisher(pi, phi, M) -> float:
    """``(phi, -M log phi)_pi``.

    Agrees with :func:`gen_fisher` when ``pi`` is the steady state of ``M``;
    a warning is issued otherwise.
    """
    p, v, rates = _triple(pi, phi, M)
    _positive(v, "density values")
    resid = float(np.abs(rates.T @ p).max())
    if resid > 1e-10 * max(1.0, float(np.abs(rates).max())):
        warnings.warn("classical_fisher called with a non-stationary measure",
                      RuntimeWarning, stacklevel=2)
    return -float(p @ (v * (rates @ np.log(v))))


@dataclass(frozen=True)
class TaylorCheck:
    """Comparison of a functional with its quadratic approximation."""

    name: str
    delta: float
    predicted: float
    actual: float
    remainder_bound: float

    @property
    def error(self) -> float:
        return abs(self.actual - self.predicted)

    @property
    def allowed(self) -> float:
        return abs(self.delta) ** 3 * self.remainder_bound

    rounding_floor: float = 0.0

    @property
    def passed(self) -> bool:
        slack = 1e-15 * max(abs(self.actual), abs(self.predicted))
        return self.error <= self.allowed + slack + self.rounding_floor


def taylor_audit(zeta, f, M, delta: float):
    """Quadratic expansions at ``phi = 1 + delta f`` for centred ``f``.

    Both functionals are evaluated from the increment ``h = delta f``
    rather than from the rounded vector ``1 + h``, so the comparison stays
    meaningful for very small ``delta``. The entropy carries the linear term
    ``delta E[f]``, which vanishes analytically; its computed value plus a
    summation rounding allowance is reported as ``rounding_floor``.

    Returns
    -------
    fisher, entropy : TaylorCheck
        ``R(1 + delta f)`` against ``delta^2 E(f)`` with remainder bound
        ``3 |M|_max |Z| |f|_inf^3``, and ``H(1 + delta f)`` against
        ``delta^2 var(f) / 2`` with remainder bound ``|f|_inf^3 / 3``.

    Raises
    ------
    DeltaTooLarge
        If ``|delta| > 1 / (2 |f|_inf)``.
    """
    z, v, rates = _triple(zeta, f, M)
    fmax = float(np.abs(v).max())
    if abs(z @ v) > 1e-12 * max(fmax, 1.0):
        raise ValidationError("taylor_audit needs f with zero mean")
    if fmax > 0 and abs(delta) > 0.5 / fmax * (1 + 1e-12):
        raise DeltaTooLarge(
            f"|delta| = {abs(delta):.3g} exceeds 1/(2|f|) = {0.5 / fmax:.3g}")
    h = delta * v
    n = z.size
    off = _offdiag(rates)
    i, j = np.nonzero(off)
    # phi_j / phi_i - 1 = (h_j - h_i) / (1 + h_i)
    ratio_inc = (h[j] - h[i]) / (1.0 + h[i])
    fisher_val = float(np.sum(off[i, j] * z[i] * (1.0 + h[i]) * _phi_1p(ratio_inc)))
    mean = float(z @ h)
    entropy_val = float(z @ _psi_1p(h)) + mean
    eps = np.finfo(float).eps
    fisher = TaylorCheck(
        "fisher", float(delta),
        delta ** 2 * gen_dirichlet(z, v, rates),
        fisher_val,
        3.0 * float(np.abs(rates).max()) * n * fmax ** 3)
    entropy = TaylorCheck(
        "entropy", float(delta),
        0.5 * delta ** 2 * variance(z, v),
        entropy_val,
        fmax ** 3 / 3.0,
        abs(mean) + 2 * n * eps * abs(delta) * fmax)
    return fisher, entropy
