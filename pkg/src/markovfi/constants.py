"""Generalised Poincare and log-Sobolev constants with certified brackets.

The Poincare constant is computed exactly: once as the spectral gap of the
``zeta``-symmetrised generator (Jacobi eigensolve of a symmetric conjugate)
and once as a generalised Rayleigh minimum over the flat complement of the
constants. The log-Sobolev constants are infima over densities and are
estimated by multi-start simplex search; every estimate is reported
together with the proven lower bound and the upper bound ``2 * gap``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .chain import (
    Generator,
    ProbMeasure,
    StateSpace,
    as_array,
    steady_state,
    total_variation,
    validate_generator,
)
from .errors import DimensionMismatch, EigensolveFailure, SizeOverflow
from .functionals import dirichlet_pairing, variance
from .linalg import jacobi_eigh
from .optimize import grid_golden_minimize, multistart_minimize

JACOBI_MAX_SIZE = 64
BOUND_U = 30.0
_SERIES_CUTOFF = 1e-2


def _measure(zeta, n=None) -> np.ndarray:
    z = as_array(zeta)
    if z.ndim != 1 or (n is not None and z.size != n):
        raise DimensionMismatch("measure size does not match generator")
    return z


# ---------------------------------------------------------------------------
# symmetrisation and the Poincare constant


@dataclass(frozen=True, eq=False)
class SymmetrisedGenerator:
    """``M^zeta = (M + D M^T D^{-1}) / 2`` with its diagonal re-balanced.

    Reversible with respect to ``reference`` by construction.
    """

    base: Generator
    reference: ProbMeasure
    generator: Generator

    @property
    def rates(self) -> np.ndarray:
        return self.generator.rates


def symmetrised_rates(rates, z) -> np.ndarray:
    rates = np.asarray(rates, dtype=float)
    sym = 0.5 * (rates + (z[None, :] / z[:, None]) * rates.T)
    np.fill_diagonal(sym, 0.0)
    np.fill_diagonal(sym, -sym.sum(axis=1))
    return sym


def symmetrise(M, zeta) -> SymmetrisedGenerator:
    """Average of ``M`` and its adjoint in ``L^2(zeta)``.

    Off-diagonal entries are ``(M(z,z') + zeta(z')/zeta(z) M(z',z)) / 2``;
    the diagonal is minus the off-diagonal row sum.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    z = _measure(zeta, M.size)
    ref = zeta if isinstance(zeta, ProbMeasure) else ProbMeasure(M.space, z)
    gen = validate_generator(symmetrised_rates(M.rates, z), M.space)
    return SymmetrisedGenerator(M, ref, gen)


def _conjugate(sym_rates, z) -> np.ndarray:
    d = np.sqrt(z)
    k = (d[:, None] * sym_rates) / d[None, :]
    return 0.5 * (k + k.T)


def spectral_gap(S: SymmetrisedGenerator, method: str = "auto") -> float:
    """Magnitude of the largest nonzero eigenvalue of ``M^zeta``.

    ``M^zeta`` is conjugated by ``D_zeta^{1/2}`` to a symmetric matrix whose
    kernel is spanned by ``sqrt(zeta)``. That eigenpair is removed and the
    gap is minus the largest remaining eigenvalue.

    Parameters
    ----------
    method : {"auto", "jacobi", "lapack"}
        ``"auto"`` uses Jacobi rotations up to 64 states and LAPACK above.

    Raises
    ------
    EigensolveFailure
        If the solver fails or the remaining spectrum is not negative.
    """
    z = S.reference.weights
    k = _conjugate(S.rates, z)
    n = z.size
    if method == "jacobi" or (method == "auto" and n <= JACOBI_MAX_SIZE):
        w, v = jacobi_eigh(k)
    elif method in ("lapack", "auto"):
        w, v = np.linalg.eigh(k)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    kernel = int(np.argmax(np.abs(v.T @ np.sqrt(z))))
    rest = np.delete(w, kernel)
    gap = -float(rest.max())
    if not gap > 0:
        raise EigensolveFailure(f"non-positive spectral gap {gap:.3e}")
    return gap


def alpha_gpi(zeta, M, method: str = "auto") -> float:
    """Generalised Poincare constant, the spectral gap of ``M^zeta``."""
    return spectral_gap(symmetrise(M, zeta), method=method)


def _quadratic_forms(rates, z):
    """Matrices ``K, V`` with ``f K f = E_zeta(f, M)`` and ``f V f = var``."""
    w = z[:, None] * np.asarray(rates, dtype=float)
    np.fill_diagonal(w, 0.0)
    s = 0.5 * (w + w.T)
    K = np.diag(s.sum(axis=1)) - s
    V = np.diag(z) - np.outer(z, z)
    return K, V


def _flat_complement(n) -> np.ndarray:
    return scipy.linalg.null_space(np.ones((1, n)))


def rayleigh_eigenpairs(zeta, M):
    """Generalised eigenpairs of ``(K, V)`` on the flat complement of 1.

    Returns eigenvalues ascending and eigenvectors in the original
    coordinates (columns, each with zero plain sum).
    """
    rates = as_array(M)
    z = _measure(zeta, rates.shape[0])
    K, V = _quadratic_forms(rates, z)
    P = _flat_complement(z.size)
    w, y = scipy.linalg.eigh(P.T @ K @ P, P.T @ V @ P)
    return w, P @ y


def gpi_rayleigh(zeta, M) -> float:
    """``inf E_zeta(f) / var_zeta(f)`` over ``f`` orthogonal to 1 (flat).

    Solved as a generalised symmetric eigenproblem; independent of the
    symmetrised-generator route.
    """
    w, _ = rayleigh_eigenpairs(zeta, M)
    return float(w[0])


def worst_direction(zeta, M) -> np.ndarray:
    """Minimiser of the Poincare quotient, centred under ``zeta``."""
    z = _measure(zeta)
    _, y = rayleigh_eigenpairs(zeta, M)
    f = y[:, 0]
    f = f - z @ f
    return f / np.abs(f).max()


def explicit_lower_bounds(zeta, M):
    """Certified lower bounds ``(gpi_lb, glsi_lb)``.

    ``gpi_lb = zeta_* M_* / |Z|`` and
    ``glsi_lb = max(gpi_lb, gap) / (1 + log(1/zeta_*) / 2)``.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    z = _measure(zeta, M.size)
    zmin = float(z.min())
    gpi_lb = zmin * M.min_rate / M.size
    gap = alpha_gpi(z, M)
    denom = 1.0 + 0.5 * np.log(1.0 / zmin)
    return gpi_lb, max(gpi_lb, gap) / denom


def slsi_bracket(gap: float, zmin: float):
    """Proven bracket ``gap/(2 + log(1/zeta_*)) <= alpha_sLSI <= 2 gap``."""
    return gap / (2.0 + np.log(1.0 / zmin)), 2.0 * gap


# ---------------------------------------------------------------------------
# log-Sobolev estimates


IDENTITY_BALL = 1e-7


def _log_mean_exp(x, z):
    """``log E_zeta[e^x]`` evaluated after centring.

    Writing ``x = m + y`` with ``m = E_zeta[x]`` gives
    ``m + log1p(E_zeta[expm1(y)])``, which stays accurate when ``x`` is
    tiny; the argument of ``log1p`` is non-negative by Jensen.
    """
    m = float(z @ x)
    return m + np.log1p(max(float(z @ np.expm1(x - m)), 0.0))


_POWERS = np.arange(2, 12)
_FACT = np.cumprod(np.arange(1, 12, dtype=float))[1:]
_EXPM1_MINUS_COEF = 1.0 / _FACT
_PSI_EXP_COEF = (_POWERS - 1.0) / _FACT


def _expm1_minus(d):
    """``exp(d) - 1 - d`` without cancellation near zero."""
    out = np.expm1(d) - d
    small = np.abs(d) < _SERIES_CUTOFF
    if small.any():
        out[small] = (d[small, None] ** _POWERS) @ _EXPM1_MINUS_COEF
    return out


def _psi_exp(a):
    """``Psi(exp(a)) = exp(a)(a - 1) + 1`` without cancellation near zero."""
    out = np.exp(a) * (a - 1.0) + 1.0
    small = np.abs(a) < _SERIES_CUTOFF
    if small.any():
        out[small] = (a[small, None] ** _POWERS) @ _PSI_EXP_COEF
    return out


class _Bounded:
    """Map free coordinates to bounded log-weights ``u = U tanh(v / U)``."""

    def __init__(self, n):
        self.n = n

    def to_u(self, v):
        u = np.empty(self.n)
        u[:-1] = BOUND_U * np.tanh(np.asarray(v) / BOUND_U)
        u[-1] = 0.0
        return u

    def from_u(self, u):
        u = np.asarray(u, dtype=float)
        u = u[:-1] - u[-1]
        u = np.clip(u, -0.99 * BOUND_U, 0.99 * BOUND_U)
        return BOUND_U * np.arctanh(u / BOUND_U)


class GLSIObjective:
    """``R_zeta(phi) / H_zeta(phi)`` in log-density coordinates.

    With ``a = log phi``, ``H = sum zeta Psi(e^a)`` and
    ``R = sum M(z,z') zeta(z) e^{a(z)} (e^{d} - 1 - d)``,
    ``d = a(z') - a(z)``; both forms keep relative accuracy as
    ``phi -> 1``.
    """

    def __init__(self, z, rates):
        off = np.array(rates, dtype=float)
        np.fill_diagonal(off, 0.0)
        self.i, self.j = np.nonzero(off)
        self.w = off[self.i, self.j] * z[self.i]
        self.z = z

    def log_density(self, u):
        return u - _log_mean_exp(u, self.z)

    def ratio_log(self, a):
        if np.abs(a).max() < IDENTITY_BALL:
            return np.inf
        h = float(self.z @ _psi_exp(a))
        if not h > 0:
            return np.inf
        d = a[self.j] - a[self.i]
        r = float(np.sum(self.w * np.exp(a[self.i]) * _expm1_minus(d)))
        return r / h

    def __call__(self, u):
        return self.ratio_log(self.log_density(u))


class SLSIObjective:
    """``E_zeta(f, M^zeta) / Ent_zeta(f^2)`` in log coordinates ``f = e^u``.

    With ``b = 2u - log E_zeta[e^{2u}]`` the quotient is
    ``1/2 sum s(z,z') (e^{b(z)/2} - e^{b(z')/2})^2 / sum zeta Psi(e^b)``,
    ``s(z,z') = zeta(z) M^zeta(z,z')``. Differences are taken pairwise via
    ``expm1`` so the quotient stays accurate for nearly constant ``f``.
    """

    def __init__(self, z, sym_rates):
        off = np.array(sym_rates, dtype=float)
        np.fill_diagonal(off, 0.0)
        self.i, self.j = np.nonzero(off)
        self.w = 0.5 * off[self.i, self.j] * z[self.i]
        self.z = z

    def log_square(self, u):
        b = 2.0 * np.asarray(u, dtype=float)
        return b - _log_mean_exp(b, self.z)

    def ratio_log(self, b):
        if np.abs(b).max() < IDENTITY_BALL:
            return np.inf
        ent = float(self.z @ _psi_exp(b))
        if not ent > 0:
            return np.inf
        half = 0.5 * b
        diff = np.exp(half[self.j]) * np.expm1(half[self.i] - half[self.j])
        return float(np.sum(self.w * diff * diff)) / ent

    def __call__(self, u):
        return self.ratio_log(self.log_square(u))


@dataclass(frozen=True)
class LSIEstimate:
    """Optimizer estimate of a log-Sobolev-type infimum.

    Attributes
    ----------
    value : float
        Reported estimate, ``min(optimizer_best, near_identity_limit)``.
    optimizer_best : float
        Lowest quotient found by the restarts.
    near_identity_limit : float
        Limit of the quotient along the worst direction at the constant
        function (``2 * gap`` for gLSI, ``gap / 2`` for sLSI).
    lower, upper : float
        Proven bracket for the true infimum.
    best_distance : float
        ``|| phi* - 1 ||_zeta`` (gLSI) or the analogous distance of the
        normalised ``f*^2`` (sLSI) at the best point.
    """

    value: float
    optimizer_best: float
    near_identity_limit: float
    lower: float
    upper: float
    iterations: int
    evaluations: int
    restarts: int
    converged: int
    best_distance: float
    method: str
    best_point: tuple = field(default=(), repr=False)

    @property
    def attained_near_identity(self) -> bool:
        return self.near_identity_limit <= self.optimizer_best

    def stats(self) -> dict:
        d = asdict(self)
        d.pop("best_point")
        d["attained_near_identity"] = self.attained_near_identity
        return d


def _random_starts(rng, n_free, restarts):
    scales = (0.3, 1.0, 2.5, 5.0)
    return [rng.normal(scale=scales[r % len(scales)], size=n_free)
            for r in range(restarts)]


def two_state_density_ratio(z, rates):
    """Quotient ``R/H`` on the one-parameter density family of two states."""
    obj = GLSIObjective(np.asarray(z, float), np.asarray(rates, float))
    p = float(z[0])

    def fun(x):
        phi = np.array([x, (1.0 - p * x) / (1.0 - p)])
        if phi[1] <= 0 or phi[0] <= 0 or x == 1.0:
            return np.inf
        return obj.ratio_log(np.log(phi))

    return fun, 1.0 / p


def alpha_glsi_estimate(zeta, M, seed: int = 0, restarts: int = 16,
                        method: str = "auto", xatol: float = 1e-9,
                        maxiter: int | None = None) -> LSIEstimate:
    """Estimate ``inf R_zeta(phi) / H_zeta(phi)`` over densities ``phi != 1``.

    Multi-start Nelder-Mead over ``phi = exp(u) / E_zeta[exp(u)]`` with the
    last log-weight pinned to zero (``|Z| - 1`` free coordinates). Starts are
    ``restarts`` seeded random points and one point ``1 + delta f`` along the
    worst Poincare direction ``f``. Two-state problems are solved on a
    2048-point grid refined by golden-section search. The reported value is
    ``min(best, 2 * alpha_gpi)``, the second term being the limit of the
    quotient at ``phi = 1``.

    Parameters
    ----------
    method : {"auto", "simplex", "grid"}
        ``"grid"`` is only available for two states.

    Raises
    ------
    OptimizerDidNotConverge
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    z = _measure(zeta, M.size)
    n = z.size
    gap = alpha_gpi(z, M)
    _, lower = explicit_lower_bounds(z, M)
    limit = 2.0 * gap
    if method == "auto":
        method = "grid" if n == 2 else "simplex"
    if method == "grid":
        if n != 2:
            raise ValueError("grid method needs exactly two states")
        fun, hi = two_state_density_ratio(z, M.rates)
        x, fx, _ = grid_golden_minimize(fun, 0.0, hi)
        phi = np.array([x, (1.0 - z[0] * x) / (1.0 - z[0])])
        best, point = fx, phi
        iters, evals, nrest, conv = 1, 2048, 1, 1
    else:
        obj = GLSIObjective(z, M.rates)
        bmap = _Bounded(n)
        rng = np.random.default_rng(seed)
        f = worst_direction(z, M)
        phi0 = 1.0 + 0.25 * f
        starts = [bmap.from_u(np.log(phi0))]
        starts += _random_starts(rng, n - 1, restarts)
        res = multistart_minimize(lambda v: obj(bmap.to_u(v)), starts,
                                  xatol=xatol, fatol=1e-13 * max(1.0, limit),
                                  maxiter=maxiter)
        best = res.fun
        point = np.exp(obj.log_density(bmap.to_u(res.x)))
        iters, evals, nrest, conv = (res.iterations, res.evaluations,
                                     res.restarts, res.converged)
    dist = float(np.sqrt(z @ (point - 1.0) ** 2))
    return LSIEstimate(
        value=min(best, limit), optimizer_best=float(best),
        near_identity_limit=limit, lower=lower, upper=limit,
        iterations=iters, evaluations=evals, restarts=nrest, converged=conv,
        best_distance=dist, method=method, best_point=tuple(point.tolist()))


def alpha_slsi_estimate(S: SymmetrisedGenerator, seed: int = 0,
                        restarts: int = 16, xatol: float = 1e-9,
                        maxiter: int | None = None) -> LSIEstimate:
    """Estimate ``inf E_zeta(f, M^zeta) / Ent_zeta(f^2)`` over positive ``f``.

    Same multi-start scheme as :func:`alpha_glsi_estimate` over
    ``f = exp(u)``; the minimiser of this quotient is strictly positive.
    The reported value is ``min(best, gap / 2)``: along ``f = 1 + delta g``
    the quotient tends to ``E(g) / (2 var(g))``, whose infimum is half the
    spectral gap.
    """
    z = S.reference.weights
    n = z.size
    gap = spectral_gap(S)
    lower, upper = slsi_bracket(gap, float(z.min()))
    limit = 0.5 * gap
    obj = SLSIObjective(z, S.rates)
    bmap = _Bounded(n)
    rng = np.random.default_rng(seed)
    g = worst_direction(z, S.generator)
    starts = [bmap.from_u(np.log(1.0 + 0.25 * g))]
    starts += _random_starts(rng, n - 1, restarts)
    res = multistart_minimize(lambda v: obj(bmap.to_u(v)), starts,
                              xatol=xatol, fatol=1e-13 * max(1.0, gap),
                              maxiter=maxiter)
    best = res.fun
    g2 = np.exp(obj.log_square(bmap.to_u(res.x)))
    f = np.sqrt(g2)
    dist = float(np.sqrt(z @ (g2 - 1.0) ** 2))
    return LSIEstimate(
        value=min(best, limit), optimizer_best=float(best),
        near_identity_limit=limit, lower=lower, upper=upper,
        iterations=res.iterations, evaluations=res.evaluations,
        restarts=res.restarts, converged=res.converged, best_distance=dist,
        method="simplex", best_point=tuple(f.tolist()))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ConstantReport:
    """Constants of ``(zeta, M)``; optional entries are ``None`` when skipped.

    ``spectral_gap`` comes from the symmetrised-generator eigensolve and
    ``gpi`` from the flat-complement Rayleigh problem, so their agreement is
    a genuine two-route check.
    """

    gpi: float | None = None
    spectral_gap: float | None = None
    explicit_gpi_lower: float | None = None
    glsi_lower: float | None = None
    glsi_upper: float | None = None
    glsi_estimate: float | None = None
    slsi_lower: float | None = None
    slsi_upper: float | None = None
    slsi_estimate: float | None = None
    optimizer_stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


WHICH = ("gpi", "glsi", "slsi", "bounds", "all")


def constant_report(zeta, M, which: str = "all", seed: int = 0,
                    restarts: int = 16) -> ConstantReport:
    """Compute the requested subset of constants.

    ``"gpi"`` gives the exact Poincare constant by both routes,
    ``"bounds"`` adds the proven brackets without any optimization,
    ``"glsi"`` and ``"slsi"`` add the respective estimates and ``"all"``
    combines everything.
    """
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}")
    if not isinstance(M, Generator):
        M = validate_generator(M)
    z = _measure(zeta, M.size)
    S = symmetrise(M, z)
    gap = spectral_gap(S)
    out = {"gpi": gpi_rayleigh(z, M), "spectral_gap": gap}
    gpi_lb, glsi_lb = explicit_lower_bounds(z, M)
    out["explicit_gpi_lower"] = gpi_lb
    if which in ("bounds", "glsi", "all"):
        out["glsi_lower"] = glsi_lb
        out["glsi_upper"] = 2.0 * gap
    if which in ("bounds", "slsi", "all"):
        out["slsi_lower"], out["slsi_upper"] = slsi_bracket(gap, float(z.min()))
    stats = {}
    if which in ("glsi", "all"):
        est = alpha_glsi_estimate(z, M, seed=seed, restarts=restarts)
        out["glsi_estimate"] = est.value
        stats["glsi"] = est.stats()
    if which in ("slsi", "all"):
        est = alpha_slsi_estimate(S, seed=seed, restarts=restarts)
        out["slsi_estimate"] = est.value
        stats["slsi"] = est.stats()
    return ConstantReport(optimizer_stats=stats, **out)


# ---------------------------------------------------------------------------
# tensorisation


def tensor_product(chains: Sequence, max_states: int = 4096):
    """Product measure and averaged Kronecker-sum generator.

    Parameters
    ----------
    chains : sequence of (zeta_i, M_i)
    max_states : int
        Cap on the product size.

    Returns
    -------
    zeta, M : ProbMeasure, Generator
        ``M = (1/d) sum_i I x ... x M_i x ... x I`` on the product space,
        states labelled ``"a|b|..."`` with the first factor varying slowest.

    Raises
    ------
    SizeOverflow
    """
    chains = list(chains)
    if not chains:
        raise ValueError("need at least one chain")
    gens, weights = [], []
    for zeta, M in chains:
        if not isinstance(M, Generator):
            M = validate_generator(M)
        gens.append(M)
        weights.append(_measure(zeta, M.size))
    size = int(np.prod([g.size for g in gens]))
    if size > max_states:
        raise SizeOverflow(f"product has {size} states, cap is {max_states}")
    d = len(gens)
    total = np.zeros((size, size))
    for k, g in enumerate(gens):
        term = np.ones((1, 1))
        for m, h in enumerate(gens):
            term = np.kron(term, g.rates if m == k else np.eye(h.size))
        total += term
    total /= d
    z = np.ones(1)
    for w in weights:
        z = np.kron(z, w)
    labels = [""]
    for g in gens:
        labels = [f"{a}|{b}" if a else b for a in labels for b in g.space.labels]
    space = StateSpace(tuple(labels))
    return ProbMeasure.normalised(space, z), validate_generator(total, space)


# ---------------------------------------------------------------------------
# failure of the naive Poincare quotient


class _NoWitness:
    """Sentinel: the naive quotient is non-negative (``zeta`` is stationary)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NoWitness"

    def __bool__(self) -> bool:
        return False


NoWitness = _NoWitness()


def naive_ratio(zeta, f, M) -> float:
    """``(f, -M f)_zeta / var_zeta(f)``."""
    return dirichlet_pairing(zeta, f, M) / variance(zeta, f)


@dataclass(frozen=True)
class NaiveWitness:
    """Observable ``f = c 1 + h`` with negative naive Poincare quotient."""

    f: np.ndarray
    c: float
    h: np.ndarray
    ratio: float
    zeta: np.ndarray = field(repr=False)
    rates: np.ndarray = field(repr=False)

    def scaled(self, factor: float) -> float:
        """Naive quotient after multiplying the constant part by ``factor``."""
        return naive_ratio(self.zeta, self.c * factor + self.h, self.rates)


def naive_pi_probe(zeta, M, tv_tol: float = 1e-8):
    """Construct a witness that the naive Poincare quotient is unbounded below.

    For ``h`` with ``E_zeta[h] = 0`` the quotient of ``f = c 1 + h`` is
    ``((h, -Mh) + c (1, -Mh)) / var(h)`` and is linear in ``c``. Basis
    vectors ``h = e_i - zeta_i 1`` are scanned for the largest
    ``|(1, -Mh)_zeta|`` and ``c`` is chosen with the opposite sign and large
    enough to make the quotient negative.

    Returns
    -------
    NaiveWitness or NoWitness
        ``NoWitness`` when ``zeta`` is within ``tv_tol`` of stationarity.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    z = _measure(zeta, M.size)
    pi = steady_state(M)
    if total_variation(z, pi) <= tv_tol:
        return NoWitness
    n = z.size
    best, best_b = None, 0.0
    for i in range(n):
        h = -z.copy()
        h[i] += 1.0
        b = -float(z @ (M.rates @ h))
        if abs(b) > abs(best_b):
            best, best_b = h, b
    if best is None or best_b == 0.0:
        return NoWitness
    a = dirichlet_pairing(z, best, M.rates)
    c = -np.copysign(2.0 * (abs(a) + 1.0) / abs(best_b), best_b)
    f = c + best
    return NaiveWitness(f=f, c=float(c), h=best,
                        ratio=naive_ratio(z, f, M.rates), zeta=z,
                        rates=M.rates)


# ---------------------------------------------------------------------------
# continuity along paths of reference measures


def linear_path(start, end, points: int):
    """``points`` equally spaced measures on the segment ``[start, end]``."""
    a = as_array(start)
    b = as_array(end)
    return [(1.0 - t) * a + t * b for t in np.linspace(0.0, 1.0, points)]


@dataclass(frozen=True)
class ContinuityTable:
    """Constants sampled along a path of reference measures."""

    gpi: np.ndarray
    glsi_lower: np.ndarray
    glsi: np.ndarray | None

    @staticmethod
    def _jump(x):
        return float(np.max(np.abs(np.diff(x)))) if len(x) > 1 else 0.0

    @property
    def max_gpi_jump(self) -> float:
        return self._jump(self.gpi)

    @property
    def max_glsi_jump(self) -> float:
        return self._jump(self.glsi) if self.glsi is not None else float("nan")


def continuity_scan(path, M, seed: int = 0, with_glsi: bool = True,
                    restarts: int = 16) -> ContinuityTable:
    """Evaluate the Poincare constant (and optionally the gLSI estimate)."""
    if not isinstance(M, Generator):
        M = validate_generator(M)
    gpi, low, glsi = [], [], []
    for zeta in path:
        z = _measure(zeta, M.size)
        gpi.append(alpha_gpi(z, M))
        low.append(explicit_lower_bounds(z, M)[1])
        if with_glsi:
            glsi.append(alpha_glsi_estimate(z, M, seed=seed,
                                            restarts=restarts).value)
    return ContinuityTable(np.array(gpi), np.array(low),
                           np.array(glsi) if with_glsi else None)
