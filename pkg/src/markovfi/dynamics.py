"""Forward Kolmogorov evolution, dissipation audits and decay envelopes.

Distributions evolve as row vectors, ``d/dt mu = M^T mu``. The matrix
exponential is the primary propagator; a fixed-step Runge-Kutta integrator
is kept as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np
import scipy.linalg

from .chain import Generator, ProbMeasure, as_array, validate_generator
from .constants import alpha_gpi, explicit_lower_bounds
from .errors import DimensionMismatch, StepSizeUnderflow, ValidationError
from .functionals import gen_dirichlet, gen_fisher, psi_entropy
from .serialize import write_csv

MASS_TOL = 1e-10
RK4_STEP = 0.01
MIN_STEP = 1e-10


def _times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float).ravel()
    if t.size == 0:
        raise ValidationError("need at least one sample time")
    if t[0] < 0 or np.any(np.diff(t) <= 0):
        raise ValidationError("times must be non-negative and strictly increasing")
    return t


def _initial(mu0, n) -> np.ndarray:
    mu = np.array(as_array(mu0), dtype=float)
    if mu.shape != (n,):
        raise DimensionMismatch(f"initial vector has {mu.size} entries, expected {n}")
    if np.any(mu < 0) or not np.all(np.isfinite(mu)):
        raise ValidationError("initial vector must be finite and non-negative")
    if abs(mu.sum() - 1.0) > 1e-12:
        raise ValidationError(f"initial vector sums to {mu.sum():.17g}")
    return mu


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of the forward equation.

    ``states[k]`` is the distribution at ``times[k]``.
    """

    times: np.ndarray
    states: np.ndarray
    generator: Generator

    def __post_init__(self):
        for name in ("times", "states"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("times must be strictly increasing")
        mass = np.abs(self.states.sum(axis=1) - 1.0).max()
        if mass > MASS_TOL:
            raise ValidationError(f"trajectory mass drift {mass:.3e}")

    def measure(self, k: int) -> ProbMeasure:
        return ProbMeasure(self.generator.space, self.states[k] / self.states[k].sum())

    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, fh: TextIO) -> None:
        header = ["time"] + list(self.generator.space.labels)
        write_csv(fh, header, ([t, *row] for t, row in zip(self.times, self.states)))


def propagate(M, mu0, t: float) -> np.ndarray:
    """``exp(t M^T) mu0`` by scaling-and-squaring (scipy ``expm``)."""
    rates = as_array(M)
    mu = scipy.linalg.expm(t * rates.T) @ np.asarray(mu0, dtype=float)
    # rounding can leave entries like -1e-18 where mu0 vanishes
    return np.where(np.abs(mu) < 1e-15 * np.abs(mu).max(), np.abs(mu), mu)


def _rk4(rates, mu0, times, step):
    a = rates.T
    out = np.empty((times.size, mu0.size))
    mu = mu0.copy()
    t_now = 0.0
    for k, t in enumerate(times):
        span = t - t_now
        if span > 0:
            steps = int(np.ceil(span / step))
            h = span / steps
            for _ in range(steps):
                k1 = a @ mu
                k2 = a @ (mu + 0.5 * h * k1)
                k3 = a @ (mu + 0.5 * h * k2)
                k4 = a @ (mu + h * k3)
                mu = mu + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t_now = t
        out[k] = mu
    return out


def evolve(M, mu0, times, method: str = "expm",
           rk4_step: float | None = None) -> Trajectory:
    """Solve the forward equation at the given sample times.

    Parameters
    ----------
    M : Generator
    mu0 : array_like or ProbMeasure
        Probability vector; zero entries are allowed.
    times : array_like
        Non-negative, strictly increasing.
    method : {"expm", "rk4"}
        ``"rk4"`` uses fixed steps of ``0.01 / max|M(z,z)|`` unless
        ``rk4_step`` is given.

    Raises
    ------
    StepSizeUnderflow
        If the Runge-Kutta step would fall below ``1e-10``.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    t = _times(times)
    mu = _initial(mu0, M.size)
    if method == "expm":
        states = np.array([propagate(M.rates, mu, s) for s in t])
    elif method == "rk4":
        rate = float(np.abs(np.diag(M.rates)).max())
        step = rk4_step if rk4_step is not None else RK4_STEP / rate
        if step < MIN_STEP:
            raise StepSizeUnderflow(f"RK4 step {step:.3e} below {MIN_STEP:g}")
        states = _rk4(M.rates, mu, t, step)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Trajectory(t, states, M)


def nonequilibrium_variance(mu, zeta) -> float:
    """``var_zeta(mu / zeta) = sum (mu - zeta)^2 / zeta`` for probabilities."""
    mu, z = np.asarray(mu, float), np.asarray(zeta, float)
    return float(np.sum((mu - z) ** 2 / z))


def nonequilibrium_entropy(mu, zeta) -> float:
    """``H_zeta(mu / zeta) = sum zeta Psi(mu / zeta)`` for probabilities.

    Zero entries of ``mu`` are admitted (``Psi(0) = 1``).
    """
    mu, z = np.asarray(mu, float), np.asarray(zeta, float)
    return float(z @ psi_entropy(mu / z))


def _dissipations(M, mu, z):
    f = mu / z
    var_rate = -2.0 * gen_dirichlet(z, f, M)
    if np.all(mu > 0):
        ent_rate = -gen_fisher(z, f, M)
    else:
        ent_rate = np.nan
    return var_rate, ent_rate


@dataclass(frozen=True, eq=False)
class DecayAudit:
    """Series along a pair of solutions ``(mu_t, zeta_t)``.

    Finite-difference columns are ``nan`` where the centred stencil leaves
    ``t >= 0`` or a solution is not yet strictly positive; envelope columns
    are ``nan`` unless produced by :func:`decay_envelope`.
    """

    times: np.ndarray
    variance_series: np.ndarray
    entropy_series: np.ndarray
    variance_dissipation: np.ndarray
    entropy_dissipation: np.ndarray
    variance_fd: np.ndarray
    entropy_fd: np.ndarray
    alpha_gpi_series: np.ndarray
    glsi_lower_series: np.ndarray
    dt: float
    variance_envelope: np.ndarray | None = None
    entropy_envelope: np.ndarray | None = None
    alpha_star: float | None = None
    variance_rate: float | None = None
    delta: float | None = None
    labels: tuple = field(default=(), repr=False)

    @staticmethod
    def _rel(fd, exact):
        fd, exact = np.asarray(fd), np.asarray(exact)
        ok = np.isfinite(fd) & np.isfinite(exact)
        err = np.full(fd.shape, np.nan)
        denom = np.abs(exact[ok])
        diff = np.abs(fd[ok] - exact[ok])
        err[ok] = np.where(denom > 0, diff / np.where(denom > 0, denom, 1.0),
                           np.where(diff == 0, 0.0, np.inf))
        return err

    @property
    def variance_rel_error(self) -> np.ndarray:
        return self._rel(self.variance_fd, self.variance_dissipation)

    @property
    def entropy_rel_error(self) -> np.ndarray:
        return self._rel(self.entropy_fd, self.entropy_dissipation)

    def max_rel_error(self):
        """Largest relative finite-difference errors (variance, entropy)."""
        def worst(x):
            x = x[np.isfinite(x) | np.isinf(x)]
            return float(np.max(x)) if x.size else 0.0
        return worst(self.variance_rel_error), worst(self.entropy_rel_error)

    def monotone(self, tol: float = 1e-12) -> bool:
        """Both series non-increasing up to ``tol`` times their start."""
        ok = True
        for s in (self.variance_series, self.entropy_series):
            ok &= bool(np.all(np.diff(s) <= tol * max(abs(s[0]), 1e-300)))
        return ok

    def envelope_holds(self, log_tol: float = 1e-6) -> bool:
        """Series below envelopes, compared on the log scale."""
        if self.entropy_envelope is None:
            raise ValidationError("audit carries no envelopes")
        for s, env in ((self.entropy_series, self.entropy_envelope),
                       (self.variance_series, self.variance_envelope)):
            pos = s > 0
            if np.any(pos & (env <= 0)):
                return False
            if np.any(np.log(s[pos]) > np.log(env[pos]) + log_tol):
                return False
        return True

    def to_csv(self, fh: TextIO) -> None:
        nan = np.full(self.times.shape, np.nan)
        venv = self.variance_envelope if self.variance_envelope is not None else nan
        eenv = self.entropy_envelope if self.entropy_envelope is not None else nan
        header = ["time", "variance", "entropy", "minus_2_dirichlet",
                  "minus_fisher", "fd_variance", "fd_entropy",
                  "variance_envelope", "entropy_envelope", "alpha_gpi",
                  "glsi_lower"]
        cols = (self.times, self.variance_series, self.entropy_series,
                self.variance_dissipation, self.entropy_dissipation,
                self.variance_fd, self.entropy_fd, venv, eenv,
                self.alpha_gpi_series, self.glsi_lower_series)
        write_csv(fh, header, zip(*cols))


def dissipation_audit(M, mu0, zeta0, times, dt: float | None = None) -> DecayAudit:
    """Compare finite-difference rates of variance and entropy with
    ``-2 E_{zeta_t}(mu_t/zeta_t)`` and ``-R_{zeta_t}(mu_t/zeta_t)``.

    Both ``mu_t`` and ``zeta_t`` solve the forward equation. The centred
    stencil uses ``dt = min(1e-3, spacing / 10)`` unless given.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    t = _times(times)
    mu0 = _initial(mu0, M.size)
    z0 = _initial(zeta0, M.size)
    if np.any(z0 <= 0):
        raise ValidationError("reference initial measure must be strictly positive")
    if dt is None:
        spacing = float(np.min(np.diff(t))) if t.size > 1 else 1e-2
        dt = min(1e-3, spacing / 10.0)
    n = t.size
    cols = {k: np.full(n, np.nan) for k in
            ("var", "ent", "dvar", "dent", "fdv", "fde", "gpi", "low")}
    A = M.rates.T
    step_fwd = scipy.linalg.expm(dt * A)
    step_bwd = scipy.linalg.expm(-dt * A)
    for k, s in enumerate(t):
        mu = propagate(M.rates, mu0, s)
        z = propagate(M.rates, z0, s)
        cols["var"][k] = nonequilibrium_variance(mu, z)
        cols["ent"][k] = nonequilibrium_entropy(mu, z)
        cols["dvar"][k], cols["dent"][k] = _dissipations(M.rates, mu, z)
        cols["gpi"][k] = alpha_gpi(z, M)
        cols["low"][k] = explicit_lower_bounds(z, M)[1]
        if s - dt > 0:
            mu_p, z_p = step_fwd @ mu, step_fwd @ z
            mu_m, z_m = step_bwd @ mu, step_bwd @ z
            if np.all(mu_m > 0) and np.all(z_m > 0):
                cols["fdv"][k] = (nonequilibrium_variance(mu_p, z_p)
                                  - nonequilibrium_variance(mu_m, z_m)) / (2 * dt)
                cols["fde"][k] = (nonequilibrium_entropy(mu_p, z_p)
                                  - nonequilibrium_entropy(mu_m, z_m)) / (2 * dt)
    return DecayAudit(
        times=t, variance_series=cols["var"], entropy_series=cols["ent"],
        variance_dissipation=cols["dvar"], entropy_dissipation=cols["dent"],
        variance_fd=cols["fdv"], entropy_fd=cols["fde"],
        alpha_gpi_series=cols["gpi"], glsi_lower_series=cols["low"], dt=dt,
        labels=M.space.labels)


def decay_envelope(M, mu0, zeta0, times, delta: float) -> DecayAudit:
    """Audit with Gronwall envelopes from proven constant bounds.

    ``alpha_*`` is the minimum over sample times ``t >= delta`` of the
    log-Sobolev lower bound ``gap(zeta_t) / (1 + log(1/zeta_t,*) / 2)``; the
    entropy envelope is ``H_0 min(1, exp(-alpha_* (t - delta)))``. The
    variance envelope uses the rate ``2 min_{t >= delta} alpha_gPI(zeta_t)``.
    Constants are sampled on the given grid, so a fine grid is assumed.
    """
    if not 0.0 < delta < 1.0:
        raise ValidationError("delta must lie in (0, 1)")
    audit = dissipation_audit(M, mu0, zeta0, times)
    t = audit.times
    late = t >= delta
    if not late.any():
        raise ValidationError("no sample time at or after delta")
    alpha_star = float(audit.glsi_lower_series[late].min())
    var_rate = 2.0 * float(audit.alpha_gpi_series[late].min())
    n = len(audit.labels)
    mu, z = _initial(mu0, n), _initial(zeta0, n)
    h0 = nonequilibrium_entropy(mu, z)
    v0 = nonequilibrium_variance(mu, z)
    shift = np.maximum(t - delta, 0.0)
    eenv = h0 * np.minimum(1.0, np.exp(-alpha_star * shift))
    venv = v0 * np.minimum(1.0, np.exp(-var_rate * shift))
    return DecayAudit(**{**audit.__dict__, "entropy_envelope": eenv,
                         "variance_envelope": venv, "alpha_star": alpha_star,
                         "variance_rate": var_rate, "delta": delta})


def fitted_decay_rate(times, values, start: float) -> float:
    """Least-squares slope of ``-log(values)`` over ``times >= start``."""
    t = np.asarray(times, float)
    v = np.asarray(values, float)
    keep = (t >= start) & (v > 0)
    if keep.sum() < 2:
        raise ValidationError("need two positive samples to fit a rate")
    slope = np.polyfit(t[keep], np.log(v[keep]), 1)[0]
    return -float(slope)
