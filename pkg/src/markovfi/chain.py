"""State spaces, generators and measures for finite continuous-time chains.

All types are immutable: arrays are copied on construction and marked
read-only. Numeric routines elsewhere in the package accept either these
types or plain array-likes; :func:`as_array` performs the unwrapping.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDensity,
    InvalidMeasure,
    NegativeOffDiagonal,
    NotIrreducible,
    NumericalRankFailure,
    RowSumNonzero,
    ValidationError,
)

ROW_SUM_RTOL = 1e-12
MASS_TOL = 1e-12
STEADY_STATE_RESIDUAL = 1e-10


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateSpace:
    """Ordered collection of at least two distinct state labels."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise ValidationError("a state space needs at least two states")
        if len(set(labels)) != len(labels):
            raise ValidationError("state labels must be distinct")

    @classmethod
    def of_size(cls, n: int) -> "StateSpace":
        """Space labelled ``"1"``, ..., ``"n"``."""
        return cls(tuple(str(i + 1) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ValidationError(f"unknown state {label!r}") from None


@dataclass(frozen=True, eq=False)
class Generator:
    """Validated rate matrix of an irreducible chain.

    Construct through :func:`validate_generator` or directly; both paths run
    the same checks.
    """

    space: StateSpace
    rates: np.ndarray

    def __post_init__(self):
        rates = _frozen(self.rates)
        object.__setattr__(self, "rates", rates)
        _check_generator(rates, self.space)

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def min_rate(self) -> float:
        """Smallest positive off-diagonal rate."""
        off = self.rates[~np.eye(self.size, dtype=bool)]
        return float(off[off > 0].min())

    @property
    def sup_norm(self) -> float:
        """Largest absolute entry."""
        return float(np.abs(self.rates).max())

    def __repr__(self) -> str:
        return f"Generator(size={self.size})"


@dataclass(frozen=True, eq=False)
class ProbMeasure:
    """Strictly positive probability vector."""

    space: StateSpace
    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.space.size,):
            raise DimensionMismatch(
                f"measure has {w.size} weights for {self.space.size} states")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidMeasure("measure weights must be finite and > 0")
        if abs(w.sum() - 1.0) > MASS_TOL:
            raise InvalidMeasure(f"measure weights sum to {w.sum():.17g}")

    @classmethod
    def normalised(cls, space: StateSpace, weights) -> "ProbMeasure":
        w = np.asarray(weights, dtype=float)
        return cls(space, w / w.sum())

    @property
    def minimum(self) -> float:
        return float(self.weights.min())

    def __repr__(self) -> str:
        return f"ProbMeasure({np.array2string(self.weights, precision=6)})"


@dataclass(frozen=True, eq=False)
class Observable:
    """Real function on a state space."""

    space: StateSpace
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != (self.space.size,):
            raise DimensionMismatch("observable length does not match space")

    @classmethod
    def constant(cls, space: StateSpace, c: float = 1.0) -> "Observable":
        return cls(space, np.full(space.size, float(c)))


@dataclass(frozen=True, eq=False)
class Density:
    """Positive density with unit mean under its reference measure."""

    reference: ProbMeasure
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != self.reference.weights.shape:
            raise DimensionMismatch("density length does not match space")
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise InvalidDensity("density values must be finite and > 0")
        mass = float(v @ self.reference.weights)
        if abs(mass - 1.0) > MASS_TOL:
            raise InvalidDensity(f"density has mean {mass:.17g}, expected 1")

    @classmethod
    def of_measure(cls, mu: ProbMeasure, reference: ProbMeasure) -> "Density":
        """Radon-Nikodym density of ``mu`` with respect to ``reference``."""
        return cls(reference, mu.weights / reference.weights)

    @property
    def space(self) -> StateSpace:
        return self.reference.space


def as_array(x) -> np.ndarray:
    """Unwrap package types to float arrays; pass arrays through."""
    if isinstance(x, Generator):
        return x.rates
    if isinstance(x, ProbMeasure):
        return x.weights
    if isinstance(x, (Observable, Density)):
        return x.values
    return np.asarray(x, dtype=float)


def _reachable(adj: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i] & ~seen):
            seen[j] = True
            queue.append(j)
    return seen


def unreachable_pair(rates: np.ndarray):
    """Return ``(i, j)`` with ``j`` unreachable from ``i``, or ``None``.

    Strong connectivity is decided by a forward and a backward search from
    state 0 on the pattern of positive off-diagonal entries.
    """
    adj = np.asarray(rates) > 0
    np.fill_diagonal(adj, False)
    fwd = _reachable(adj, 0)
    if not fwd.all():
        return 0, int(np.flatnonzero(~fwd)[0])
    bwd = _reachable(adj.T, 0)
    if not bwd.all():
        return int(np.flatnonzero(~bwd)[0]), 0
    return None


def _check_generator(rates: np.ndarray, space: StateSpace) -> None:
    n = space.size
    if rates.shape != (n, n):
        raise DimensionMismatch(
            f"rate matrix has shape {rates.shape}, expected ({n}, {n})")
    if not np.all(np.isfinite(rates)):
        raise ValidationError("rate matrix contains non-finite entries")
    off = ~np.eye(n, dtype=bool)
    neg = np.argwhere((rates < 0) & off)
    if neg.size:
        i, j = neg[0]
        raise NegativeOffDiagonal(
            f"NegativeOffDiagonal at ({space.labels[i]}, {space.labels[j]}): "
            f"{rates[i, j]:.17g}")
    scale = float(np.abs(rates).max())
    sums = rates.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums) > ROW_SUM_RTOL * scale)
    if bad.size:
        i = bad[0]
        raise RowSumNonzero(
            f"RowSumNonzero at state {space.labels[i]}: row sum {sums[i]:.17g}")
    pair = unreachable_pair(rates)
    if pair is not None:
        i, j = pair
        raise NotIrreducible(
            f"NotIrreducible: state {space.labels[j]} is unreachable "
            f"from state {space.labels[i]}")


def validate_generator(rates, space: StateSpace | None = None) -> Generator:
    """Check a raw rate matrix and wrap it as a :class:`Generator`.

    Parameters
    ----------
    rates : array_like, shape (n, n)
        Off-diagonal entries must be non-negative and each row must sum to
        zero within ``1e-12 * max|entry|``. No repair is attempted.
    space : StateSpace, optional
        Defaults to states labelled ``"1"``, ..., ``"n"``.

    Raises
    ------
    NegativeOffDiagonal, RowSumNonzero, NotIrreducible
    """
    arr = np.asarray(rates, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch("rate matrix must be square")
    if space is None:
        space = StateSpace.of_size(arr.shape[0])
    return Generator(space, arr)


def generator_from_offdiagonal(rates, space: StateSpace | None = None) -> Generator:
    """Build a generator from off-diagonal rates, filling the diagonal."""
    arr = np.array(rates, dtype=float)
    np.fill_diagonal(arr, 0.0)
    np.fill_diagonal(arr, -arr.sum(axis=1))
    return validate_generator(arr, space)


def steady_state(M: Generator) -> ProbMeasure:
    """Unique positive solution of ``M^T pi = 0``.

    The null vector is the last right singular vector of ``M^T``. The next
    smallest singular value must clear the working tolerance (uniqueness)
    and the residual ``|M^T pi|`` must stay below ``STEADY_STATE_RESIDUAL``
    relative to the largest rate.

    Raises
    ------
    NumericalRankFailure
        If the numerical null space is not one-dimensional or the null vector
        cannot be normalised to a positive measure.
    """
    A = as_array(M).T
    n = A.shape[0]
    _, s, vt = np.linalg.svd(A)
    tol = s[0] * n * np.finfo(float).eps * 16
    nullity = int(np.sum(s[:-1] <= tol)) + 1
    if nullity != 1:
        raise NumericalRankFailure(
            f"null space of M^T has numerical dimension {nullity}")
    v = vt[-1]
    v = v / v.sum()
    if np.any(v <= 0):
        raise NumericalRankFailure("null vector is not strictly positive")
    v = v / v.sum()
    resid = float(np.abs(A @ v).max())
    if resid > STEADY_STATE_RESIDUAL * max(1.0, float(np.abs(A).max())):
        raise NumericalRankFailure(f"steady-state residual {resid:.3e}")
    space = M.space if isinstance(M, Generator) else StateSpace.of_size(n)
    return ProbMeasure(space, v)


def is_reversible(M, zeta) -> bool:
    """Detailed-balance test ``zeta(z) M(z,z') = zeta(z') M(z',z)``.

    The tolerance is ``1e-12`` times the largest flux ``zeta(z) |M(z,z')|``.
    """
    rates = as_array(M)
    z = as_array(zeta)
    if rates.shape != (z.size, z.size):
        raise DimensionMismatch("generator and measure sizes differ")
    flux = z[:, None] * rates
    np.fill_diagonal(flux, 0.0)
    scale = max(float(np.abs(flux).max()), np.finfo(float).tiny)
    return bool(np.abs(flux - flux.T).max() <= 1e-12 * scale)


def total_variation(mu, nu) -> float:
    """Half the l1 distance between two probability vectors."""
    return 0.5 * float(np.abs(as_array(mu) - as_array(nu)).sum())


@dataclass(frozen=True, eq=False)
class ChainFile:
    """Contents of a chain JSON file."""

    generator: Generator
    measure: ProbMeasure | None = field(default=None)

    @property
    def space(self) -> StateSpace:
        return self.generator.space


def chain_from_dict(data: dict) -> ChainFile:
    try:
        states = data["states"]
        rates = data["rates"]
    except (KeyError, TypeError):
        raise ValidationError("chain file needs 'states' and 'rates'") from None
    space = StateSpace(tuple(states))
    gen = validate_generator(rates, space)
    measure = None
    if data.get("measure") is not None:
        measure = ProbMeasure(space, data["measure"])
    return ChainFile(gen, measure)


def chain_to_dict(M: Generator, measure: ProbMeasure | None = None) -> dict:
    out = {"states": list(M.space.labels), "rates": M.rates.tolist()}
    if measure is not None:
        out["measure"] = measure.weights.tolist()
    return out


def load_chain(path) -> ChainFile:
    """Read a chain JSON file ``{"states", "rates", "measure"?}``."""
    with open(Path(path), encoding="utf-8") as fh:
        data = json.load(fh)
    return chain_from_dict(data)


def measure_from_data(data, space: StateSpace) -> ProbMeasure:
    """Parse a measure given as a list or a ``{"measure": [...]}`` mapping."""
    if isinstance(data, dict):
        if "measure" not in data:
            raise ValidationError("measure file needs a 'measure' entry")
        if "states" in data and tuple(map(str, data["states"])) != space.labels:
            raise ValidationError("measure file states do not match chain")
        data = data["measure"]
    return ProbMeasure(space, data)


def random_generator(rng: np.random.Generator, n: int, density: float = 1.0,
                     scale: float = 1.0) -> Generator:
    """Random irreducible generator; a directed cycle guarantees irreducibility.

    Parameters
    ----------
    density : float
        Probability that each additional off-diagonal entry is positive.
    """
    off = rng.uniform(0.1, 1.0, size=(n, n)) * scale
    mask = rng.uniform(size=(n, n)) < density
    perm = rng.permutation(n)
    for k in range(n):
        mask[perm[k], perm[(k + 1) % n]] = True
    off = np.where(mask, off, 0.0)
    return generator_from_offdiagonal(off)


def random_measure(rng: np.random.Generator, n: int, low: float = 0.05) -> np.ndarray:
    """Random strictly positive probability vector with entries bounded below."""
    w = rng.uniform(low, 1.0, size=n)
    return w / w.sum()


def check_same_size(*arrays: Sequence) -> int:
    sizes = {len(a) for a in arrays}
    if len(sizes) != 1:
        raise DimensionMismatch(f"inconsistent sizes {sorted(sizes)}")
    return sizes.pop()
