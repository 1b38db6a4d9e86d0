"""Coarse-graining maps, reduced generators and clustering quality.

A coarse-graining map sends fine states to cluster labels. From it and a
fine chain we build the exact time-dependent coarse generator, the
effective generator (averaging over conditional steady-state measures) and
the averaged generator (averaging over the steady states of the restricted
cluster chains). The quality score of a map is the smallest certified gLSI
lower bound over its clusters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence, TextIO

import numpy as np

from .chain import (
    Generator,
    ProbMeasure,
    StateSpace,
    as_array,
    steady_state,
    total_variation,
    validate_generator,
)
from .constants import alpha_glsi_estimate, spectral_gap, symmetrise
from .dynamics import evolve, nonequilibrium_entropy
from .errors import (
    DimensionMismatch,
    EmptyLevelSet,
    InvalidMap,
    NotIrreducible,
    RestrictionNotIrreducible,
    SearchSpaceTooLarge,
    ValidationError,
    ZeroClusterMass,
)
from .serialize import write_csv

SEARCH_MAX_STATES = 12


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True, eq=False)
class CoarseGrainMap:
    """Surjection ``xi`` from fine states onto at least two cluster labels.

    ``assignment[i]`` is the coarse index of fine state ``i``.
    """

    fine: StateSpace
    coarse: StateSpace
    assignment: tuple

    def __post_init__(self):
        a = tuple(int(v) for v in self.assignment)
        object.__setattr__(self, "assignment", a)
        if len(a) != self.fine.size:
            raise InvalidMap(
                f"map assigns {len(a)} states, fine space has {self.fine.size}")
        k = self.coarse.size
        if any(v < 0 or v >= k for v in a):
            raise InvalidMap("assignment refers to an unknown cluster")
        empty = [self.coarse.labels[y] for y in range(k) if y not in a]
        if empty:
            raise EmptyLevelSet(f"cluster {empty[0]} has no states")

    @classmethod
    def from_clusters(cls, clusters: Mapping[str, Sequence],
                      fine: StateSpace) -> "CoarseGrainMap":
        """Build from ``{coarse label: [fine labels]}``; every state exactly once."""
        if not isinstance(clusters, Mapping) or len(clusters) < 2:
            raise InvalidMap("need a mapping with at least two clusters")
        assign = [-1] * fine.size
        for y, members in enumerate(clusters.values()):
            for label in members:
                i = fine.index(label)
                if assign[i] != -1:
                    raise InvalidMap(f"state {label} assigned twice")
                assign[i] = y
        missing = [fine.labels[i] for i, y in enumerate(assign) if y == -1]
        if missing:
            raise InvalidMap(f"state {missing[0]} is not assigned")
        return cls(fine, StateSpace(tuple(clusters.keys())), tuple(assign))

    @classmethod
    def from_labels(cls, labels: Sequence, fine: StateSpace | None = None,
                    coarse_labels: Sequence | None = None) -> "CoarseGrainMap":
        """Build from a per-state cluster tag; clusters ordered by first use."""
        tags = [str(t) for t in labels]
        order = list(dict.fromkeys(tags))
        if fine is None:
            fine = StateSpace.of_size(len(tags))
        if coarse_labels is None:
            coarse_labels = order
        elif len(coarse_labels) != len(order):
            raise InvalidMap("coarse label count does not match cluster count")
        return cls(fine, StateSpace(tuple(coarse_labels)),
                   tuple(order.index(t) for t in tags))

    @property
    def level_sets(self) -> tuple:
        """Fine indices of each cluster, in coarse order."""
        a = np.asarray(self.assignment)
        return tuple(np.flatnonzero(a == y) for y in range(self.coarse.size))

    def cluster_space(self, y: int) -> StateSpace:
        return StateSpace(tuple(self.fine.labels[i] for i in self.level_sets[y]))

    @property
    def encoding(self) -> tuple:
        """Restricted growth string: cluster ids renumbered by first occurrence."""
        first = {}
        return tuple(first.setdefault(y, len(first)) for y in self.assignment)

    def indicator(self) -> np.ndarray:
        """``|X| x |Y|`` 0/1 membership matrix."""
        out = np.zeros((self.fine.size, self.coarse.size))
        out[np.arange(self.fine.size), self.assignment] = 1.0
        return out

    def to_dict(self) -> dict:
        return {"clusters": {self.coarse.labels[y]: [self.fine.labels[i] for i in s]
                             for y, s in enumerate(self.level_sets)}}

    def describe(self) -> str:
        return "|".join("{" + ",".join(self.fine.labels[i] for i in s) + "}"
                        for s in self.level_sets)

    def permuted(self, perm: Sequence[int]) -> "CoarseGrainMap":
        """Map on the relabelled fine space whose state ``k`` is old ``perm[k]``."""
        perm = list(perm)
        fine = StateSpace(tuple(self.fine.labels[p] for p in perm))
        return CoarseGrainMap(fine, self.coarse,
                              tuple(self.assignment[p] for p in perm))


def map_from_dict(data: dict, fine: StateSpace) -> CoarseGrainMap:
    if not isinstance(data, dict) or "clusters" not in data:
        raise InvalidMap("map file needs a 'clusters' mapping")
    return CoarseGrainMap.from_clusters(data["clusters"], fine)


def load_map(path, fine: StateSpace) -> CoarseGrainMap:
    """Read ``{"clusters": {label: [fine labels]}}``."""
    with open(Path(path), encoding="utf-8") as fh:
        return map_from_dict(json.load(fh), fine)


def _check_map(M, xi: CoarseGrainMap) -> np.ndarray:
    rates = as_array(M)
    if rates.shape != (xi.fine.size, xi.fine.size):
        raise DimensionMismatch("generator size does not match the map")
    return rates


def pushforward(xi: CoarseGrainMap, mu) -> np.ndarray:
    """``mu_hat(y) = sum_{x in Lambda_y} mu(x)``."""
    v = as_array(mu)
    if v.shape != (xi.fine.size,):
        raise DimensionMismatch("measure size does not match the map")
    return np.bincount(np.asarray(xi.assignment), weights=v,
                       minlength=xi.coarse.size)


def conditional_weights(xi: CoarseGrainMap, rho) -> tuple:
    """``rho(.|y)`` on each level set as plain arrays, in coarse order.

    Raises
    ------
    ZeroClusterMass
        If a cluster carries no mass.
    """
    v = as_array(rho)
    if v.shape != (xi.fine.size,):
        raise DimensionMismatch("measure size does not match the map")
    out = []
    for y, idx in enumerate(xi.level_sets):
        mass = float(v[idx].sum())
        if not mass > 0:
            raise ZeroClusterMass(f"cluster {xi.coarse.labels[y]} has zero mass")
        out.append(v[idx] / mass)
    return tuple(out)


def conditional_measures(xi: CoarseGrainMap, rho) -> tuple:
    """``rho(.|y)`` as :class:`ProbMeasure` on each level set.

    Raises
    ------
    ZeroClusterMass
    RestrictionNotIrreducible
        For singleton clusters, which carry no measure space of their own.
    """
    out = []
    for y, w in enumerate(conditional_weights(xi, rho)):
        if w.size < 2:
            raise RestrictionNotIrreducible(
                f"cluster {xi.coarse.labels[y]} is a singleton")
        out.append(ProbMeasure(xi.cluster_space(y), w))
    return tuple(out)


# ---------------------------------------------------------------------------
# reduced generators


def _cluster_index(xi: CoarseGrainMap, y) -> int:
    if isinstance(y, (int, np.integer)) and not isinstance(y, bool):
        if not 0 <= y < xi.coarse.size:
            raise InvalidMap(f"cluster index {y} out of range")
        return int(y)
    return xi.coarse.index(y)


def restricted_generator(M, xi: CoarseGrainMap, y) -> Generator:
    """Block of ``M`` on ``Lambda_y`` with the diagonal re-balanced.

    Raises
    ------
    RestrictionNotIrreducible
        For singleton clusters and for blocks that are not irreducible.
    """
    rates = _check_map(M, xi)
    k = _cluster_index(xi, y)
    idx = xi.level_sets[k]
    label = xi.coarse.labels[k]
    if idx.size < 2:
        raise RestrictionNotIrreducible(
            f"cluster {label} is a singleton and has no internal dynamics")
    block = rates[np.ix_(idx, idx)].copy()
    np.fill_diagonal(block, 0.0)
    np.fill_diagonal(block, -block.sum(axis=1))
    try:
        return validate_generator(block, xi.cluster_space(k))
    except NotIrreducible as exc:
        raise RestrictionNotIrreducible(
            f"restriction to cluster {label} is not irreducible ({exc})") from None


def _lump(rates, xi: CoarseGrainMap, weights) -> Generator:
    # C(y1, y2) = sum_{x1 in y1, x2 in y2} w(x1) M(x1, x2)
    A = xi.indicator()
    coarse = A.T @ (np.asarray(weights)[:, None] * rates) @ A
    np.fill_diagonal(coarse, 0.0)
    np.fill_diagonal(coarse, -coarse.sum(axis=1))
    return validate_generator(coarse, xi.coarse)


def _conditional_weights(xi: CoarseGrainMap, mu) -> np.ndarray:
    w = np.empty(xi.fine.size)
    for idx, cond in zip(xi.level_sets, conditional_weights(xi, mu)):
        w[idx] = cond
    return w


def coarse_grained_generator(M, xi: CoarseGrainMap, mu_t) -> Generator:
    """Exact coarse generator ``M_hat_t(y1,y2) = sum M(x1,x2) mu_t(x1|y1)``.

    Raises
    ------
    ZeroClusterMass
    """
    rates = _check_map(M, xi)
    return _lump(rates, xi, _conditional_weights(xi, mu_t))


def effective_generator(M, xi: CoarseGrainMap, rho=None) -> Generator:
    """``N(y1,y2) = sum M(x1,x2) rho(x1|y1)`` with ``rho`` the steady state.

    ``rho`` defaults to ``steady_state(M)``.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M, xi.fine)
    _check_map(M, xi)
    if rho is None:
        rho = steady_state(M)
    return _lump(M.rates, xi, _conditional_weights(xi, rho))


def cluster_steady_states(M, xi: CoarseGrainMap) -> tuple:
    """Steady states ``rho_y`` of the restricted generators."""
    return tuple(steady_state(restricted_generator(M, xi, y))
                 for y in range(xi.coarse.size))


def averaged_generator(M, xi: CoarseGrainMap | None = None) -> Generator:
    """``M_av(y1,y2) = sum M(x1,x2) rho_{y1}(x1)`` with ``rho_y`` the cluster steady states.

    For a :class:`MultiscaleChain` the slow part ``G`` is averaged over the
    steady states of the fast blocks ``Q_y``; the result does not depend on
    ``epsilon``.

    Raises
    ------
    RestrictionNotIrreducible
    """
    if isinstance(M, MultiscaleChain):
        if xi is not None and xi.assignment != M.map.assignment:
            raise InvalidMap("map differs from the multiscale chain's own map")
        xi = M.map
        weights = np.empty(xi.fine.size)
        for idx, pi in zip(xi.level_sets, M.fast_steady_states()):
            weights[idx] = pi.weights
        return _lump(M.G, xi, weights)
    if xi is None:
        raise InvalidMap("averaged_generator needs a coarse-graining map")
    rates = _check_map(M, xi)
    weights = np.empty(xi.fine.size)
    for idx, pi in zip(xi.level_sets, cluster_steady_states(M, xi)):
        weights[idx] = pi.weights
    return _lump(rates, xi, weights)


def generator_distance(A, B) -> float:
    """Matrix infinity norm (largest absolute row sum) of ``A - B``."""
    return float(np.abs(as_array(A) - as_array(B)).sum(axis=1).max())


# ---------------------------------------------------------------------------
# multiscale chains


@dataclass(frozen=True, eq=False)
class MultiscaleChain:
    """``L^eps = Q / eps + G`` with ``Q`` fast inside clusters and ``G`` slow.

    ``Q`` must vanish between clusters and each block ``Q_y`` must be an
    irreducible generator. ``G`` must have zero row sums and diagonal
    intra-cluster blocks ``D_y``.
    """

    Q: np.ndarray
    G: np.ndarray
    map: CoarseGrainMap

    def __post_init__(self):
        n = self.map.fine.size
        for name in ("Q", "G"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (n, n):
                raise DimensionMismatch(f"{name} has shape {arr.shape}, expected ({n}, {n})")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        same = np.equal.outer(self.map.assignment, self.map.assignment)
        off = ~np.eye(n, dtype=bool)
        if np.any(self.Q[~same] != 0):
            raise ValidationError("Q has rates between different clusters")
        if np.any(self.G[same & off] != 0):
            raise ValidationError("G has off-diagonal rates inside a cluster")
        for G_or_Q, name in ((self.Q, "Q"), (self.G, "G")):
            if np.any(G_or_Q[off] < 0):
                raise ValidationError(f"{name} has negative off-diagonal rates")
            scale = max(float(np.abs(G_or_Q).max()), np.finfo(float).tiny)
            if np.abs(G_or_Q.sum(axis=1)).max() > 1e-12 * scale:
                raise ValidationError(f"{name} rows do not sum to zero")
        for y in range(self.map.coarse.size):
            restricted_generator(self.Q, self.map, y)

    @property
    def space(self) -> StateSpace:
        return self.map.fine

    def assemble(self, eps: float) -> Generator:
        """Validated ``L^eps``."""
        eps = float(eps)
        if not eps > 0:
            raise ValidationError(f"epsilon must be positive, got {eps}")
        L = self.Q / eps + self.G
        np.fill_diagonal(L, 0.0)
        np.fill_diagonal(L, -L.sum(axis=1))
        return validate_generator(L, self.space)

    def fast_steady_states(self) -> tuple:
        """Steady states ``pi_y`` of the blocks ``Q_y``."""
        return cluster_steady_states(self.Q, self.map)

    def to_dict(self) -> dict:
        return {"states": list(self.space.labels),
                "clusters": self.map.to_dict()["clusters"],
                "Q": self.Q.tolist(), "G": self.G.tolist()}


def multiscale_from_dict(data: dict) -> MultiscaleChain:
    try:
        space = StateSpace(tuple(data["states"]))
        xi = CoarseGrainMap.from_clusters(data["clusters"], space)
        return MultiscaleChain(data["Q"], data["G"], xi)
    except (KeyError, TypeError):
        raise ValidationError(
            "multiscale file needs 'states', 'clusters', 'Q' and 'G'") from None


def load_multiscale(path) -> MultiscaleChain:
    with open(Path(path), encoding="utf-8") as fh:
        return multiscale_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# quality score


@dataclass(frozen=True, eq=False)
class ClusterQuality:
    """Per-cluster ingredients of the quality score."""

    label: str
    generator: Generator
    conditional: ProbMeasure
    gap: float
    conditional_min: float
    glsi_estimate: float | None = None

    @property
    def lower(self) -> float:
        """``gap / (2 + log(1 / rho(.|y)_*))``."""
        return self.gap / (2.0 + np.log(1.0 / self.conditional_min))

    @property
    def upper(self) -> float:
        return 2.0 * self.gap

    def to_dict(self) -> dict:
        return {"label": self.label, "states": list(self.generator.space.labels),
                "conditional": self.conditional.weights.tolist(),
                "gap": self.gap, "conditional_min": self.conditional_min,
                "lower": self.lower, "upper": self.upper,
                "glsi_estimate": self.glsi_estimate}


@dataclass(frozen=True, eq=False)
class QualityReport:
    """Quality score ``alpha`` of a map with its per-cluster breakdown."""

    map: CoarseGrainMap
    clusters: tuple

    @property
    def alpha(self) -> float:
        return min(c.lower for c in self.clusters)

    def to_dict(self) -> dict:
        return {"map": self.map.to_dict()["clusters"], "alpha": self.alpha,
                "clusters": [c.to_dict() for c in self.clusters]}


def quality_score(M, xi: CoarseGrainMap, rho=None, with_glsi: bool = False,
                  seed: int = 0, restarts: int = 16) -> QualityReport:
    """``alpha = min_y gap_y / (2 + log(1 / rho(.|y)_*))``.

    ``gap_y`` is the spectral gap of the restricted generator ``M^y``
    symmetrised with respect to the conditional steady state ``rho(.|y)``.
    With ``with_glsi`` each cluster also carries an optimizer estimate of
    its gLSI constant.

    Raises
    ------
    RestrictionNotIrreducible
    """
    if not isinstance(M, Generator):
        M = validate_generator(M, xi.fine)
    _check_map(M, xi)
    if rho is None:
        rho = steady_state(M)
    conds = conditional_measures(xi, rho)
    out = []
    for y, cond in enumerate(conds):
        My = restricted_generator(M, xi, y)
        gap = spectral_gap(symmetrise(My, cond))
        est = None
        if with_glsi:
            est = alpha_glsi_estimate(cond, My, seed=seed, restarts=restarts).value
        out.append(ClusterQuality(xi.coarse.labels[y], My, cond, gap,
                                  cond.minimum, est))
    return QualityReport(xi, tuple(out))


# ---------------------------------------------------------------------------
# exhaustive search


def stirling2(n: int, k: int) -> int:
    """Number of partitions of ``n`` items into ``k`` non-empty blocks."""
    row = [1] + [0] * k
    for _ in range(n):
        for j in range(k, 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[k]


def restricted_growth_strings(n: int, k: int) -> Iterator[tuple]:
    """Set partitions of ``n`` items into exactly ``k`` blocks, lexicographically."""
    s = [0] * n

    def rec(i, m):
        if n - i < k - m:
            return
        if i == n:
            if m == k:
                yield tuple(s)
            return
        for v in range(min(m + 1, k)):
            s[i] = v
            yield from rec(i + 1, max(m, v + 1))

    if n >= 1 and 1 <= k <= n:
        s[0] = 0
        yield from rec(1, 1)


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Ranked partitions with enumeration bookkeeping.

    ``total == len(ranking) + singleton_rejected + reducible_rejected``.
    """

    ranking: tuple
    total: int
    singleton_rejected: int
    reducible_rejected: int

    @property
    def best(self):
        return self.ranking[0] if self.ranking else None

    def to_dict(self) -> dict:
        return {"total": self.total,
                "singleton_rejected": self.singleton_rejected,
                "reducible_rejected": self.reducible_rejected,
                "ranking": [{"partition": xi.describe(), "alpha": a,
                             "clusters": xi.to_dict()["clusters"]}
                            for xi, a in self.ranking]}


def clustering_search(M, k: int, max_states: int = SEARCH_MAX_STATES,
                      budget: int | None = None) -> SearchResult:
    """Score every partition of the states into ``k`` clusters.

    Partitions with a singleton cluster or a reducible restriction are
    counted and skipped. The ranking is by descending ``alpha``; ties are
    broken by the restricted growth string of the partition.

    Parameters
    ----------
    budget : int, optional
        Upper limit on the number of partitions to enumerate.

    Raises
    ------
    SearchSpaceTooLarge
        If ``|X| > max_states`` or the partition count exceeds ``budget``.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M)
    n = M.size
    if n > max_states:
        raise SearchSpaceTooLarge(f"{n} states exceeds the cap of {max_states}")
    if not 2 <= k <= n:
        raise ValidationError(f"cluster count must lie in [2, {n}], got {k}")
    total = stirling2(n, k)
    if budget is not None and total > budget:
        raise SearchSpaceTooLarge(f"{total} partitions exceed the budget {budget}")
    rho = steady_state(M)
    labels = tuple(f"C{j + 1}" for j in range(k))
    scored = []
    singles = reducible = 0
    for rgs in restricted_growth_strings(n, k):
        if min(np.bincount(rgs, minlength=k)) < 2:
            singles += 1
            continue
        xi = CoarseGrainMap(M.space, StateSpace(labels), rgs)
        try:
            alpha = quality_score(M, xi, rho).alpha
        except RestrictionNotIrreducible:
            reducible += 1
            continue
        scored.append((-alpha, rgs, xi, alpha))
    scored.sort(key=lambda item: (item[0], item[1]))
    ranking = tuple((xi, alpha) for _, _, xi, alpha in scored)
    return SearchResult(ranking, total, singles, reducible)


# ---------------------------------------------------------------------------
# error measurements


@dataclass(frozen=True)
class SweepRow:
    eps: float
    sup_H: float
    tv_error: float
    gen_dist: float
    initial_H: float


@dataclass(frozen=True, eq=False)
class MultiscaleSweep:
    rows: tuple
    averaged: Generator
    averaged_steady_state: np.ndarray = field(repr=False)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def ratios(self, name: str) -> np.ndarray:
        """Successive ratios ``value[k+1] / value[k]`` of a column."""
        c = self.column(name)
        return c[1:] / c[:-1]

    def to_csv(self, fh: TextIO) -> None:
        cols = ("eps", "sup_H", "tv_error", "gen_dist")
        write_csv(fh, cols, ([getattr(r, c) for c in cols] for r in self.rows))


def _prob(vec, n, what) -> np.ndarray:
    v = np.array(as_array(vec), dtype=float)
    if v.shape != (n,):
        raise DimensionMismatch(f"{what} has {v.size} entries, expected {n}")
    if np.any(v <= 0) or abs(v.sum() - 1.0) > 1e-12:
        raise ValidationError(f"{what} must be a strictly positive probability vector")
    return v


def multiscale_error_sweep(ms: MultiscaleChain, eps_list: Sequence[float], mu0,
                           times, eta0=None, eta_shift=None) -> MultiscaleSweep:
    """Coarse-graining errors of ``L^eps`` for each ``eps``.

    For each value the fine law ``mu_t`` under ``L^eps`` is pushed forward
    and compared with ``eta_t`` evolved under the effective generator
    ``N^eps``. Recorded are ``sup_t H_{eta_t}(mu_hat_t / eta_t)``, the total
    variation distance between the pushed-forward steady state and the
    steady state of ``L^av``, and ``|N^eps - L^av|_inf``.

    Parameters
    ----------
    eta0 : array_like, optional
        Coarse initial law; defaults to the pushforward of ``mu0``.
    eta_shift : array_like, optional
        Zero-sum coarse vector; ``eta0 + sqrt(eps) * eta_shift`` is used, so
        that the initial error ``H_{eta0}(mu_hat_0 / eta0)`` is of order
        ``eps``.
    """
    eps = np.asarray(eps_list, dtype=float)
    if eps.ndim != 1 or eps.size == 0 or np.any(eps <= 0):
        raise ValidationError("epsilon values must be positive")
    if np.any(np.diff(eps) >= 0):
        raise ValidationError("epsilon values must be strictly decreasing")
    xi = ms.map
    mu = _prob(mu0, xi.fine.size, "mu0")
    base = pushforward(xi, mu) if eta0 is None else _prob(eta0, xi.coarse.size, "eta0")
    shift = None
    if eta_shift is not None:
        shift = np.asarray(eta_shift, dtype=float)
        if shift.shape != (xi.coarse.size,) or abs(shift.sum()) > 1e-12:
            raise ValidationError("eta_shift must be a zero-sum coarse vector")
    Lav = averaged_generator(ms)
    pi_av = steady_state(Lav).weights
    rows = []
    for e in eps:
        L = ms.assemble(e)
        rho = steady_state(L)
        N = effective_generator(L, xi, rho)
        eta = base if shift is None else _prob(base + np.sqrt(e) * shift,
                                               xi.coarse.size, "shifted eta0")
        fine = evolve(L, mu, times)
        coarse = evolve(N, eta, times)
        H = [nonequilibrium_entropy(pushforward(xi, m), h)
             for m, h in zip(fine.states, coarse.states)]
        rows.append(SweepRow(float(e), float(max(H)),
                             total_variation(pushforward(xi, rho), pi_av),
                             generator_distance(N, Lav),
                             nonequilibrium_entropy(pushforward(xi, mu), eta)))
    return MultiscaleSweep(tuple(rows), Lav, pi_av)


@dataclass(frozen=True, eq=False)
class ErrorMonitor:
    """Both sides of the finite-horizon coarse-graining error estimate.

    ``lhs[k] = H_{eta_t}(mu_hat_t / eta_t)``; the right-hand side is
    ``2 * initial + C * dissipated / alpha`` with an unknown constant ``C``,
    so only its ingredients are reported.
    """

    times: np.ndarray
    lhs: np.ndarray
    initial: float
    dissipated: np.ndarray
    alpha: float

    @property
    def bracket(self) -> np.ndarray:
        """``dissipated / alpha``, the coefficient of ``C``."""
        return self.dissipated / self.alpha

    def to_csv(self, fh: TextIO) -> None:
        write_csv(fh, ("time", "lhs", "initial_term", "dissipated_over_alpha"),
                  ([t, a, 2.0 * self.initial, b]
                   for t, a, b in zip(self.times, self.lhs, self.bracket)))


def error_monitor(M, xi: CoarseGrainMap, mu0, times, eta0=None) -> ErrorMonitor:
    """Measure the effective-dynamics error along a fine trajectory.

    ``dissipated[k] = H_rho(mu_0 / rho) - H_rho(mu_t / rho)``; ``alpha`` is
    the quality score of ``xi``.
    """
    if not isinstance(M, Generator):
        M = validate_generator(M, xi.fine)
    rho = steady_state(M)
    N = effective_generator(M, xi, rho)
    mu = _prob(mu0, M.size, "mu0")
    eta = pushforward(xi, mu) if eta0 is None else _prob(eta0, xi.coarse.size, "eta0")
    fine = evolve(M, mu, times)
    coarse = evolve(N, eta, times)
    lhs = np.array([nonequilibrium_entropy(pushforward(xi, m), h)
                    for m, h in zip(fine.states, coarse.states)])
    H = np.array([nonequilibrium_entropy(m, rho.weights) for m in fine.states])
    h0 = nonequilibrium_entropy(mu, rho.weights)
    alpha = quality_score(M, xi, rho).alpha
    return ErrorMonitor(fine.times, lhs,
                        nonequilibrium_entropy(pushforward(xi, mu), eta),
                        h0 - H, alpha)
