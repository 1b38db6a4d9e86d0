"""Reference instances: small chains with known closed-form quantities.

Each builder returns package types; :func:`bundled` lists the JSON files
shipped in ``markovfi/data`` and :func:`export_all` regenerates them.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .chain import Generator, ProbMeasure, StateSpace, chain_to_dict, validate_generator
from .coarse import CoarseGrainMap, MultiscaleChain
from .serialize import dumps_json


def cyclic_rates(n: int) -> np.ndarray:
    """``M(i, i+1) = 1``, ``M(i, i) = -1`` indices modulo ``n``."""
    rates = -np.eye(n)
    rates[np.arange(n), (np.arange(n) + 1) % n] = 1.0
    return rates


@dataclass(frozen=True, eq=False)
class CyclicExample:
    """Three-state cycle with a non-stationary reference measure.

    ``f`` and ``g`` are two centred observables with known Dirichlet forms
    ``7/8`` and ``23/8`` and variances ``1/2`` and ``3/2``.
    """

    generator: Generator
    zeta: ProbMeasure
    f: np.ndarray
    g: np.ndarray


def cyclic3() -> CyclicExample:
    M = validate_generator(cyclic_rates(3))
    zeta = ProbMeasure(M.space, [0.5, 0.25, 0.25])
    return CyclicExample(M, zeta, np.array([0.0, 1.0, -1.0]),
                         np.array([1.0, -2.0, 0.0]))


@dataclass(frozen=True, eq=False)
class CyclicFamily:
    """Cycle on ``2N`` states with two light states.

    ``zeta`` is ``eps/N`` at positions ``N-1`` and ``2N-1`` and ``1/N``
    elsewhere; it is not normalised (total mass ``2 - 2(1 - eps)/N``).
    ``f`` is ``+1`` on the first half and ``-1`` on the second, ``phi`` is
    ``1/2`` and ``3/2`` on the two halves.
    """

    generator: Generator
    zeta: np.ndarray
    f: np.ndarray
    phi: np.ndarray

    @property
    def zeta_min(self) -> float:
        return float(self.zeta.min())

    def normalised_zeta(self) -> ProbMeasure:
        return ProbMeasure(self.generator.space, self.zeta / self.zeta.sum())


def cyclic_2n(N: int, eps: float) -> CyclicFamily:
    if N < 1 or not eps > 0:
        raise ValueError("need N >= 1 and eps > 0")
    n = 2 * N
    M = validate_generator(cyclic_rates(n))
    zeta = np.full(n, 1.0 / N)
    zeta[[N - 1, n - 1]] = eps / N
    half = np.arange(n) < N
    return CyclicFamily(M, zeta, np.where(half, 1.0, -1.0),
                        np.where(half, 0.5, 1.5))


SIX_STATES = StateSpace.of_size(6)

# fast rates inside {1,2,3} and {4,5,6}; slow rates 2<->4 and 3<->6
_FAST = np.array([
    [0.0, 2.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 2.0, 0.0, 0.0, 0.0],
    [2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 2.0],
    [0.0, 0.0, 0.0, 2.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 1.0, 2.0, 0.0],
])
_SLOW = np.zeros((6, 6))
_SLOW[1, 3] = 1.0
_SLOW[2, 5] = 2.0
_SLOW[3, 1] = 2.0
_SLOW[5, 2] = 1.0


def _with_diagonal(off: np.ndarray) -> np.ndarray:
    out = off.copy()
    np.fill_diagonal(out, -out.sum(axis=1))
    return out


def natural_map() -> CoarseGrainMap:
    return CoarseGrainMap.from_clusters({"a": ["1", "2", "3"], "b": ["4", "5", "6"]},
                                        SIX_STATES)


def mixed_map() -> CoarseGrainMap:
    """The map that splits both fast clusters."""
    return CoarseGrainMap.from_clusters({"a": ["1", "2", "4"], "b": ["3", "5", "6"]},
                                        SIX_STATES)


def six_state_multiscale() -> MultiscaleChain:
    return MultiscaleChain(_with_diagonal(_FAST), _with_diagonal(_SLOW), natural_map())


def six_state(eps: float) -> Generator:
    """Non-reversible six-state chain ``Q / eps + G``."""
    return six_state_multiscale().assemble(eps)


def six_state_steady_state(eps: float) -> np.ndarray:
    """Closed-form steady state of :func:`six_state`."""
    v = np.array([7 + 4 * eps, 7 + 6 * eps, 7 + 3 * eps,
                  7 + 3 * eps, 7 + 5 * eps, 7 + 6 * eps])
    return v / (42 + 27 * eps)


DATA_FILES = {
    "cyclic3.json": lambda: chain_to_dict(cyclic3().generator, cyclic3().zeta),
    "cyclic3_measure.json": lambda: {"measure": cyclic3().zeta.weights.tolist()},
    "cyclic_2n_N8_eps0.01.json": lambda: _family_dict(8, 0.01),
    "six_state_eps1.json": lambda: chain_to_dict(six_state(1.0)),
    "six_state_eps0.1.json": lambda: chain_to_dict(six_state(0.1)),
    "six_state_eps0.01.json": lambda: chain_to_dict(six_state(0.01)),
    "six_state_eps0.001.json": lambda: chain_to_dict(six_state(1e-3)),
    "six_state_natural_map.json": lambda: natural_map().to_dict(),
    "six_state_mixed_map.json": lambda: mixed_map().to_dict(),
    "six_state_multiscale.json": lambda: six_state_multiscale().to_dict(),
}


def _family_dict(N, eps):
    fam = cyclic_2n(N, eps)
    return chain_to_dict(fam.generator, fam.normalised_zeta())


def export_all(directory) -> list:
    """Write every bundled instance into ``directory``; returns the paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, build in DATA_FILES.items():
        path = out / name
        path.write_text(dumps_json(build()), encoding="utf-8")
        paths.append(path)
    return paths


def bundled(name: str) -> Path:
    """Path of a JSON file shipped with the package."""
    if name not in DATA_FILES:
        raise KeyError(f"unknown bundled instance {name!r}")
    return Path(str(resources.files("markovfi") / "data" / name))
