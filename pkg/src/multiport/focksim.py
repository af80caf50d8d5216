"""Bosonic evolution of few-photon Fock states through a real transfer matrix.

Convention: with ``b = G a`` on annihilation operators and ``G`` real
orthogonal, an input creation operator maps as ``a_k^dag = sum_i G[i, k] b_i^dag``.
Output configurations are keyed by the sorted tuple of occupied modes, so
``(0, 0)`` is two photons in mode 0 and ``(1, 3)`` is one in each of 1 and 3.

Two independent routes compute the same amplitudes: :func:`evolve_two_photon`
uses matrix permanents, :func:`brute_force_distribution` expands the product
of creation operators term by term on explicit Fock states.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .bsnet import MODE_COUNT, ORTHO_TOL, orthogonality_residual
from .errors import ConsistencyError, InvalidArgument, UnsupportedSize
from .occsim import BASIS, LogicalState

MAX_PHOTONS = 4
NORM_TOL = 1e-12

Config = tuple[int, ...]

# input mode pairs for the logical basis |00>, |01>, |10>, |11>
LOGICAL_INJECTIONS: dict[LogicalState, tuple[int, int]] = {
    s: (s.control, 2 + s.target) for s in BASIS
}


def permanent(m: np.ndarray) -> complex | float:
    """Ryser's formula for the permanent of a square matrix with ``n <= 4``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgument(f"permanent needs a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n > MAX_PHOTONS:
        raise UnsupportedSize(f"permanent limited to n <= {MAX_PHOTONS}, got {n}")
    if n == 0:
        return 1.0
    total = 0
    for r in range(1, n + 1):
        sign = (-1) ** r
        for cols in itertools.combinations(range(n), r):
            total += sign * np.prod(m[:, cols].sum(axis=1))
    return (-1) ** n * total


@dataclass(frozen=True)
class PhotonPair:
    """Two photons injected into definite input modes ``k <= l``."""

    k: int
    l: int

    def __post_init__(self) -> None:
        if not (0 <= self.k < MODE_COUNT and 0 <= self.l < MODE_COUNT):
            raise InvalidArgument(f"modes must lie in [0, {MODE_COUNT})")
        if self.k > self.l:
            k, l = self.l, self.k
            object.__setattr__(self, "k", k)
            object.__setattr__(self, "l", l)

    @property
    def modes(self) -> Config:
        return (self.k, self.l)


@dataclass(frozen=True)
class LogicalSuperposition:
    """``alpha|00> + beta|01> + gamma|10> + delta|11>`` in the dual-rail encoding."""

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != 4:
            raise InvalidArgument("a logical superposition needs four amplitudes")
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidArgument(f"amplitudes not normalized (sum |a|^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    def terms(self) -> list[tuple[complex, PhotonPair]]:
        return [(a, PhotonPair(*LOGICAL_INJECTIONS[s])) for a, s in zip(self.amplitudes, BASIS)]


TwoPhotonInput = Union[PhotonPair, LogicalSuperposition]


@dataclass
class EventDistribution:
    """Output amplitudes over Fock configurations."""

    amplitudes: dict[Config, complex] = field(default_factory=dict)

    @property
    def probabilities(self) -> dict[Config, float]:
        return {c: abs(a) ** 2 for c, a in self.amplitudes.items()}

    def total(self) -> float:
        return float(sum(self.probabilities.values()))

    def probability(self, config: Iterable[int]) -> float:
        return abs(self.amplitudes.get(tuple(sorted(config)), 0.0)) ** 2

    def configs(self) -> list[Config]:
        return sorted(self.amplitudes)

    def pruned(self, tol: float = 0.0) -> EventDistribution:
        return EventDistribution({c: a for c, a in self.amplitudes.items() if abs(a) > tol})

    def max_difference(self, other: EventDistribution) -> float:
        keys = set(self.amplitudes) | set(other.amplitudes)
        if not keys:
            return 0.0
        return max(abs(self.amplitudes.get(c, 0) - other.amplitudes.get(c, 0)) for c in keys)


def occupations(config: Config, n_modes: int = MODE_COUNT) -> tuple[int, ...]:
    """Expand a sorted mode tuple into per-mode photon counts."""
    counts = Counter(config)
    return tuple(counts.get(i, 0) for i in range(n_modes))


def _check_orthogonal(G: np.ndarray) -> np.ndarray:
    G = np.asarray(G)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise InvalidArgument(f"transfer matrix must be square, got {G.shape}")
    if orthogonality_residual(G) >= ORTHO_TOL:
        raise ConsistencyError("transfer matrix is not unitary")
    return G


def _multiset_norm(config: Config) -> float:
    return math.prod(math.factorial(c) for c in Counter(config).values())


def evolve_fock(G: np.ndarray, input_modes: Sequence[int]) -> EventDistribution:
    """Amplitudes for ``n <= 4`` photons entering ``input_modes`` (with repeats)."""
    G = _check_orthogonal(G)
    inp = tuple(sorted(input_modes))
    n = len(inp)
    if n > MAX_PHOTONS:
        raise UnsupportedSize(f"at most {MAX_PHOTONS} photons supported")
    in_norm = _multiset_norm(inp)
    out: dict[Config, complex] = {}
    for config in itertools.combinations_with_replacement(range(G.shape[0]), n):
        sub = G[np.ix_(config, inp)]
        amp = permanent(sub) / math.sqrt(in_norm * _multiset_norm(config))
        out[config] = amp
    return EventDistribution(out)


def evolve_two_photon(G: np.ndarray, inp: TwoPhotonInput) -> EventDistribution:
    """Two-photon output distribution via permanents.

    For a superposition input the four basis-injection amplitude maps are
    combined linearly with the logical amplitudes.
    """
    if isinstance(inp, PhotonPair):
        return evolve_fock(G, inp.modes)
    if isinstance(inp, LogicalSuperposition):
        return _combine((a, evolve_fock(G, pair.modes)) for a, pair in inp.terms())
    raise InvalidArgument(f"unsupported input {inp!r}")


def _combine(parts: Iterable[tuple[complex, EventDistribution]]) -> EventDistribution:
    acc: dict[Config, complex] = {}
    for coeff, dist in parts:
        for config, amp in dist.amplitudes.items():
            acc[config] = acc.get(config, 0) + coeff * amp
    return EventDistribution(acc)


# -- operator-expansion oracle ------------------------------------------------

FockState = dict[tuple[int, ...], complex]


def _create(state: FockState, mode: int, coeff: complex) -> FockState:
    """Apply ``coeff * b_mode^dag`` to a superposition of occupation tuples."""
    out: FockState = {}
    for occ, amp in state.items():
        n = occ[mode]
        new = occ[:mode] + (n + 1,) + occ[mode + 1:]
        out[new] = out.get(new, 0) + coeff * amp * math.sqrt(n + 1)
    return out


def _add(acc: FockState, part: Mapping[tuple[int, ...], complex]) -> None:
    for occ, amp in part.items():
        acc[occ] = acc.get(occ, 0) + amp


def _brute_force_pair(G: np.ndarray, k: int, l: int) -> FockState:
    n_modes = G.shape[0]
    vacuum: FockState = {(0,) * n_modes: 1.0}
    # ordered expansion of (sum_i G[i,k] b_i^dag)(sum_j G[j,l] b_j^dag)|0>
    state: FockState = {}
    for i in range(n_modes):
        for j in range(n_modes):
            _add(state, _create(_create(vacuum, j, G[j, l]), i, G[i, k]))
    if k == l:
        state = {occ: amp / math.sqrt(2) for occ, amp in state.items()}
    return state


def _to_configs(state: FockState) -> dict[Config, complex]:
    out: dict[Config, complex] = {}
    for occ, amp in state.items():
        config = tuple(m for m, c in enumerate(occ) for _ in range(c))
        out[config] = out.get(config, 0) + amp
    return out


def brute_force_distribution(G: np.ndarray, inp: TwoPhotonInput) -> EventDistribution:
    """Independent oracle for :func:`evolve_two_photon`.

    Applies creation operators one at a time to explicit occupation-number
    states, so no permanent or symmetrisation formula is involved.
    """
    G = _check_orthogonal(G)
    if isinstance(inp, PhotonPair):
        pairs = [(1.0, inp)]
    elif isinstance(inp, LogicalSuperposition):
        pairs = inp.terms()
    else:
        raise InvalidArgument(f"unsupported input {inp!r}")
    total: FockState = {}
    for coeff, pair in pairs:
        part = _brute_force_pair(G, pair.k, pair.l)
        _add(total, {occ: coeff * amp for occ, amp in part.items()})
    return EventDistribution(_to_configs(total))
