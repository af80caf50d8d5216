"""Angle synthesis for the staged network.

Two routes:

* 50:50 regime.  Every splitter has ``cos = 1/sqrt(2)`` and only the sign of
  ``sin`` is free, so there are 4096 candidate networks.  They are scanned
  exhaustively and compared against a target, and separately checked against
  the published sign-condition systems for CNOT and SWAP.
* Continuous regime.  Multi-start coordinate descent over all twelve angles.
  The residual is a degree-2 trigonometric polynomial in each single angle,
  so each coordinate step is an exact one-dimensional minimisation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import bsnet
from .bsnet import N_SPLITTERS, AngleVector, closed_form_block, transfer_matrices
from .errors import InvalidArgument
from .occsim import BLOCK_SCALE, MATCH_TOL, GateTarget

INV_SQRT2 = 1 / math.sqrt(2)


@dataclass(frozen=True)
class SignAssignment:
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        s = tuple(int(x) for x in self.signs)
        if len(s) != N_SPLITTERS or any(x not in (1, -1) for x in s):
            raise InvalidArgument("a sign assignment is twelve values in {+1, -1}")
        object.__setattr__(self, "signs", s)

    def sign(self, i: int) -> int:
        """Sign of ``sin(theta_i)`` (1-based)."""
        return self.signs[i - 1]

    def sines(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=float) * INV_SQRT2

    def angles(self) -> AngleVector:
        return AngleVector.from_signs(self.signs)

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


@dataclass(frozen=True)
class Constraint:
    """``prod_{i in indices} sin(theta_i) == constant`` (1-based indices)."""

    indices: tuple[int, ...]
    constant: float

    def __post_init__(self) -> None:
        allowed = (INV_SQRT2, 0.5, 1 / math.sqrt(8))
        if not any(math.isclose(abs(self.constant), a, rel_tol=0, abs_tol=1e-15) for a in allowed):
            raise InvalidArgument(f"constraint constant {self.constant!r} not in +-1/sqrt2, +-1/2, +-1/sqrt8")
        if any(not 1 <= i <= N_SPLITTERS for i in self.indices):
            raise InvalidArgument("constraint indices must lie in 1..12")


@dataclass(frozen=True)
class ConditionSet:
    gate: str
    constraints: tuple[Constraint, ...]


def _eq(indices: Sequence[int], constant: float) -> list[Constraint]:
    return [Constraint(tuple(indices), constant)]


def _each(indices: Sequence[int], constant: float) -> list[Constraint]:
    return [Constraint((i,), constant) for i in indices]


_R2, _R8 = math.sqrt(2), math.sqrt(8)

CNOT_CONDITIONS = ConditionSet("CNOT", tuple(
    _each((1, 3, 6, 9), -1 / _R2)
    + _each((5, 7, 10), 1 / _R2)
    + _eq((2, 11), 0.5)
    + _eq((4, 12), -0.5)
    + _eq((4, 8, 11), -1 / _R8)
    + _eq((2, 8, 12), 1 / _R8)
))

SWAP_CONDITIONS = ConditionSet("SWAP", tuple(
    _each((6, 9), -1 / _R2)
    + _each((1, 3, 5, 7, 10), 1 / _R2)
    + _eq((4, 12), -0.5)
    + _eq((2, 11), -0.5)
    + _eq((4, 8, 11), -1 / _R8)
    + _eq((2, 8, 12), -1 / _R8)
))

CONDITION_SETS = {"CNOT": CNOT_CONDITIONS, "SWAP": SWAP_CONDITIONS}

# one completion of each published condition system (free signs set to +1 where possible)
CNOT_SIGNS = SignAssignment((-1, 1, -1, -1, 1, -1, 1, 1, -1, 1, 1, 1))
SWAP_SIGNS = SignAssignment((1, 1, 1, 1, 1, -1, 1, 1, -1, 1, -1, -1))


def check_conditions(signs: SignAssignment, conditions: ConditionSet, tol: float = MATCH_TOL) -> bool:
    sines = signs.sines()
    for c in conditions.constraints:
        value = float(np.prod([sines[i - 1] for i in c.indices]))
        if abs(value - c.constant) >= tol:
            return False
    return True


def all_sign_assignments() -> list[SignAssignment]:
    """All 4096 assignments in lexicographic order with ``+1`` before ``-1``."""
    return [SignAssignment(s) for s in itertools.product((1, -1), repeat=N_SPLITTERS)]


def _sign_array() -> np.ndarray:
    return np.array(list(itertools.product((1, -1), repeat=N_SPLITTERS)), dtype=float)


def enumerate_sign_solutions(target: GateTarget | np.ndarray, tol: float = MATCH_TOL) -> list[SignAssignment]:
    """Every 50:50 sign assignment whose composed block matches ``target``."""
    matrix = target.matrix if isinstance(target, GateTarget) else np.asarray(target, dtype=float)
    if matrix.shape != (4, 4) or not np.all(np.isfinite(matrix)):
        raise InvalidArgument("target must be a finite 4x4 matrix")
    signs = _sign_array()
    blocks = transfer_matrices(signs * (math.pi / 4))[:, :4, :4]
    residual = np.max(np.abs(BLOCK_SCALE * blocks - matrix), axis=(1, 2))
    return [SignAssignment(tuple(int(x) for x in row)) for row in signs[residual < tol]]


def condition_solutions(conditions: ConditionSet) -> list[SignAssignment]:
    return [s for s in all_sign_assignments() if check_conditions(s, conditions)]


def block_residual(signs: SignAssignment, target: GateTarget) -> float:
    """Re-verify one assignment through the single-network path of :mod:`bsnet`."""
    block = bsnet.compose(signs.angles())[:4, :4]
    return float(np.max(np.abs(BLOCK_SCALE * block - target.matrix)))


@dataclass
class CrossCheck:
    """Relationship between the exhaustive solution set and a condition system."""

    target: str
    conditions: str
    enumerated: list[SignAssignment]
    from_conditions: list[SignAssignment]
    relation: str
    matches_other: str | None = None

    @property
    def consistent(self) -> bool:
        return self.relation == "match"

    @property
    def diagnostic(self) -> str:
        if self.consistent:
            return f"{self.target}: enumeration equals the {self.conditions} condition set"
        msg = (
            f"{self.target}: enumeration ({len(self.enumerated)}) vs {self.conditions} "
            f"conditions ({len(self.from_conditions)}): {self.relation}"
        )
        if self.matches_other:
            msg += f"; enumeration equals the {self.matches_other} condition set instead"
        return msg


def _relation(a: set, b: set) -> str:
    if a == b:
        return "match"
    if not a & b:
        return "disjoint"
    if a < b:
        return "enumeration-subset"
    if a > b:
        return "enumeration-superset"
    return "partial-overlap"


def cross_check(target: GateTarget, conditions: ConditionSet | None = None) -> CrossCheck:
    """Compare exhaustive solutions for ``target`` with a published condition set.

    Discrepancies are reported, not raised.  When the enumeration coincides
    with a different condition set, that set is named.
    """
    if conditions is None:
        conditions = CONDITION_SETS.get(target.name.upper())
    enumerated = enumerate_sign_solutions(target)
    found = condition_solutions(conditions) if conditions else []
    rel = _relation(set(enumerated), set(found)) if conditions else "no-conditions"
    other = None
    if rel != "match":
        e = set(enumerated)
        for name, cs in CONDITION_SETS.items():
            if cs is not conditions and e and e == set(condition_solutions(cs)):
                other = name
    return CrossCheck(target.name, conditions.gate if conditions else "-", enumerated, found, rel, other)


# -- continuous search ----------------------------------------------------------


@dataclass
class SearchResult:
    angles: AngleVector
    residual: float
    converged: bool
    history: list[float] = field(default_factory=list)


def _residual(theta: np.ndarray, target: np.ndarray) -> float:
    block = closed_form_block(AngleVector(tuple(theta)))
    return float(np.linalg.norm(BLOCK_SCALE * block - target))


_PROBE = np.arange(5) * (2 * np.pi / 5)
_GRID = np.linspace(0, 2 * np.pi, 256, endpoint=False)


def _coordinate_min(theta: np.ndarray, i: int, target: np.ndarray) -> None:
    """Exact minimisation of the squared residual over ``theta[i]`` in place.

    Each block entry contains at most one factor of ``cos(theta_i)`` or
    ``sin(theta_i)``, so the squared residual is ``f0 + f1 cos + g1 sin +
    f2 cos2 + g2 sin2`` and five samples determine it.
    """
    vals = np.empty(5)
    for j, t in enumerate(_PROBE):
        theta[i] = t
        vals[j] = _residual(theta, target) ** 2
    f0 = vals.mean()
    f1 = 2 * np.mean(vals * np.cos(_PROBE))
    g1 = 2 * np.mean(vals * np.sin(_PROBE))
    f2 = 2 * np.mean(vals * np.cos(2 * _PROBE))
    g2 = 2 * np.mean(vals * np.sin(2 * _PROBE))

    def f(t):
        return f0 + f1 * np.cos(t) + g1 * np.sin(t) + f2 * np.cos(2 * t) + g2 * np.sin(2 * t)

    t = _GRID[np.argmin(f(_GRID))]
    for _ in range(30):
        d1 = -f1 * np.sin(t) + g1 * np.cos(t) - 2 * f2 * np.sin(2 * t) + 2 * g2 * np.cos(2 * t)
        d2 = -f1 * np.cos(t) - g1 * np.sin(t) - 4 * f2 * np.cos(2 * t) - 4 * g2 * np.sin(2 * t)
        if d2 <= 0:
            break
        step = d1 / d2
        t -= step
        if abs(step) < 1e-15:
            break
    theta[i] = t % (2 * np.pi)


def _pattern_move(theta: np.ndarray, step: np.ndarray, target: np.ndarray) -> float:
    """Extrapolate along the last sweep's displacement; updates ``theta`` in place.

    Coordinate sweeps zig-zag along curved valleys of the residual; a line
    search along the net displacement of a sweep cuts across them.
    """
    base = _residual(theta, target)
    if not np.any(step):
        return base
    best_t, best_r = 0.0, base
    t = 1.0
    while t < 1e6:
        r = _residual(theta + t * step, target)
        if r >= best_r:
            break
        best_t, best_r = t, r
        t *= 2
    if best_t:
        # golden-section refinement on [best_t / 2, 2 * best_t]
        lo, hi = best_t / 2, best_t * 2
        g = (math.sqrt(5) - 1) / 2
        x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
        r1, r2 = _residual(theta + x1 * step, target), _residual(theta + x2 * step, target)
        for _ in range(40):
            if r1 < r2:
                hi, x2, r2 = x2, x1, r1
                x1 = hi - g * (hi - lo)
                r1 = _residual(theta + x1 * step, target)
            else:
                lo, x1, r1 = x1, x2, r2
                x2 = lo + g * (hi - lo)
                r2 = _residual(theta + x2 * step, target)
        for t, r in ((x1, r1), (x2, r2)):
            if r < best_r:
                best_t, best_r = t, r
        theta += best_t * step
        theta %= 2 * np.pi
    return best_r


def continuous_angle_search(
    target: np.ndarray | GateTarget,
    tolerance: float = 1e-6,
    restarts: int = 16,
    seed: int = 0,
    max_sweeps: int = 200,
) -> SearchResult:
    """Multi-start coordinate descent on ``||sqrt(2) * block(theta) - target||_F``.

    ``history`` holds the best residual seen after each restart and is
    non-increasing.  The search stops early once a restart reaches
    ``tolerance``.
    """
    matrix = target.matrix if isinstance(target, GateTarget) else np.asarray(target, dtype=float)
    if matrix.shape != (4, 4):
        raise InvalidArgument(f"target must be 4x4, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgument("target entries must be finite")
    if not tolerance > 0:
        raise InvalidArgument("tolerance must be positive")
    if restarts < 1:
        raise InvalidArgument("need at least one restart")

    rng = np.random.default_rng(seed)
    best_theta: np.ndarray | None = None
    best = math.inf
    history: list[float] = []
    for _ in range(restarts):
        theta = rng.uniform(0, 2 * np.pi, N_SPLITTERS)
        current = _residual(theta, matrix)
        for _ in range(max_sweeps):
            before = theta.copy()
            for i in range(N_SPLITTERS):
                _coordinate_min(theta, i, matrix)
            new = _pattern_move(theta, theta - before, matrix)
            if new < tolerance or current - new < 1e-15:
                current = new
                break
            current = new
        if current < best:
            best, best_theta = current, theta.copy()
        history.append(best)
        if best < tolerance:
            break
    return SearchResult(AngleVector(tuple(best_theta)), best, best < tolerance, history)
