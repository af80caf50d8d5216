"""Three-stage, 12 beam-splitter network on 8 optical modes.

The network mixes input annihilation operators ``a_0..a_7`` into output
operators ``b_0..b_7`` through three stages of four beam splitters each,
``b = G a``.  Every beam splitter is a real rotation acting on two mode
lines.  The splitters act in place on eight physical lines; after the third
stage the output ``b_k`` sits on line ``OUTPUT_LINES[k]``.

Wiring (splitter index -> lines, 1-based splitter numbering)::

    stage 1:  1:(0,4)  2:(1,5)  3:(2,6)  4:(3,7)
    stage 2:  5:(0,2)  6:(1,3)  7:(4,6)  8:(5,7)
    stage 3:  9:(0,1) 10:(2,3) 11:(4,5) 12:(6,7)

After stage 2 the lines carry ``c0 c1 c4 c5 c2 c3 c6 c7`` and after stage 3
they carry ``b0 b4 b1 b5 b2 b6 b3 b7``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, InvalidArgument

MODE_COUNT = 8
N_SPLITTERS = 12

# (line_a, line_b) for splitters 1..12, in application order
WIRING: tuple[tuple[int, int], ...] = (
    (0, 4), (1, 5), (2, 6), (3, 7),
    (0, 2), (1, 3), (4, 6), (5, 7),
    (0, 1), (2, 3), (4, 5), (6, 7),
)
STAGES: tuple[tuple[int, ...], ...] = ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))
# OUTPUT_LINES[k] is the physical line holding b_k after the last stage
OUTPUT_LINES: tuple[int, ...] = (0, 2, 4, 6, 1, 3, 5, 7)

EXACT_TOL = 1e-12
ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class AngleVector:
    """The twelve splitter angles in radians.

    ``theta[0]`` is the angle of splitter 1; use :meth:`angle` for the
    1-based lookup that matches the splitter numbering.
    """

    theta: tuple[float, ...]

    def __post_init__(self) -> None:
        theta = tuple(float(t) for t in self.theta)
        if len(theta) != N_SPLITTERS:
            raise InvalidArgument(f"expected {N_SPLITTERS} angles, got {len(theta)}")
        if not all(math.isfinite(t) for t in theta):
            raise InvalidArgument("angles must be finite")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def zeros(cls) -> AngleVector:
        return cls((0.0,) * N_SPLITTERS)

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> AngleVector:
        """50:50 splitters with ``cos = 1/sqrt(2)`` and ``sin = sign/sqrt(2)``."""
        if len(signs) != N_SPLITTERS or any(s not in (1, -1) for s in signs):
            raise InvalidArgument("signs must be twelve values in {+1, -1}")
        return cls(tuple(s * math.pi / 4 for s in signs))

    def angle(self, i: int) -> float:
        """Angle of splitter ``i`` (1-based)."""
        if not 1 <= i <= N_SPLITTERS:
            raise IndexError(i)
        return self.theta[i - 1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.theta, dtype=float)


@dataclass(frozen=True)
class BeamSplitterOp:
    """A splitter acting in place on two lines.

    ``line_a`` receives ``cos*a + sin*b`` and ``line_b`` receives
    ``-sin*a + cos*b``.
    """

    line_a: int
    line_b: int
    theta: float

    def __post_init__(self) -> None:
        if self.line_a == self.line_b:
            raise InvalidArgument("beam splitter lines must differ")
        for line in (self.line_a, self.line_b):
            if not 0 <= line < MODE_COUNT:
                raise InvalidArgument(f"line {line} outside [0, {MODE_COUNT})")
        if not math.isfinite(self.theta):
            raise InvalidArgument("theta must be finite")

    def matrix(self, n: int = MODE_COUNT) -> np.ndarray:
        """The ``n x n`` embedding of the 2x2 rotation."""
        m = np.eye(n)
        rot = rotation_pair(self.theta)
        idx = [self.line_a, self.line_b]
        m[np.ix_(idx, idx)] = rot
        return m


@dataclass(frozen=True)
class StagedNetwork:
    ops: tuple[BeamSplitterOp, ...]
    output_lines: tuple[int, ...] = OUTPUT_LINES
    mode_count: int = MODE_COUNT

    def stages(self) -> list[tuple[BeamSplitterOp, ...]]:
        return [tuple(self.ops[i] for i in stage) for stage in STAGES]


@dataclass(frozen=True)
class BlockDecomposition:
    """Quadrants of ``G = [[A, B], [C, E]]`` and the orthogonality residuals."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    E: np.ndarray
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def rotation_pair(theta: float) -> np.ndarray:
    """Return ``[[cos, sin], [-sin, cos]]`` for a single beam splitter."""
    if not math.isfinite(theta):
        raise InvalidArgument("theta must be finite")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def staged_network(angles: AngleVector) -> StagedNetwork:
    ops = tuple(
        BeamSplitterOp(a, b, t) for (a, b), t in zip(WIRING, angles.theta)
    )
    return StagedNetwork(ops)


def _readout(n: int, output_lines: Sequence[int]) -> np.ndarray:
    p = np.zeros((n, n))
    p[np.arange(n), list(output_lines)] = 1.0
    return p


def transfer_matrix(network: StagedNetwork) -> np.ndarray:
    """Compose the network into the 8x8 matrix ``G`` with ``b = G a``."""
    lines = np.eye(network.mode_count)
    for op in network.ops:
        c, s = math.cos(op.theta), math.sin(op.theta)
        ra, rb = lines[op.line_a].copy(), lines[op.line_b].copy()
        lines[op.line_a] = c * ra + s * rb
        lines[op.line_b] = -s * ra + c * rb
    return lines[list(network.output_lines)]


def compose(angles: AngleVector) -> np.ndarray:
    """Shorthand for ``transfer_matrix(staged_network(angles))``."""
    return transfer_matrix(staged_network(angles))


def transfer_matrices(thetas: np.ndarray) -> np.ndarray:
    """Batched composition: ``thetas`` of shape ``(k, 12)`` -> ``(k, 8, 8)``.

    Uses the same wiring as :func:`staged_network`; intended for exhaustive
    scans where building thousands of networks one by one is wasteful.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    if thetas.shape[1] != N_SPLITTERS:
        raise InvalidArgument(f"expected shape (k, {N_SPLITTERS}), got {thetas.shape}")
    if not np.all(np.isfinite(thetas)):
        raise InvalidArgument("angles must be finite")
    k = thetas.shape[0]
    lines = np.broadcast_to(np.eye(MODE_COUNT), (k, MODE_COUNT, MODE_COUNT)).copy()
    cos, sin = np.cos(thetas), np.sin(thetas)
    for j, (a, b) in enumerate(WIRING):
        c = cos[:, j, None]
        s = sin[:, j, None]
        ra, rb = lines[:, a].copy(), lines[:, b].copy()
        lines[:, a] = c * ra + s * rb
        lines[:, b] = -s * ra + c * rb
    return lines[:, list(OUTPUT_LINES)]


def closed_form_block(angles: AngleVector) -> np.ndarray:
    """Upper-left 4x4 block of ``G`` from explicit trigonometric products.

    Row ``i`` gives the coefficients of ``a_0..a_3`` in ``b_i``.  This does
    not touch :func:`transfer_matrix` and serves as its cross-check.
    """
    t = (None,) + angles.theta  # 1-based
    c = [None] + [math.cos(x) for x in t[1:]]
    s = [None] + [math.sin(x) for x in t[1:]]
    return np.array([
        [c[9] * c[5] * c[1], s[9] * c[6] * c[2], c[9] * s[5] * c[3], s[9] * s[6] * c[4]],
        [-s[5] * c[1] * c[10], -s[6] * c[2] * s[10], c[5] * c[3] * c[10], c[6] * c[4] * s[10]],
        [-c[7] * s[1] * c[11], -c[8] * s[2] * s[11], -s[7] * s[3] * c[11], -s[8] * s[4] * s[11]],
        [s[7] * s[1] * c[12], s[8] * s[2] * s[12], -c[7] * s[3] * c[12], -c[8] * s[4] * s[12]],
    ])


def orthogonality_residual(G: np.ndarray) -> float:
    """``max |G G^T - I|``."""
    G = np.asarray(G)
    return float(np.max(np.abs(G @ G.conj().T - np.eye(G.shape[0]))))


def block_decompose(G: np.ndarray, tol: float = ORTHO_TOL) -> BlockDecomposition:
    """Split an orthogonal 8x8 matrix into quadrants and check the block identities.

    Raises:
        ConsistencyError: if ``G`` is not orthogonal to within ``tol``.
    """
    G = np.asarray(G, dtype=float)
    if G.shape != (MODE_COUNT, MODE_COUNT):
        raise InvalidArgument(f"expected an 8x8 matrix, got {G.shape}")
    if orthogonality_residual(G) >= tol:
        raise ConsistencyError("transfer matrix is not orthogonal")
    h = MODE_COUNT // 2
    A, B, C, E = G[:h, :h], G[:h, h:], G[h:, :h], G[h:, h:]
    eye, zero = np.eye(h), np.zeros((h, h))

    def res(m: np.ndarray, ref: np.ndarray) -> float:
        return float(np.max(np.abs(m - ref)))

    residuals = {
        "AAt+BBt=I": res(A @ A.T + B @ B.T, eye),
        "CCt+EEt=I": res(C @ C.T + E @ E.T, eye),
        "ACt+BEt=0": res(A @ C.T + B @ E.T, zero),
        "CAt+EBt=0": res(C @ A.T + E @ B.T, zero),
    }
    return BlockDecomposition(A.copy(), B.copy(), C.copy(), E.copy(), residuals)


def random_angles(rng: np.random.Generator, count: int) -> list[AngleVector]:
    """Uniform angles in ``[0, 2*pi)``; used by tests and the acceptance run."""
    return [AngleVector(tuple(row)) for row in rng.uniform(0, 2 * np.pi, (count, N_SPLITTERS))]


def column_survival(G: np.ndarray, modes: Iterable[int] = range(4)) -> np.ndarray:
    """Probability that a lone photon injected into each input column exits in ``modes``."""
    rows = list(modes)
    return np.sum(np.abs(np.asarray(G)[rows]) ** 2, axis=0)
