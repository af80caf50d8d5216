"""Occupation-vector gate semantics for two dual-rail photons.

A logical two-qubit basis state is carried by two photons, one per
dual-rail pair: modes (0, 1) hold the control qubit and modes (2, 3) the
target qubit.  An occupation vector records which rail of each pair is
lit, with signs tracking relative phase.  A 4x4 real gate target acts on
these vectors by plain matrix multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import InvalidArgument, NotRepresentable

MATCH_TOL = 1e-12
# block entries are +-1/sqrt(8) where targets are +-1/2
BLOCK_SCALE = math.sqrt(2.0)


class LogicalState(NamedTuple):
    control: int
    target: int

    @classmethod
    def parse(cls, label: str) -> LogicalState:
        if len(label) != 2 or any(ch not in "01" for ch in label):
            raise InvalidArgument(f"logical label must be two bits, got {label!r}")
        return cls(int(label[0]), int(label[1]))

    @property
    def label(self) -> str:
        return f"{self.control}{self.target}"


BASIS: tuple[LogicalState, ...] = tuple(LogicalState(c, t) for c in (0, 1) for t in (0, 1))


@dataclass(frozen=True)
class OccupationVector:
    entries: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        e = tuple(self.entries)
        if len(e) != 4 or any(x not in (-1, 0, 1) for x in e):
            raise InvalidArgument(f"occupation entries must be four values in {{-1, 0, 1}}, got {e}")
        if sum(1 for x in e[:2] if x) != 1 or sum(1 for x in e[2:] if x) != 1:
            raise InvalidArgument(f"need exactly one photon per rail pair, got {e}")
        object.__setattr__(self, "entries", tuple(int(x) for x in e))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


@dataclass(frozen=True)
class GateTarget:
    name: str
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise InvalidArgument(f"gate target must be 4x4, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidArgument("gate target entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


A_CNOT = 0.5 * np.array([
    [1, -1, 1, 1],
    [-1, 1, 1, 1],
    [-1, 1, -1, 1],
    [1, -1, -1, 1],
], dtype=float)

A_SWAP = 0.5 * np.array([
    [1, -1, 1, 1],
    [-1, 1, 1, 1],
    [1, -1, 1, 1],
    [-1, 1, 1, 1],
], dtype=float)

CNOT = GateTarget("CNOT", A_CNOT)
SWAP = GateTarget("SWAP", A_SWAP)


def target_by_name(name: str) -> GateTarget:
    try:
        return {"cnot": CNOT, "swap": SWAP}[name.lower()]
    except KeyError:
        raise InvalidArgument(f"unknown gate {name!r}") from None


def encode_logical(state: LogicalState) -> OccupationVector:
    c, t = state
    if c not in (0, 1) or t not in (0, 1):
        raise InvalidArgument(f"bits must be 0 or 1, got {state}")
    e = [0, 0, 0, 0]
    e[c] = 1
    e[2 + t] = 1
    return OccupationVector(tuple(e))


def apply_occupation(target: GateTarget | np.ndarray, v: OccupationVector) -> OccupationVector:
    """Multiply an occupation vector by the target matrix.

    Raises:
        NotRepresentable: the product is not a signed one-photon-per-pair vector.
    """
    m = target.matrix if isinstance(target, GateTarget) else np.asarray(target, dtype=float)
    out = m @ v.as_array()
    rounded = np.rint(out)
    if np.max(np.abs(out - rounded)) > MATCH_TOL:
        raise NotRepresentable(f"output {out.tolist()} has non-integer entries")
    try:
        return OccupationVector(tuple(int(x) for x in rounded))
    except InvalidArgument as exc:
        raise NotRepresentable(str(exc)) from None


def decode_occupation(v: OccupationVector) -> tuple[LogicalState, int]:
    """Return the logical state and the sign (product of the two nonzero entries)."""
    if not isinstance(v, OccupationVector):
        v = OccupationVector(tuple(v))
    e = v.entries
    control = 0 if e[0] else 1
    target = 0 if e[2] else 1
    sign = e[control] * e[2 + target]
    return LogicalState(control, target), sign


def reference_gate(state: LogicalState, gate: Literal["CNOT", "SWAP"]) -> LogicalState:
    c, t = state
    g = gate.upper()
    if g == "CNOT":
        return LogicalState(c, t ^ c)
    if g == "SWAP":
        return LogicalState(t, c)
    raise InvalidArgument(f"no reference truth table for {gate!r}")


def block_matches_target(block: np.ndarray, target: GateTarget) -> float:
    """``max |sqrt(2) * block - target|``; below ``MATCH_TOL`` counts as a match."""
    block = np.asarray(block, dtype=float)
    if block.shape != (4, 4):
        raise InvalidArgument(f"block must be 4x4, got {block.shape}")
    return float(np.max(np.abs(BLOCK_SCALE * block - target.matrix)))


def occupation_truth_table(
    target: GateTarget | np.ndarray,
) -> dict[LogicalState, tuple[LogicalState, int] | None]:
    """Decoded output and sign for each logical basis input (``None`` if not representable)."""
    table: dict[LogicalState, tuple[LogicalState, int] | None] = {}
    for state in BASIS:
        try:
            table[state] = decode_occupation(apply_occupation(target, encode_logical(state)))
        except NotRepresentable:
            table[state] = None
    return table


def non_orthogonality(matrix: np.ndarray) -> float:
    m = np.asarray(matrix, dtype=float)
    return float(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))))
