"""Postselected two-photon gates in an 8-mode, 12 beam-splitter network."""

from .anglesolve import (
    CNOT_CONDITIONS,
    CNOT_SIGNS,
    SWAP_CONDITIONS,
    SWAP_SIGNS,
    SignAssignment,
    check_conditions,
    continuous_angle_search,
    cross_check,
    enumerate_sign_solutions,
)
from .bsnet import (
    AngleVector,
    BeamSplitterOp,
    BlockDecomposition,
    StagedNetwork,
    block_decompose,
    closed_form_block,
    compose,
    rotation_pair,
    staged_network,
    transfer_matrix,
)
from .errors import ConsistencyError, InvalidArgument, NotRepresentable, UnsupportedSize
from .focksim import (
    EventDistribution,
    LogicalSuperposition,
    PhotonPair,
    brute_force_distribution,
    evolve_two_photon,
    permanent,
)
from .occsim import (
    A_CNOT,
    A_SWAP,
    CNOT,
    SWAP,
    GateTarget,
    LogicalState,
    OccupationVector,
    apply_occupation,
    block_matches_target,
    decode_occupation,
    encode_logical,
    reference_gate,
)
from .postselect import GateReport, PostselectionRule, apply_postselection, gate_report

__version__ = "0.1.0"
