import math

import numpy as np
import pytest

from multiport import bsnet, occsim
from multiport.errors import InvalidArgument
from multiport.focksim import EventDistribution, PhotonPair, brute_force_distribution
from multiport.occsim import CNOT, SWAP, GateTarget
from multiport.postselect import (
    PostselectionRule,
    apply_postselection,
    bosonic_row,
    classify,
    gate_report,
)

H = 1 / math.sqrt(2)


def test_all_mass_retained():
    dist = EventDistribution({(0, 2): 1.0})
    kept, p = apply_postselection(dist)
    assert p == 1.0
    assert kept.amplitudes == {(0, 2): 1.0}


def test_half_mass_retained():
    dist = EventDistribution({(0, 4): H, (1, 2): H})
    kept, p = apply_postselection(dist)
    assert p == pytest.approx(0.5, abs=1e-15)
    assert kept.probabilities == pytest.approx({(1, 2): 1.0})


def test_empty_retained_set():
    kept, p = apply_postselection(EventDistribution({(4, 5): 1.0}))
    assert p == 0.0 and kept.amplitudes == {}


def test_one_per_pair_flag():
    dist = EventDistribution({(0, 1): 0.5, (0, 0): 0.5, (1, 3): 0.5, (2, 3): 0.5})
    kept, p = apply_postselection(dist, PostselectionRule(require_one_per_pair=True))
    assert set(kept.amplitudes) == {(1, 3)}
    assert p == pytest.approx(0.25)


def test_rule_validation():
    with pytest.raises(InvalidArgument):
        PostselectionRule(frozenset({8}))


def test_success_is_raw_mass_and_idempotent(rng):
    G = bsnet.compose(bsnet.random_angles(rng, 1)[0])
    dist = brute_force_distribution(G, PhotonPair(1, 3))
    kept, p = apply_postselection(dist)
    assert p == pytest.approx(sum(v for c, v in dist.probabilities.items() if max(c) < 4), abs=1e-15)
    again, p2 = apply_postselection(kept)
    assert p2 == pytest.approx(1.0, abs=1e-12)
    assert again.max_difference(kept) < 1e-12


def test_condition_network_retention(cnot_condition_G):
    _, p = apply_postselection(brute_force_distribution(cnot_condition_G, PhotonPair(1, 2)))
    assert p == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("config, kind", [((0, 2), "coincidence"), ((1, 1), "bunched"), ((2, 3), "cross_pair"), ((0, 1), "cross_pair")])
def test_classify(config, kind):
    assert classify(config) == kind


def test_report_cnot_occupation(cnot_block_G):
    rep = gate_report(cnot_block_G, CNOT, semantics="occupation")
    assert rep.bosonic is None
    occ = rep.occupation
    assert occ.truth_table_match
    assert [r.dominant for r in occ.rows] == ["00", "01", "11", "10"]
    assert [r.phase_sign for r in occ.rows] == [-1, 1, -1, 1]
    assert occ.mean_success == pytest.approx(0.25, abs=1e-12)


def test_report_swap_matrix_network(swap_block_G):
    rep = gate_report(swap_block_G, SWAP, semantics="occupation")
    assert rep.block_residual < 1e-12
    assert [r.phase_sign for r in rep.occupation.rows] == [1, 1, 1, 1]
    # decoded table is the one carried by the SWAP matrix, which is not a SWAP
    assert [r.dominant for r in rep.occupation.rows] == ["00", "00", "11", "11"]
    assert not rep.occupation.truth_table_match


def test_report_mismatch_is_not_an_exception(cnot_condition_G):
    rep = gate_report(cnot_condition_G, CNOT, semantics="occupation")
    assert rep.block_residual == pytest.approx(1.0)
    assert not rep.occupation.truth_table_match


def test_report_bosonic(cnot_condition_G, swap_condition_G):
    for G in (cnot_condition_G, swap_condition_G):
        rep = gate_report(G, CNOT, semantics="bosonic")
        for row in rep.bosonic.rows:
            assert row.retained_probability == pytest.approx(0.25, abs=1e-12)
            total = sum(row.outcomes.values()) + row.bunched_fraction + row.cross_pair_fraction
            assert total == pytest.approx(1.0, abs=1e-12)
            assert sum(row.outcomes.values()) <= 1 + 1e-12


def test_report_bosonic_one_per_pair(cnot_block_G):
    rule = PostselectionRule(require_one_per_pair=True)
    rep = gate_report(cnot_block_G, CNOT, rule, semantics="bosonic")
    for row in rep.bosonic.rows:
        assert sum(row.outcomes.values()) == pytest.approx(1.0, abs=1e-12)
        assert row.bunched_fraction == 0.0 and row.cross_pair_fraction == 0.0


def test_report_both_and_bad_semantics(cnot_block_G):
    rep = gate_report(cnot_block_G, CNOT)
    assert len(rep.sections) == 2
    with pytest.raises(InvalidArgument):
        gate_report(cnot_block_G, CNOT, semantics="classical")


def test_custom_target_uses_own_table():
    G = bsnet.compose(bsnet.AngleVector.zeros())
    target = GateTarget("custom", occsim.BLOCK_SCALE * G[:4, :4])
    rep = gate_report(G, target, semantics="occupation")
    # block maps the encoded inputs outside the occupation basis
    assert not any(r.representable for r in rep.occupation.rows)
    assert not rep.occupation.truth_table_match


def test_bosonic_row_zero_retention(swap_block_G):
    from multiport.focksim import LogicalSuperposition

    # the two control-rail columns of the A_SWAP block cancel exactly
    row = bosonic_row(swap_block_G, LogicalSuperposition((H, 0, H, 0)), "plus")
    assert row.retained_probability == 0.0
    assert row.outcomes == {}
