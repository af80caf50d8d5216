"""Exit criteria for the build, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".  Tolerances are fixed here.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from multiport import anglesolve, bsnet, cli, focksim, occsim
from multiport.focksim import LOGICAL_INJECTIONS, PhotonPair
from multiport.occsim import BASIS, CNOT, SWAP
from multiport.postselect import PostselectionRule, apply_postselection, gate_report

EXACT = 1e-12
SEARCH_TOL = 1e-6
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="module")
def random_angles():
    return bsnet.random_angles(np.random.default_rng(123456789), 100)


@pytest.fixture(scope="module")
def gate_networks():
    """Networks from the published CNOT and SWAP sign conditions."""
    return {
        "CNOT": bsnet.compose(anglesolve.CNOT_SIGNS.angles()),
        "SWAP": bsnet.compose(anglesolve.SWAP_SIGNS.angles()),
    }


def test_network_validity(random_angles, record):
    t0 = time.perf_counter()
    ortho = blocks = 0.0
    for angles in random_angles:
        G = bsnet.compose(angles)
        ortho = max(ortho, bsnet.orthogonality_residual(G))
        blocks = max(blocks, bsnet.block_decompose(G).max_residual)
    elapsed = time.perf_counter() - t0
    ok = ortho < EXACT and blocks < EXACT and elapsed < 1.0
    assert record("network_validity", ok, f"max|GGt-I|={ortho:.2e} max block residual={blocks:.2e} time={elapsed:.3f}s")


def test_closed_form_oracle(random_angles, record):
    worst = max(
        float(np.abs(bsnet.closed_form_block(a) - bsnet.compose(a)[:4, :4]).max()) for a in random_angles
    )
    assert record("closed_form_oracle", worst < EXACT, f"max entry diff={worst:.2e}")


def test_block_realization(gate_networks, record):
    r_cnot = occsim.block_matches_target(gate_networks["CNOT"][:4, :4], CNOT)
    r_swap = occsim.block_matches_target(gate_networks["SWAP"][:4, :4], SWAP)
    crossed = (
        occsim.block_matches_target(gate_networks["CNOT"][:4, :4], SWAP),
        occsim.block_matches_target(gate_networks["SWAP"][:4, :4], CNOT),
    )
    ok = r_cnot < EXACT and r_swap < EXACT
    detail = (
        f"CNOT-condition signs vs A_CNOT residual={r_cnot:.2e}, SWAP-condition signs vs A_SWAP residual={r_swap:.2e}"
        f" (crossed pairing: {crossed[0]:.2e}, {crossed[1]:.2e})"
    )
    assert record("block_realization", ok, detail)


CNOT_ACTION = [((1, 0, 1, 0), (1, 0, -1, 0)), ((1, 0, 0, 1), (1, 0, 0, 1)),
               ((0, 1, 1, 0), (0, 1, 0, -1)), ((0, 1, 0, 1), (0, 1, 1, 0))]
SWAP_ACTION = [((1, 0, 1, 0), (1, 0, 1, 0)), ((1, 0, 0, 1), (1, 0, 1, 0)),
               ((0, 1, 1, 0), (0, 1, 0, 1)), ((0, 1, 0, 1), (0, 1, 0, 1))]


@pytest.mark.parametrize(
    "target, action, signs",
    [(CNOT, CNOT_ACTION, [-1, 1, -1, 1]), (SWAP, SWAP_ACTION, [1, 1, 1, 1])],
    ids=["CNOT", "SWAP"],
)
def test_occupation_truth_tables(target, action, signs, record):
    mapped = all(
        occsim.apply_occupation(target, occsim.OccupationVector(vin)).entries == vout for vin, vout in action
    )
    decoded = [occsim.decode_occupation(occsim.apply_occupation(target, occsim.encode_logical(s))) for s in BASIS]
    sign_ok = [sg for _, sg in decoded] == signs
    bits = {s.label: out.label for s, (out, _) in zip(BASIS, decoded)}
    reference = {s.label: occsim.reference_gate(s, target.name).label for s in BASIS}
    ok = mapped and sign_ok and bits == reference
    detail = f"mappings exact={mapped} signs={[sg for _, sg in decoded]} decoded={bits} reference={reference}"
    assert record(f"occupation_truth_tables[{target.name}]", ok, detail)


def test_postselection_rates(gate_networks, record):
    single = []
    pair = []
    for G in gate_networks.values():
        for mode in range(4):
            dist = focksim.evolve_fock(G, (mode,))
            single.append(sum(p for c, p in dist.probabilities.items() if c[0] < 4))
        for s in BASIS:
            _, success = apply_postselection(focksim.brute_force_distribution(G, PhotonPair(*LOGICAL_INJECTIONS[s])))
            pair.append(success)
    e1 = max(abs(p - 0.5) for p in single)
    e2 = max(abs(p - 0.25) for p in pair)
    assert record("postselection_rates", e1 < EXACT and e2 < EXACT,
                  f"max|single-0.5|={e1:.2e} max|pair-0.25|={e2:.2e}")


def test_oracle_equivalence(random_angles, record):
    worst = norm = 0.0
    for angles in random_angles:
        G = bsnet.compose(angles)
        for s in BASIS:
            inp = PhotonPair(*LOGICAL_INJECTIONS[s])
            a = focksim.evolve_two_photon(G, inp)
            b = focksim.brute_force_distribution(G, inp)
            worst = max(worst, a.max_difference(b))
            norm = max(norm, abs(a.total() - 1), abs(b.total() - 1))
    g = np.eye(8)
    g[np.ix_([0, 1], [0, 1])] = bsnet.rotation_pair(math.pi / 4)
    hom = focksim.brute_force_distribution(g, PhotonPair(0, 1)).probability((0, 1))
    ok = worst < EXACT and norm < EXACT and hom < EXACT
    assert record("oracle_equivalence", ok, f"max amp diff={worst:.2e} max|sum-1|={norm:.2e} HOM coincidence={hom:.2e}")


def test_solver(record):
    t0 = time.perf_counter()
    sols = anglesolve.enumerate_sign_solutions(CNOT)
    elapsed = time.perf_counter() - t0
    reverify = max((anglesolve.block_residual(s, CNOT) for s in sols), default=math.inf)
    cc = anglesolve.cross_check(CNOT)
    searches = {t.name: anglesolve.continuous_angle_search(t, SEARCH_TOL, restarts=16) for t in (CNOT, SWAP)}
    ok = (
        elapsed < 1.0 and sols and reverify < EXACT and cc.relation
        and all(r.residual < SEARCH_TOL and len(r.history) <= 16 for r in searches.values())
    )
    detail = (
        f"enumeration {len(sols)} solutions in {elapsed:.3f}s, reverify max={reverify:.2e}; "
        f"cross-check: {cc.diagnostic}; continuous residuals "
        + ", ".join(f"{k}={r.residual:.2e} ({len(r.history)} restarts)" for k, r in searches.items())
    )
    assert record("solver", bool(ok), detail)


def test_bosonic_gate_report(gate_networks, record):
    lines = []
    ok = True
    for name, G in gate_networks.items():
        target = occsim.target_by_name(name)
        for rule in (PostselectionRule(), PostselectionRule(require_one_per_pair=True)):
            rep = gate_report(G, target, rule, semantics="bosonic").bosonic
            for row in rep.rows:
                cond = sum(row.outcomes.values())
                total = cond + row.bunched_fraction + row.cross_pair_fraction
                ok &= abs(total - 1) < EXACT and cond <= 1 + EXACT
                if rule.require_one_per_pair:
                    ok &= abs(cond - 1) < EXACT
                else:
                    ok &= abs(row.retained_probability - 0.25) < EXACT
                    lines.append(f"{name}/{row.input_label}: bunched={row.bunched_fraction:.3f} "
                                 f"cross={row.cross_pair_fraction:.3f} dominant={row.dominant}")
    assert record("bosonic_gate_report", ok, "; ".join(lines))


def _cli(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    capsys.readouterr()
    return code


def test_cli_contract(capsys, tmp_path, record):
    missing = tmp_path / "missing.json"
    cases = [
        ("verify cnot.json", ("verify", "--config", CONFIGS / "cnot.json"), 0),
        ("verify allzero.json", ("verify", "--config", CONFIGS / "allzero.json"), 1),
        ("verify missing.json", ("verify", "--config", missing), 2),
        ("simulate cnot.json occupation", ("simulate", "--config", CONFIGS / "cnot.json", "--out", tmp_path / "a.json"), 0),
        ("simulate cnot.json bosonic", ("simulate", "--config", CONFIGS / "cnot.json", "--out", tmp_path / "b.csv", "--format", "csv"), 0),
        ("simulate swap.json occupation", ("simulate", "--config", CONFIGS / "swap.json", "--out", tmp_path / "c.json"), 0),
        ("solve cnot enumerate", ("solve", "--gate", "cnot", "--mode", "enumerate"), 0),
        ("solve swap continuous", ("solve", "--gate", "swap", "--mode", "continuous", "--tol", "1e-6"), 0),
        ("solve zero.json enumerate", ("solve", "--gate", CONFIGS / "zero.json", "--mode", "enumerate"), 1),
    ]
    failures = []
    for label, argv, expected in cases:
        code = _cli(capsys, *argv)
        if code != expected:
            failures.append(f"{label} exit {code} (want {expected})")
    first = (tmp_path / "a.json").read_bytes()
    _cli(capsys, "simulate", "--config", CONFIGS / "cnot.json", "--out", tmp_path / "a2.json")
    stable = first == (tmp_path / "a2.json").read_bytes()
    rows = {r["input"]: r for r in json.loads(first)["semantics"]["bosonic"]["inputs"]}
    retained = rows["10"]["retained_probability"]
    if not stable:
        failures.append("simulate output not byte-stable")
    if abs(retained - 0.25) >= EXACT:
        failures.append(f"bosonic retained for 10 = {retained}")
    detail = f"{len(cases) - len([f for f in failures if 'exit' in f])}/{len(cases)} exit codes as stated"
    if failures:
        detail += "; " + "; ".join(failures)
    assert record("cli_contract", not failures, detail)
