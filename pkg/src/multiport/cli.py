"""Command-line driver: ``verify``, ``simulate`` and ``solve``.

Exit codes: 0 success, 1 checks or search failed, 2 bad input.

Run configuration (JSON)::

    {
      "gate": "cnot" | "swap" | "custom",
      "matrix": [[...4x4...]],                # only for "custom"
      "signs": [12 x +1/-1]  or  "angles": [12 radians],
      "inputs": ["00", "10", {"label": "psi", "superposition": [[re, im], x4]}],
      "postselection": {"forbidden_modes": [4, 5, 6, 7], "require_one_per_pair": false},
      "semantics": "occupation" | "bosonic" | "both"
    }
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import anglesolve, bsnet, occsim
from .bsnet import EXACT_TOL, AngleVector
from .errors import MultiportError
from .focksim import LOGICAL_INJECTIONS, LogicalSuperposition, PhotonPair
from .occsim import GateTarget, LogicalState
from .postselect import (
    SEMANTICS,
    InputReport,
    PostselectionRule,
    bosonic_row,
    gate_report,
    occupation_row,
    occupation_superposition_row,
)

CONFIG_NORM_TOL = 1e-9


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    target: GateTarget
    angles: AngleVector
    inputs: list[tuple[str, Any]] = field(default_factory=list)
    rule: PostselectionRule = field(default_factory=PostselectionRule)
    semantics: str = "both"


# -- serialisation ------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    s = format(x, ".17g")
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- configuration ------------------------------------------------------------


def _matrix4(value: Any, what: str) -> np.ndarray:
    try:
        m = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: not a numeric matrix ({exc})") from None
    if m.shape != (4, 4):
        raise ConfigError(f"{what}: expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfigError(f"{what}: entries must be finite")
    return m


def _parse_input(item: Any, i: int) -> tuple[str, Any]:
    if isinstance(item, str):
        try:
            return item, LogicalState.parse(item)
        except MultiportError as exc:
            raise ConfigError(f"inputs[{i}]: {exc}") from None
    if isinstance(item, dict) and "superposition" in item:
        raw = item["superposition"]
        if not isinstance(raw, list) or len(raw) != 4:
            raise ConfigError(f"inputs[{i}]: superposition needs four [re, im] pairs")
        try:
            amps = [complex(float(re), float(im)) for re, im in raw]
        except (TypeError, ValueError):
            raise ConfigError(f"inputs[{i}]: amplitudes must be [re, im] number pairs") from None
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > CONFIG_NORM_TOL:
            raise ConfigError(f"inputs[{i}]: amplitudes not normalised (sum |a|^2 = {norm!r})")
        amps = [a / math.sqrt(norm) for a in amps]
        label = str(item.get("label", f"superposition{i}"))
        return label, LogicalSuperposition(tuple(amps))
    raise ConfigError(f"inputs[{i}]: expected a basis label or a superposition object")


def parse_config(data: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    gate = str(data.get("gate", "")).lower()
    if gate in ("cnot", "swap"):
        target = occsim.target_by_name(gate)
    elif gate == "custom":
        if "matrix" not in data:
            raise ConfigError("custom gate needs a 'matrix'")
        target = GateTarget("custom", _matrix4(data["matrix"], "matrix"))
    else:
        raise ConfigError(f"gate must be cnot, swap or custom, got {data.get('gate')!r}")

    has_angles, has_signs = "angles" in data, "signs" in data
    if has_angles == has_signs:
        raise ConfigError("give exactly one of 'angles' or 'signs'")
    try:
        if has_signs:
            angles = AngleVector.from_signs([int(s) for s in data["signs"]])
        else:
            angles = AngleVector(tuple(float(t) for t in data["angles"]))
    except (MultiportError, TypeError, ValueError) as exc:
        raise ConfigError(f"angles/signs: {exc}") from None

    raw_inputs = data.get("inputs", [s.label for s in occsim.BASIS])
    if not isinstance(raw_inputs, list):
        raise ConfigError("inputs must be a list")
    inputs = [_parse_input(item, i) for i, item in enumerate(raw_inputs)]

    ps = data.get("postselection", {}) or {}
    try:
        rule = PostselectionRule(
            frozenset(int(m) for m in ps.get("forbidden_modes", [4, 5, 6, 7])),
            bool(ps.get("require_one_per_pair", False)),
        )
    except (MultiportError, TypeError, ValueError) as exc:
        raise ConfigError(f"postselection: {exc}") from None

    semantics = data.get("semantics", "both")
    if semantics not in SEMANTICS:
        raise ConfigError(f"semantics must be one of {SEMANTICS}")
    return RunConfig(target, angles, inputs, rule, semantics)


def load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(data)


# -- commands -----------------------------------------------------------------


def verify(cfg: RunConfig) -> tuple[dict, bool]:
    G = bsnet.compose(cfg.angles)
    ortho = bsnet.orthogonality_residual(G)
    h = 4
    A, B, C, E = G[:h, :h], G[:h, h:], G[h:, :h], G[h:, h:]
    eye = np.eye(h)
    block_conditions = {
        "AAt+BBt=I": float(np.max(np.abs(A @ A.T + B @ B.T - eye))),
        "CCt+EEt=I": float(np.max(np.abs(C @ C.T + E @ E.T - eye))),
        "ACt+BEt=0": float(np.max(np.abs(A @ C.T + B @ E.T))),
        "CAt+EBt=0": float(np.max(np.abs(C @ A.T + E @ B.T))),
    }
    residual = occsim.block_matches_target(A, cfg.target)
    checks = {
        "orthogonal": ortho < EXACT_TOL,
        "block_conditions": max(block_conditions.values()) < EXACT_TOL,
        "block_match": residual < occsim.MATCH_TOL,
    }
    report = {
        "gate": cfg.target.name,
        "angles": list(cfg.angles.theta),
        "orthogonality_residual": ortho,
        "block_conditions": block_conditions,
        "block_residual": residual,
        "scaled_block": (occsim.BLOCK_SCALE * A).tolist(),
        "checks": checks,
        "passed": all(checks.values()),
    }
    return report, report["passed"]


def _row_dict(row: InputReport) -> dict:
    return {
        "input": row.input_label,
        "retained_probability": row.retained_probability,
        "outcomes": dict(row.outcomes),
        "phase_sign": row.phase_sign,
        "bunched_fraction": row.bunched_fraction,
        "cross_pair_fraction": row.cross_pair_fraction,
        "representable": row.representable,
    }


def simulate(cfg: RunConfig) -> dict:
    G = bsnet.compose(cfg.angles)
    basis = gate_report(G, cfg.target, cfg.rule, cfg.semantics)
    wanted = ("occupation", "bosonic") if cfg.semantics == "both" else (cfg.semantics,)
    sections: dict[str, Any] = {}
    for sem in wanted:
        rows = []
        for label, item in cfg.inputs:
            if isinstance(item, LogicalState):
                if sem == "occupation":
                    rows.append(occupation_row(G, item))
                else:
                    rows.append(bosonic_row(G, PhotonPair(*LOGICAL_INJECTIONS[item]), label, cfg.rule))
            elif sem == "occupation":
                rows.append(occupation_superposition_row(G, item, label))
            else:
                rows.append(bosonic_row(G, item, label, cfg.rule))
        summary = basis.occupation if sem == "occupation" else basis.bosonic
        sections[sem] = {
            "inputs": [_row_dict(r) for r in rows],
            "truth_table_match": summary.truth_table_match,
            "mean_success": summary.mean_success,
        }
    return {
        "gate": cfg.target.name,
        "angles": list(cfg.angles.theta),
        "block_residual": basis.block_residual,
        "postselection": {
            "forbidden_modes": sorted(cfg.rule.forbidden_modes),
            "require_one_per_pair": cfg.rule.require_one_per_pair,
        },
        "semantics": sections,
    }


CSV_FIELDS = (
    "semantics", "input", "retained_probability", "outcome", "probability",
    "phase_sign", "bunched_fraction", "cross_pair_fraction", "representable",
)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)

    def cell(v: Any) -> str:
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return _fmt_float(v)
        return str(v)

    for sem in sorted(report["semantics"]):
        for row in report["semantics"][sem]["inputs"]:
            outcomes = sorted(row["outcomes"].items()) or [("", None)]
            for outcome, p in outcomes:
                w.writerow([cell(v) for v in (
                    sem, row["input"], row["retained_probability"], outcome, p,
                    row["phase_sign"], row["bunched_fraction"], row["cross_pair_fraction"],
                    row["representable"],
                )])
    return buf.getvalue()


def _load_gate(gate: str) -> GateTarget:
    if gate.lower() in ("cnot", "swap"):
        return occsim.target_by_name(gate)
    try:
        data = json.loads(Path(gate).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read gate file {gate}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{gate}: invalid JSON ({exc})") from None
    matrix = data.get("matrix") if isinstance(data, dict) else data
    return GateTarget(str(data.get("name", "custom")) if isinstance(data, dict) else "custom",
                      _matrix4(matrix, gate))


def solve(target: GateTarget, mode: str, tol: float, restarts: int, seed: int) -> tuple[dict, bool]:
    if mode == "enumerate":
        solutions = anglesolve.enumerate_sign_solutions(target)
        doc: dict[str, Any] = {
            "gate": target.name,
            "mode": mode,
            "solutions": [
                {"signs": list(s.signs), "pattern": str(s),
                 "residual": anglesolve.block_residual(s, target)}
                for s in solutions
            ],
        }
        if target.name.upper() in anglesolve.CONDITION_SETS:
            cc = anglesolve.cross_check(target)
            doc["cross_check"] = {
                "conditions": cc.conditions,
                "relation": cc.relation,
                "matches_other": cc.matches_other,
                "diagnostic": cc.diagnostic,
                "condition_solutions": [str(s) for s in cc.from_conditions],
            }
        return doc, bool(solutions)
    result = anglesolve.continuous_angle_search(target, tol, restarts=restarts, seed=seed)
    doc = {
        "gate": target.name,
        "mode": mode,
        "tolerance": tol,
        "angles": list(result.angles.theta),
        "residual": result.residual,
        "converged": result.converged,
        "history": result.history,
    }
    return doc, result.converged


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multiport", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check orthogonality, block identities and the target block")
    v.add_argument("--config", required=True)
    v.add_argument("--out")

    s = sub.add_parser("simulate", help="run logical inputs under occupation and/or bosonic semantics")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="json")

    so = sub.add_parser("solve", help="find splitter angles for a gate")
    so.add_argument("--gate", required=True, help="cnot, swap, or a JSON file holding a 4x4 matrix")
    so.add_argument("--mode", choices=("enumerate", "continuous"), default="enumerate")
    so.add_argument("--tol", type=float, default=1e-6)
    so.add_argument("--restarts", type=int, default=16)
    so.add_argument("--seed", type=int, default=0)
    so.add_argument("--out")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            report, ok = verify(load_config(args.config))
            _emit(dumps(report) + "\n", args.out)
            return 0 if ok else 1
        if args.command == "simulate":
            report = simulate(load_config(args.config))
            text = dumps(report) + "\n" if args.format == "json" else to_csv(report)
            _emit(text, args.out)
            return 0
        if args.command == "solve":
            if not args.tol > 0:
                raise ConfigError("--tol must be positive")
            doc, ok = solve(_load_gate(args.gate), args.mode, args.tol, args.restarts, args.seed)
            _emit(dumps(doc) + "\n", args.out)
            return 0 if ok else 1
    except (ConfigError, MultiportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
