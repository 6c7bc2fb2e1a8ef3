"""JSON formats for matrices, states, predicates, programs, triples, reports.

Matrices split into real and imaginary parts, row-major:
``{"dim": d, "re": [[...]], "im": [[...]]}``. Predicates:
``{"atoms": [...], "effects": {atom: matrix}}``. Programs:
``{"dim": d, "repr": "kraus"|"super"|"choi"|"named", "payload": ..., "label": str}``.
Triples: ``{"pre": predicate, "prog": program, "post": predicate}``.
States are bare matrix objects. All numbers are IEEE-754 doubles; Python's
json module round-trips them exactly.
"""

from __future__ import annotations

import numpy as np

from .campaigns import CampaignResult
from .errors import ValidationError
from .linalg import ToleranceConfig
from .predicates import OutcomeSpace, Predicate, SatMeasure, ValidationReport
from .programs import DensityState, QuantumProgram, build_program
from .wp import HoareTriple, VerificationReport, WeakestCheckReport

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "state_to_json",
    "state_from_json",
    "predicate_to_json",
    "predicate_from_json",
    "sat_to_json",
    "sat_from_json",
    "program_to_json",
    "program_from_json",
    "triple_to_json",
    "triple_from_json",
    "tolerances_to_json",
    "validation_report_to_json",
    "verification_report_to_json",
    "weakest_report_to_json",
    "campaign_result_to_json",
]


def matrix_to_json(m) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    return {
        "dim": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValidationError(f"matrix JSON must be an object, got {type(obj).__name__}")
    missing = [k for k in ("dim", "re", "im") if k not in obj]
    if missing:
        raise ValidationError(f"matrix JSON missing keys {missing}")
    d = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValidationError(
            f"matrix parts must be {d}x{d}, got re {re.shape} and im {im.shape}"
        )
    return re + 1j * im


def state_to_json(rho: DensityState) -> dict:
    return matrix_to_json(rho.matrix)


def state_from_json(obj, tol: ToleranceConfig | None = None) -> DensityState:
    return DensityState(matrix_from_json(obj), tol)


def predicate_to_json(p: Predicate) -> dict:
    return {
        "atoms": list(p.space.atoms),
        "effects": {a: matrix_to_json(p.effect(a)) for a in p.space.atoms},
    }


def predicate_from_json(obj) -> Predicate:
    if not isinstance(obj, dict) or "atoms" not in obj or "effects" not in obj:
        raise ValidationError("predicate JSON needs keys 'atoms' and 'effects'")
    atoms = tuple(str(a) for a in obj["atoms"])
    effects = {a: matrix_from_json(m) for a, m in obj["effects"].items()}
    return Predicate(OutcomeSpace(atoms), effects)


def sat_to_json(s: SatMeasure) -> dict:
    return {
        "weights": {a: s.weights[a] for a in s.space.atoms},
        "satisfied": bool(s.satisfied),
    }


def sat_from_json(obj) -> SatMeasure:
    if not isinstance(obj, dict) or "weights" not in obj or "satisfied" not in obj:
        raise ValidationError("satisfiability JSON needs keys 'weights' and 'satisfied'")
    weights = {str(a): float(w) for a, w in obj["weights"].items()}
    return SatMeasure(
        space=OutcomeSpace(tuple(weights)),
        weights=weights,
        satisfied=bool(obj["satisfied"]),
    )


def program_to_json(c: QuantumProgram) -> dict:
    if c.kraus is not None:
        payload = [matrix_to_json(k) for k in c.kraus]
        repr_kind = "kraus"
    else:
        payload = matrix_to_json(c.super)
        repr_kind = "super"
    return {"dim": c.dim, "repr": repr_kind, "payload": payload, "label": c.label}


def program_from_json(obj, tol: ToleranceConfig | None = None) -> QuantumProgram:
    if not isinstance(obj, dict) or "repr" not in obj or "payload" not in obj:
        raise ValidationError("program JSON needs keys 'repr' and 'payload' (and usually 'dim')")
    repr_kind = obj["repr"]
    payload = obj["payload"]
    dim = int(obj["dim"]) if "dim" in obj else None
    if repr_kind == "kraus":
        source = {"kraus": [matrix_from_json(k) for k in payload]}
    elif repr_kind == "super":
        source = {"super": matrix_from_json(payload)}
    elif repr_kind == "choi":
        source = {"choi": matrix_from_json(payload)}
    elif repr_kind == "named":
        source = {"named": dict(payload)}
    else:
        raise ValidationError(f"unknown program repr {repr_kind!r}")
    prog = build_program(source, dim=dim, tol=tol)
    label = obj.get("label")
    if label:
        prog = QuantumProgram(prog.dim, prog.super, kraus=prog.kraus, label=str(label))
    return prog


def triple_to_json(t: HoareTriple) -> dict:
    return {
        "pre": predicate_to_json(t.pre),
        "prog": program_to_json(t.prog),
        "post": predicate_to_json(t.post),
    }


def triple_from_json(obj, tol: ToleranceConfig | None = None) -> HoareTriple:
    if not isinstance(obj, dict) or any(k not in obj for k in ("pre", "prog", "post")):
        raise ValidationError("triple JSON needs keys 'pre', 'prog' and 'post'")
    return HoareTriple(
        pre=predicate_from_json(obj["pre"]),
        prog=program_from_json(obj["prog"], tol),
        post=predicate_from_json(obj["post"]),
    )


def tolerances_to_json(tol: ToleranceConfig) -> dict:
    return {
        "eig_tol": tol.eig_tol,
        "residual_tol": tol.residual_tol,
        "sample_count": tol.sample_count,
    }


def validation_report_to_json(r: ValidationReport) -> dict:
    return {"ok": r.ok, "violations": list(r.violations), "complete": r.complete}


def verification_report_to_json(r: VerificationReport) -> dict:
    witness = None
    if r.witness is not None:
        witness = {
            "atom": r.witness.atom,
            "state": matrix_to_json(r.witness.state.matrix),
            "lhs": r.witness.lhs,
            "rhs": r.witness.rhs,
        }
    return {
        "verdict": r.verdict,
        "witness": witness,
        "residuals": dict(r.residuals),
        "margins": dict(r.margins),
        "seed": r.seed,
    }


def weakest_report_to_json(r: WeakestCheckReport) -> dict:
    return {
        "trials": r.trials,
        "all_dominated": r.all_dominated,
        "dominated": r.dominated,
        "confirmed_preconditions": r.confirmed_preconditions,
        "min_margin": r.min_margin,
        "seed": r.seed,
    }


def campaign_result_to_json(r: CampaignResult) -> dict:
    return {
        "suite": r.suite,
        "dims": list(r.dims),
        "trials": r.trials,
        "failures": r.failures,
        "max_residual": r.max_residual,
        "passed": r.passed,
        "seed": r.seed,
        "notes": list(r.notes),
    }
