"""Attack outcome record shared by both attack methods."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .equation import SolverVerdict, format_equation

METHOD_QR = "QR"
METHOD_SP = "SP"


@dataclass
class AttackResult:
    """Outcome of one attack on one problem.

    When no deceiving text is found the final text falls back to the
    original (adversarial_text == original_text, same prediction); what was
    actually attempted is kept in `notes`.
    """
    method: str  # METHOD_QR | METHOD_SP
    original_text: str
    adversarial_text: str
    original_prediction: str | None
    adversarial_prediction: str | None
    success: bool
    queries_used: int
    originally_correct: bool
    original_verdict: SolverVerdict | None = None
    adversarial_verdict: SolverVerdict | None = None
    problem_id: str = ""
    notes: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "id": self.problem_id,
            "method": self.method,
            "original_text": self.original_text,
            "adversarial_text": self.adversarial_text,
            "original_prediction": self.original_prediction,
            "adversarial_prediction": self.adversarial_prediction,
            "success": self.success,
            "queries_used": self.queries_used,
            "originally_correct": self.originally_correct,
            "original_verdict": _verdict_dict(self.original_verdict),
            "adversarial_verdict": _verdict_dict(self.adversarial_verdict),
            "notes": self.notes,
        }


def _verdict_dict(v: SolverVerdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "valid": v.valid,
        "correct": v.correct,
        "value": _num_json(v.value),
        "equation": format_equation(v.prediction) if v.prediction is not None else None,
    }


def _num_json(value: Fraction | None):
    """Fractions to JSON: plain int when integral, "p/q" string otherwise."""
    if value is None:
        return None
    if value.denominator == 1:
        return int(value)
    return str(value)


def _canonical(pred_text: str | None, verdict: SolverVerdict) -> str:
    if verdict.valid and verdict.prediction is not None:
        return format_equation(verdict.prediction)
    return "!invalid " + " ".join((pred_text or "").split())


def deceives(
    orig_pred: str | None,
    orig_verdict: SolverVerdict,
    adv_pred: str | None,
    adv_verdict: SolverVerdict,
    success_rule: str = "verdict",
) -> bool:
    """Did the perturbed text fool the solver?

    "verdict": the adversarial output is incorrect or invalid.
    "prediction-change": the adversarial output differs from the original
    one (canonical equation comparison; invalid outputs compared as text).
    """
    if success_rule == "verdict":
        return not adv_verdict.correct
    if success_rule == "prediction-change":
        return _canonical(orig_pred, orig_verdict) != _canonical(adv_pred, adv_verdict)
    raise ValueError(f"unknown success_rule {success_rule!r}")
