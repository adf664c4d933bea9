"""
Outcome documents. Keys are sorted and amounts are lowest-terms strings,
so two equal outcomes always serialize to the same bytes.
"""
import json
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict

from src import __version__
from src.core.models import Outcome


class AssignmentRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bundle: List[str]
    bidder: int


def _amounts(values) -> Dict[str, str]:
    return {str(n): str(v) for n, v in sorted(values.items())}


def outcome_payload(outcome: Outcome) -> Dict[str, Any]:
    """The engine's result, without run metadata (seed, solver, version)."""
    return {
        "chosen": [{"bundle": list(goods), "bidder": bidder} for goods, bidder in outcome.chosen.canonical_key],
        "payments": _amounts(outcome.payments),
        "alphas": _amounts(outcome.alphas),
        "max_value": str(outcome.max_value),
        "revenue": str(outcome.revenue),
        "tie_break_applied": outcome.tie_break_applied,
        "winner_count": outcome.winner_count,
    }


def outcome_fingerprint(outcome: Outcome) -> bytes:
    return json.dumps(outcome_payload(outcome), sort_keys=True, separators=(",", ":")).encode("utf-8")


class OutcomeDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: str
    seed: int
    solver: str
    tie_break_rule: str
    chosen: List[AssignmentRecord]
    payments: Dict[str, str]
    alphas: Dict[str, str]
    max_value: str
    revenue: str
    tie_break_applied: bool
    winner_count: int

    @classmethod
    def from_outcome(cls, outcome: Outcome, seed: int, solver: str) -> "OutcomeDocument":
        return cls(
            version=__version__,
            seed=seed,
            solver=solver,
            tie_break_rule=outcome.tie_break_rule,
            **outcome_payload(outcome),
        )

    def render(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    @classmethod
    def parse(cls, text: str) -> "OutcomeDocument":
        return cls.model_validate_json(text)
