"""Check outcomes and the JSON / markdown campaign report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

PASS = "pass"
CORROBORATED = "corroborated"
REFUTED = "refuted"
FAIL = "fail"
OK_STATUSES = (PASS, CORROBORATED)


@dataclass
class CheckOutcome:
    name: str
    parameters: dict
    status: str
    witnesses: list = field(default_factory=list)
    seed: int = 0
    gated: bool = True
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.status in (REFUTED, FAIL) and not self.witnesses:
            raise ValueError(f"{self.name}: {self.status} outcome needs a witness")

    @property
    def ok(self) -> bool:
        return self.status in OK_STATUSES

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "parameters": self.parameters,
            "status": self.status,
            "gated": self.gated,
            "seed": self.seed,
            "witnesses": self.witnesses,
        }
        if self.notes:
            out["notes"] = self.notes
        if timings:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def gated_ok(outcomes) -> bool:
    return all(o.ok for o in outcomes if o.gated)


def report_json(outcomes, config: dict, timings: bool = False) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "config": config,
        "outcomes": [o.to_json(timings) for o in outcomes],
        "summary": {
            "gated_ok": gated_ok(outcomes),
            "counts": _counts(outcomes),
        },
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _counts(outcomes) -> dict:
    counts: dict[str, int] = {}
    for o in outcomes:
        counts[o.status] = counts.get(o.status, 0) + 1
    return counts


def _params(p: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in p.items())


def report_markdown(outcomes, config: dict) -> str:
    lines = ["# Verification report", ""]
    lines.append("Configuration: " + _params(config))
    lines.append("")
    lines.append(f"Gated checks: **{'all pass' if gated_ok(outcomes) else 'FAILURES'}**")
    lines.append("")
    lines += ["| check | parameters | status | time (s) |", "|---|---|---|---|"]
    for o in outcomes:
        if o.gated:
            lines.append(f"| {o.name} | {_params(o.parameters)} | {o.status} | {o.elapsed:.2f} |")
    informational = [o for o in outcomes if not o.gated]
    if informational:
        lines += ["", "## Axiom fidelity (informational)", ""]
        lines.append("These outcomes do not affect the exit status.")
        lines.append("")
        for o in informational:
            lines.append(f"- **{o.name}** ({_params(o.parameters)}): {o.status}")
            for w in o.witnesses[:3]:
                lines.append(f"  - witness: `{json.dumps(w, sort_keys=True)}`")
    failing = [o for o in outcomes if o.gated and not o.ok]
    if failing:
        lines += ["", "## Failures", ""]
        for o in failing:
            lines.append(f"- **{o.name}** ({_params(o.parameters)}): {o.status}")
            for w in o.witnesses[:3]:
                lines.append(f"  - witness: `{json.dumps(w, sort_keys=True)}`")
    return "\n".join(lines) + "\n"
