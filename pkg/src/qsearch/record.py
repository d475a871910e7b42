"""The per-run result row shared by drivers and the reporting layer."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields


def format_parameters(params: dict) -> str:
    """Canonical ``key=value;...`` text with sorted keys; sequences are space-joined."""
    parts = []
    for key in sorted(params):
        value = params[key]
        if isinstance(value, (list, tuple)):
            value = " ".join(
                "/".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v) for v in value
            )
        parts.append(f"{key}={value}")
    return ";".join(parts)


@dataclass
class ExperimentRecord:
    problem_id: str
    parameters: str
    formula_name: str
    coupling_predicted: float
    coupling_measured: float
    eta_predicted: int
    eta_best: int
    success_at_predicted: float
    success_at_best: float
    primitive_ops: int
    step_bound: float
    classical_baseline: int
    wall_time_ms: int

    @classmethod
    def columns(cls) -> list:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def sort_key(self):
        return (self.problem_id, self.parameters)
