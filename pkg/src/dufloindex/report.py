from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of one named check; violations are data, never exceptions."""

    name: str
    violations: list[str] = field(default_factory=list)
    values: dict[str, str] = field(default_factory=dict)
    numeric: dict[str, float] = field(default_factory=dict)
    flagged: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        if self.violations:
            return "fail"
        return "flagged" if self.flagged else "pass"

    def fail(self, msg: str) -> None:
        self.violations.append(msg)

    def to_json(self) -> dict:
        return {
            "id": self.name,
            "status": self.status,
            "detail": "; ".join(self.violations),
            "values": dict(sorted(self.values.items())),
            "numeric": dict(sorted(self.numeric.items())),
        }


def merge(name: str, parts: list[CheckResult]) -> CheckResult:
    out = CheckResult(name)
    for p in parts:
        out.violations.extend(f"{p.name}: {v}" for v in p.violations)
        out.values.update({f"{p.name}.{k}": v for k, v in p.values.items()})
        out.numeric.update({f"{p.name}.{k}": v for k, v in p.numeric.items()})
        out.flagged = out.flagged or p.flagged
    return out
