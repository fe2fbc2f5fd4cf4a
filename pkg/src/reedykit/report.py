"""Validation reports shared by the checkers."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    subject: str = ""
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, kind: str, message: str, *witness) -> None:
        self.violations.append(Violation(kind, message, tuple(witness)))

    def count(self, what: str, k: int = 1) -> None:
        self.checked[what] = self.checked.get(what, 0) + k

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        for k, v in other.checked.items():
            self.count(k, v)

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def to_json(self) -> dict:
        out = {"subject": self.subject, "ok": self.ok,
               "checked": dict(sorted(self.checked.items())),
               "violations": [v.to_json() for v in self.violations]}
        if self.data:
            out["data"] = self.data
        return out

    def __repr__(self):
        return f"ValidationReport({self.subject!r}, ok={self.ok}, violations={len(self.violations)})"


class HypothesisError(ValueError):
    """A theorem's hypotheses are not met; the operation refuses to run."""
