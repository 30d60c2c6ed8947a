"""Small result/report containers used by the verification layers."""

from dataclasses import dataclass, field

__all__ = ["CheckResult", "CheckReport"]


@dataclass
class CheckResult:
    """Outcome of one named numerical check."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        text = f"{self.name}: residual={self.residual:.3e} tol={self.tolerance:.1e} {verdict}"
        if self.note:
            text += f"  ({self.note})"
        return text

    def to_dict(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": "PASS" if self.passed else "FAIL",
            "note": self.note,
        }


@dataclass
class CheckReport:
    """An ordered collection of named checks with an overall verdict."""

    title: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, residual, tolerance, note=""):
        result = CheckResult(
            name=name,
            residual=float(residual),
            tolerance=float(tolerance),
            passed=bool(residual <= tolerance),
            note=note,
        )
        self.checks.append(result)
        return result

    def add_note(self, text):
        self.notes.append(text)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __str__(self):
        lines = [f"== {self.title} =="]
        lines += [c.line() for c in self.checks]
        lines += [f"note: {n}" for n in self.notes]
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def to_dict(self):
        return {
            "title": self.title,
            "overall": "PASS" if self.passed else "FAIL",
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }
