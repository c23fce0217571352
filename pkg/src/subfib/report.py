"""Pass/fail reports produced by the law checkers.

A report is a flat list of (check id, status, detail) entries; an empty
list of failures means the checked laws all hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    suite: str
    entries: list[tuple[str, str, str]] = field(default_factory=list)

    def add(self, check_id: str, ok: bool, detail: str = "") -> None:
        self.entries.append((check_id, "pass" if ok else "fail", detail))

    def fail(self, check_id: str, detail: str) -> None:
        self.entries.append((check_id, "fail", detail))

    def ok(self, check_id: str, detail: str = "") -> None:
        self.entries.append((check_id, "pass", detail))

    def extend(self, other: "Report") -> None:
        for check_id, status, detail in other.entries:
            self.entries.append((f"{other.suite}.{check_id}", status, detail))

    @property
    def failures(self) -> list[tuple[str, str, str]]:
        return [e for e in self.entries if e[1] == "fail"]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def summary(self) -> str:
        n_fail = len(self.failures)
        n_pass = len(self.entries) - n_fail
        if not self.entries:
            return f"{self.suite}: no violations"
        return f"{self.suite}: {n_pass} passed, {n_fail} failed"

    def render(self) -> str:
        lines = [self.summary()]
        for check_id, status, detail in self.entries:
            if status == "fail":
                lines.append(f"  FAIL {check_id}: {detail}")
        return "\n".join(lines)

    def render_full(self) -> str:
        lines = [self.summary()]
        for check_id, status, detail in self.entries:
            mark = "ok  " if status == "pass" else "FAIL"
            suffix = f": {detail}" if detail else ""
            lines.append(f"  {mark} {check_id}{suffix}")
        return "\n".join(lines)
