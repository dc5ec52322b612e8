"""Verdict containers returned by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


def _plain(x):
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    counterexample: tuple | None = None
    note: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed}
        if self.counterexample is not None:
            d["counterexample"] = _plain(self.counterexample)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def add(self, name: str, counterexample=None, note: str = "") -> Check:
        c = Check(name, counterexample is None, counterexample, note)
        self.checks.append(c)
        return c

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
        }

    def __str__(self):
        lines = [f"{self.title}: {'pass' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            extra = "" if c.counterexample is None else f"  counterexample={_plain(c.counterexample)}"
            lines.append(f"  [{mark}] {c.name}{extra}")
        return "\n".join(lines)
