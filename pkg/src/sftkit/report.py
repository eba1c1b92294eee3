"""Violation records returned by every validator."""
from __future__ import annotations

from typing import Any, NamedTuple


class Violation(NamedTuple):
    kind: str
    at: Any
    detail: str = ""


class Report(list):
    """A list of violations that also counts checks skipped at the boundary."""

    def __init__(self, items=(), skipped: int = 0):
        super().__init__(items)
        self.skipped = skipped

    def kinds(self) -> set[str]:
        return {v.kind for v in self}

    def merge(self, other: "Report") -> "Report":
        self.extend(other)
        self.skipped += getattr(other, "skipped", 0)
        return self
