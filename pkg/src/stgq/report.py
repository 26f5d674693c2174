"""Check records shared by the analysis modules and the command line."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["Report", "plain"]


def plain(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays and tuples to JSON types."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [plain(v) for v in seq]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class Report:
    """{check, subject, verdict, witnesses, parameters}.

    ``verdict`` is True, False, or a string such as "not applicable".
    """

    check: str
    subject: str
    verdict: Any
    witnesses: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict is True

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "subject": self.subject,
            "verdict": plain(self.verdict),
            "witnesses": plain(self.witnesses),
            "parameters": plain(self.parameters),
        }
