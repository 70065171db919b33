"""Answers for bounded checks of properties that are undecidable in general.

A :class:`Verdict` is one of

* ``Verified(radius)``: the property holds, or holds up to the stated radius
  for universally quantified properties;
* ``Refuted(witness)``: a checkable counterexample was found;
* ``Unknown(radius)``: the search up to ``radius`` was inconclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable


class Status(enum.Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


# process exit codes used by the command line front end
EXIT_CODES = {Status.VERIFIED: 0, Status.REFUTED: 1, Status.UNKNOWN: 2}


@dataclass(frozen=True)
class Verdict:
    status: Status
    radius: int | None = None
    witness: Any = None
    detail: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.status is Status.REFUTED and self.witness is None:
            raise ValueError("a Refuted verdict needs a witness")

    @classmethod
    def verified(cls, radius: int | None = None, detail: str = "", witness: Any = None, **extra) -> Verdict:
        return cls(Status.VERIFIED, radius, witness, detail, extra)

    @classmethod
    def refuted(cls, witness: Any, detail: str = "", radius: int | None = None, **extra) -> Verdict:
        return cls(Status.REFUTED, radius, witness, detail, extra)

    @classmethod
    def unknown(cls, radius: int | None = None, detail: str = "", witness: Any = None, **extra) -> Verdict:
        return cls(Status.UNKNOWN, radius, witness, detail, extra)

    @property
    def is_verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def is_refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def __str__(self) -> str:
        if self.status is Status.REFUTED:
            text = f"Refuted(witness={_show(self.witness)})"
        else:
            text = f"{self.status.value}({self.radius})"
        if self.detail:
            text += f": {self.detail}"
        return text


def _show(x: Any) -> str:
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(_show(y) for y in x) + ")"
    return str(x)


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """Refuted if any part is, else Unknown if any part is, else Verified.

    A Verified result reports the smallest radius among its parts.
    """
    verdicts = list(verdicts)
    for v in verdicts:
        if v.is_refuted:
            return v
    for v in verdicts:
        if v.is_unknown:
            return v
    radii = [v.radius for v in verdicts if v.radius is not None]
    return Verdict.verified(min(radii) if radii else None)
