"""Outcome of an equivalence check and its serializations."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field


class Result(enum.Enum):
    EQUIVALENT = "equivalent"
    INEQUIVALENT = "inequivalent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Step:
    """One witness step: ``side`` moved with ``label`` and reached ``term``."""

    side: str
    label: str
    term: str


@dataclass
class Verdict:
    result: Result
    witness: list[Step] = field(default_factory=list)
    bounds_hit: tuple[str, ...] = ()
    bounded: bool = False
    stats: dict = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.result is Result.EQUIVALENT

    @property
    def inequivalent(self) -> bool:
        return self.result is Result.INEQUIVALENT

    @property
    def unknown(self) -> bool:
        return self.result is Result.UNKNOWN

    def to_records(self) -> str:
        lines = [f"RESULT {self.result.value}"]
        lines += [f"STEP {s.side} {_field(s.label)} {s.term}" for s in self.witness]
        lines.append("BOUNDS hit=" + (",".join(self.bounds_hit) if self.bounds_hit else "none"))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "result": self.result.value,
            "witness": [{"side": s.side, "label": s.label, "term": s.term} for s in self.witness],
            "bounds_hit": list(self.bounds_hit),
            "bounded": self.bounded,
            "stats": dict(self.stats),
        }

    @classmethod
    def from_records(cls, text: str) -> "Verdict":
        result = None
        witness = []
        bounds: tuple[str, ...] = ()
        for line in text.splitlines():
            head, _, rest = line.partition(" ")
            if head == "RESULT":
                result = Result(rest.strip())
            elif head == "STEP":
                side, _, rest = rest.partition(" ")
                if rest.startswith('"'):
                    label, end = json.JSONDecoder().raw_decode(rest)
                    term = rest[end + 1:]
                else:
                    label, _, term = rest.partition(" ")
                witness.append(Step(side, label, term))
            elif head == "BOUNDS":
                flags = rest.removeprefix("hit=").strip()
                bounds = () if flags == "none" else tuple(flags.split(","))
        if result is None:
            raise ValueError("record has no RESULT line")
        return cls(result, witness, bounds)

    def __str__(self) -> str:
        return self.to_records()


def _field(label: str) -> str:
    """Labels containing blanks are written as JSON strings."""
    return json.dumps(label) if " " in label or label.startswith('"') else label


def combine(verdicts: list[Verdict]) -> Verdict:
    """Conjunction: the first refutation wins, then any unknown, else equivalent."""
    for v in verdicts:
        if v.inequivalent:
            return v
    hits = tuple(sorted({h for v in verdicts for h in v.bounds_hit}))
    bounded = any(v.bounded for v in verdicts)
    if any(v.unknown for v in verdicts):
        return Verdict(Result.UNKNOWN, bounds_hit=hits, bounded=bounded)
    return Verdict(Result.EQUIVALENT, bounds_hit=hits, bounded=bounded)
