"""Triplet dataset ingestion and statistics.

The canonical on-disk format is JSON-lines with keys
initial_question/answer/follow_up; a key mapping adapts files that use
different field names. Malformed lines are reported, never silently
dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FollowgenError
from .textutil import tokenize

DEFAULT_KEYS = {
    "initial_question": "initial_question",
    "answer": "answer",
    "follow_up": "follow_up",
}


class AllLinesMalformedError(FollowgenError):
    pass


@dataclass(frozen=True)
class Triplet:
    initial_question: str
    answer: str
    follow_up: str

    def __post_init__(self) -> None:
        if not (self.initial_question and self.answer and self.follow_up):
            raise ValueError("all three triplet fields must be non-empty")

    def to_dict(self) -> dict[str, str]:
        return {
            "initial_question": self.initial_question,
            "answer": self.answer,
            "follow_up": self.follow_up,
        }


@dataclass(frozen=True)
class LineError:
    line_no: int
    reason: str


@dataclass
class LoadResult:
    triplets: list[Triplet] = field(default_factory=list)
    errors: list[LineError] = field(default_factory=list)

    @property
    def total_lines(self) -> int:
        return len(self.triplets) + len(self.errors)


@dataclass(frozen=True)
class FieldStats:
    mean: float
    min: int
    max: int


@dataclass(frozen=True)
class CorpusStats:
    count: int
    initial_question: FieldStats | None
    answer: FieldStats | None
    follow_up: FieldStats | None


def load_triplets(path: str | Path, key_map: dict[str, str] | None = None) -> LoadResult:
    """Load triplets from a JSON-lines file.

    key_map maps canonical field names to the file's own keys. Blank lines
    are skipped; every other line is either a valid triplet or an entry in
    the error report.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    keys = {**DEFAULT_KEYS, **(key_map or {})}
    result = LoadResult()
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as err:
            result.errors.append(LineError(line_no, f"invalid JSON: {err.msg}"))
            continue
        if not isinstance(raw, dict):
            result.errors.append(LineError(line_no, "line is not a JSON object"))
            continue
        values = {}
        missing = None
        for canonical, source in keys.items():
            value = raw.get(source)
            if not isinstance(value, str) or not value:
                missing = source
                break
            values[canonical] = value
        if missing is not None:
            result.errors.append(LineError(line_no, f"missing or empty field: {missing}"))
            continue
        result.triplets.append(Triplet(**values))
    if not result.triplets and result.errors:
        raise AllLinesMalformedError(f"{path}: all {len(result.errors)} lines malformed")
    return result


def save_triplets(triplets: list[Triplet], path: str | Path) -> None:
    lines = [json.dumps(t.to_dict(), sort_keys=True) for t in triplets]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def index_range(triplets: list[Triplet], start: int = 0, stop: int | None = None) -> list[Triplet]:
    """Simple index-range split (e.g. held-out evaluation slices)."""
    if start < 0 or (stop is not None and stop < start):
        raise ValueError("invalid range")
    return triplets[start:stop]


def stats(triplets: list[Triplet]) -> CorpusStats:
    """Whitespace-token length statistics per triplet field."""

    def field_stats(values: list[int]) -> FieldStats | None:
        if not values:
            return None
        return FieldStats(mean=sum(values) / len(values), min=min(values), max=max(values))

    lengths = {
        "initial_question": [len(t.initial_question.split()) for t in triplets],
        "answer": [len(t.answer.split()) for t in triplets],
        "follow_up": [len(t.follow_up.split()) for t in triplets],
    }
    return CorpusStats(
        count=len(triplets),
        initial_question=field_stats(lengths["initial_question"]),
        answer=field_stats(lengths["answer"]),
        follow_up=field_stats(lengths["follow_up"]),
    )
