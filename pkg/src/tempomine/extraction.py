"""Pattern rules that turn SRL temporal arguments into (event, value, dimension) tuples.

Each temporal argument is classified by the first matching extractor in a
fixed precedence order:

    hierarchy > frequency > duration > upper-bound > typical-time

so output is deterministic when several rule families could fire (e.g.
"every morning" is frequency, not typical time). The matched argument span
is deleted from the sentence, the verb index re-pointed, and at most one
tuple is emitted per argument.

All keyword matching is case-insensitive on token surfaces; there is no
lemmatization.
"""

import json
from dataclasses import dataclass
from collections.abc import Iterable, Sequence
from typing import NamedTuple

from .label_space import (
    TemporalDimension,
    canonical_seconds,
    label_space,
    nearest_unit,
)
from .srl_ingest import SrlFrame, SrlSentence, is_temporal_role

__all__ = [
    "TemporalTuple",
    "parse_numeric",
    "extract_duration",
    "extract_frequency",
    "extract_typical_time",
    "extract_upper_bound",
    "extract_hierarchy",
    "classify_temporal_argument",
    "extract_sentence",
    "write_tuples_jsonl",
    "read_tuples_jsonl",
    "DEFAULT_FREQUENCY_TRIGGERS",
]


@dataclass(frozen=True)
class TemporalTuple:
    """One mined fact: the event (argument removed), a dimension, a value.

    ``arg_tmp_event_tokens`` carries the embedded event phrase and is
    non-empty exactly for hierarchy tuples. ``provenance`` is
    (doc_id, sent_index, frame_ordinal).
    """

    event_tokens: tuple[str, ...]
    verb_index: int
    dimension: TemporalDimension
    value: str
    arg_tmp_event_tokens: tuple[str, ...] = ()
    provenance: tuple[str, int, int] = ("", 0, 0)

    def to_json_dict(self) -> dict:
        return {
            "doc_id": self.provenance[0],
            "sent_index": self.provenance[1],
            "frame_ordinal": self.provenance[2],
            "event_tokens": list(self.event_tokens),
            "verb_index": self.verb_index,
            "dimension": self.dimension.value,
            "value": self.value,
            "arg_tmp_event_tokens": list(self.arg_tmp_event_tokens),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TemporalTuple":
        return cls(
            event_tokens=tuple(obj["event_tokens"]),
            verb_index=int(obj["verb_index"]),
            dimension=TemporalDimension(obj["dimension"]),
            value=obj["value"],
            arg_tmp_event_tokens=tuple(obj.get("arg_tmp_event_tokens", ())),
            provenance=(obj.get("doc_id", ""), int(obj.get("sent_index", 0)), int(obj.get("frame_ordinal", 0))),
        )


class Numeric(NamedTuple):
    value: float
    width: int


_NUMBER_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
}

# Surface form -> canonical unit name, singular and plural.
_UNIT_SURFACES: dict[str, str] = {}
for _name in ("second", "minute", "hour", "day", "week", "month", "year", "decade"):
    _UNIT_SURFACES[_name] = _name
    _UNIT_SURFACES[_name + "s"] = _name
_UNIT_SURFACES["century"] = "century"
_UNIT_SURFACES["centuries"] = "century"

DEFAULT_FREQUENCY_TRIGGERS = frozenset(
    {"every", "each", "per", "once", "twice", "times",
     "annually", "monthly", "weekly", "daily", "hourly"}
)

_FREQ_ADVERB_PERIOD = {
    "annually": "year", "yearly": "year", "monthly": "month",
    "weekly": "week", "daily": "day", "hourly": "hour",
}

_INVALID_TYPICAL_PREPOSITIONS = frozenset({"until", "since", "following"})

_HIERARCHY_KEYWORDS = frozenset({"before", "after", "during", "while", "when"})

_UPPER_BOUND_MODIFIERS = frozenset({"next", "last", "previous", "recent"})


def _typical_keyword_table() -> dict[str, tuple[TemporalDimension, str]]:
    table: dict[str, tuple[TemporalDimension, str]] = {}
    for label in label_space(TemporalDimension.TYPICAL_DAY).labels:
        table[label.lower()] = (TemporalDimension.TYPICAL_DAY, label)
    for label in ("morning", "afternoon", "evening", "night"):
        table[label + "s"] = (TemporalDimension.TYPICAL_DAY, label)
    for label in label_space(TemporalDimension.TYPICAL_WEEK).labels:
        table[label.lower()] = (TemporalDimension.TYPICAL_WEEK, label)
        table[label.lower() + "s"] = (TemporalDimension.TYPICAL_WEEK, label)
    for label in label_space(TemporalDimension.TYPICAL_MONTH).labels:
        table[label.lower()] = (TemporalDimension.TYPICAL_MONTH, label)
    for label in label_space(TemporalDimension.TYPICAL_SEASON).labels:
        table[label.lower()] = (TemporalDimension.TYPICAL_SEASON, label)
        table[label.lower() + "s"] = (TemporalDimension.TYPICAL_SEASON, label)
    table["autumn"] = (TemporalDimension.TYPICAL_SEASON, "fall")
    table["autumns"] = (TemporalDimension.TYPICAL_SEASON, "fall")
    return table


_TYPICAL_KEYWORDS = _typical_keyword_table()

# Recurrence cycle for "every <typical keyword>": a day phase recurs daily,
# a weekday weekly, a month or season yearly.
_TYPICAL_CYCLE = {
    TemporalDimension.TYPICAL_DAY: "day",
    TemporalDimension.TYPICAL_WEEK: "week",
    TemporalDimension.TYPICAL_MONTH: "year",
    TemporalDimension.TYPICAL_SEASON: "year",
}


def parse_numeric(tokens: list[str] | tuple[str, ...], at: int) -> Numeric | None:
    """Parse a count at ``tokens[at]``: digit strings, one..twelve, a/an -> 1.

    Returns the positive value and consumed token width, or None.
    """
    if not 0 <= at < len(tokens):
        return None
    surface = tokens[at].lower()
    if surface in ("a", "an"):
        return Numeric(1.0, 1)
    if surface in _NUMBER_WORDS:
        return Numeric(float(_NUMBER_WORDS[surface]), 1)
    try:
        value = float(surface.replace(",", ""))
    except ValueError:
        return None
    if value <= 0:
        return None
    return Numeric(value, 1)


def extract_duration(arg_tokens: list[str] | tuple[str, ...]) -> str | None:
    """Duration rule: argument starts with "for" + optional count + unit word.

    The ordinal sense of singular "second" ("for a second chance") is
    rejected whenever further lexical material follows the unit word.
    """
    lower = [t.lower() for t in arg_tokens]
    if not lower or lower[0] != "for":
        return None
    i = 1
    count = 1.0
    num = parse_numeric(lower, i)
    if num is not None:
        count = num.value
        i += num.width
    if i >= len(lower) or lower[i] not in _UNIT_SURFACES:
        return None
    unit = _UNIT_SURFACES[lower[i]]
    if lower[i] == "second" and any(t.isalpha() for t in lower[i + 1:]):
        return None
    return nearest_unit(count * canonical_seconds(unit))


def _parse_period_seconds(lower: list[str], start: int) -> float | None:
    """Seconds spanned by the period phrase beginning at ``start``.

    Finds the first unit word (with an optional immediately-preceding
    count), frequency adverb, or typical-time keyword (mapped to its
    recurrence cycle).
    """
    for j in range(start, len(lower)):
        t = lower[j]
        if t in _UNIT_SURFACES:
            mult = 1.0
            if j > start:
                num = parse_numeric(lower, j - 1)
                if num is not None:
                    mult = num.value
            return mult * canonical_seconds(_UNIT_SURFACES[t])
        if t in _FREQ_ADVERB_PERIOD:
            return float(canonical_seconds(_FREQ_ADVERB_PERIOD[t]))
        if t in _TYPICAL_KEYWORDS:
            dim, _ = _TYPICAL_KEYWORDS[t]
            return float(canonical_seconds(_TYPICAL_CYCLE[dim]))
    return None


def extract_frequency(
    arg_tokens: list[str] | tuple[str, ...],
    triggers: frozenset[str] = DEFAULT_FREQUENCY_TRIGGERS,
) -> str | None:
    """Frequency rule: a trigger keyword plus a recoverable period.

    The result is the unit nearest to (period seconds / occurrence count):
    "four times per week" recurs every 1.75 days, extracted as "day".
    Arguments containing "when" are rejected outright.
    """
    lower = [t.lower() for t in arg_tokens]
    if "when" in lower:
        return None
    trigger_idx = next((i for i, t in enumerate(lower) if t in triggers), None)
    if trigger_idx is None:
        return None
    trigger = lower[trigger_idx]

    if trigger == "times":
        num = parse_numeric(lower, trigger_idx - 1)
        if num is None:
            return None
        count = num.value
    elif trigger == "twice":
        count = 2.0
    else:
        count = 1.0

    if trigger in _FREQ_ADVERB_PERIOD:
        period = float(canonical_seconds(_FREQ_ADVERB_PERIOD[trigger]))
    else:
        period = _parse_period_seconds(lower, trigger_idx + 1)
    if period is None:
        return None
    return nearest_unit(period / count)


def extract_typical_time(arg_tokens: list[str] | tuple[str, ...]) -> tuple[TemporalDimension, str] | None:
    """Typical-time rule: first time-of-day/weekday/month/season keyword.

    Arguments containing "until"/"since"/"following" do not describe an
    occurrence time and are filtered out.
    """
    lower = [t.lower() for t in arg_tokens]
    if any(t in _INVALID_TYPICAL_PREPOSITIONS for t in lower):
        return None
    for t in lower:
        if t in _TYPICAL_KEYWORDS:
            return _TYPICAL_KEYWORDS[t]
    return None


def extract_upper_bound(arg_tokens: list[str] | tuple[str, ...]) -> str | None:
    """Upper-bound rule: "in" + count + unit, "yesterday", or
    next/last/previous/recent + unit ("last week" bounds the event by a week)."""
    lower = [t.lower() for t in arg_tokens]
    if not lower:
        return None
    if lower[0] == "in":
        num = parse_numeric(lower, 1)
        if num is not None:
            j = 1 + num.width
            if j < len(lower) and lower[j] in _UNIT_SURFACES:
                return nearest_unit(num.value * canonical_seconds(_UNIT_SURFACES[lower[j]]))
    for i, t in enumerate(lower):
        if t == "yesterday":
            return "day"
        if t in _UPPER_BOUND_MODIFIERS and i + 1 < len(lower) and lower[i + 1] in _UNIT_SURFACES:
            return _UNIT_SURFACES[lower[i + 1]]
    return None


def extract_hierarchy(arg_tokens: list[str] | tuple[str, ...]) -> tuple[str, list[str]] | None:
    """Hierarchy rule: argument-initial before/after/during/while/when.

    "while" merges into "during". The remainder of the argument is the
    embedded event phrase and must be non-empty.
    """
    if not arg_tokens:
        return None
    keyword = arg_tokens[0].lower()
    if keyword not in _HIERARCHY_KEYWORDS:
        return None
    rest = list(arg_tokens[1:])
    if not rest:
        return None
    label = "during" if keyword in ("during", "while") else keyword
    return label, rest


def _delete_span(tokens: tuple[str, ...], span: tuple[int, int], verb_index: int) -> tuple[tuple[str, ...], int]:
    start, end = span
    remaining = tokens[:start] + tokens[end:]
    new_verb = verb_index if verb_index < start else verb_index - (end - start)
    return remaining, new_verb


def classify_temporal_argument(
    sentence: SrlSentence,
    frame: SrlFrame,
    span: tuple[int, int],
    frame_ordinal: int = 0,
    triggers: frozenset[str] = DEFAULT_FREQUENCY_TRIGGERS,
) -> list[TemporalTuple]:
    """Classify one temporal argument; returns at most one tuple.

    The emitted event keeps every sentence token outside the argument
    span, with the verb index re-pointed at the same surface token.
    """
    start, end = span
    arg_tokens = sentence.tokens[start:end]
    if not arg_tokens:
        return []

    dimension: TemporalDimension | None = None
    value: str | None = None
    embedded: list[str] = []

    hierarchy = extract_hierarchy(arg_tokens)
    if hierarchy is not None:
        dimension = TemporalDimension.HIERARCHY
        value, embedded = hierarchy
    else:
        freq = extract_frequency(arg_tokens, triggers)
        if freq is not None:
            dimension, value = TemporalDimension.FREQUENCY, freq
        else:
            dur = extract_duration(arg_tokens)
            if dur is not None:
                dimension, value = TemporalDimension.DURATION, dur
            else:
                bound = extract_upper_bound(arg_tokens)
                if bound is not None:
                    dimension, value = TemporalDimension.UPPER_BOUND, bound
                else:
                    typical = extract_typical_time(arg_tokens)
                    if typical is not None:
                        dimension, value = typical

    if dimension is None or value is None:
        return []

    event_tokens, verb_index = _delete_span(sentence.tokens, span, frame.verb_index)
    if not event_tokens:
        return []
    return [
        TemporalTuple(
            event_tokens=event_tokens,
            verb_index=verb_index,
            dimension=dimension,
            value=value,
            arg_tmp_event_tokens=tuple(embedded),
            provenance=(sentence.doc_id, sentence.sent_index, frame_ordinal),
        )
    ]


def write_tuples_jsonl(
    path: str,
    tuples: Iterable[TemporalTuple],
    header_lines: Sequence[str] = (),
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        for t in tuples:
            fh.write(json.dumps(t.to_json_dict(), sort_keys=True))
            fh.write("\n")


def read_tuples_jsonl(path: str) -> list[TemporalTuple]:
    tuples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tuples.append(TemporalTuple.from_json_dict(json.loads(line)))
    return tuples


def extract_sentence(
    sentence: SrlSentence,
    triggers: frozenset[str] = DEFAULT_FREQUENCY_TRIGGERS,
) -> list[TemporalTuple]:
    """All tuples minable from one sentence, one candidate per
    (frame, temporal argument) pair, in frame-then-argument order."""
    tuples: list[TemporalTuple] = []
    for frame_ordinal, frame in enumerate(sentence.frames):
        for role, span in frame.arguments:
            if is_temporal_role(role):
                tuples.extend(
                    classify_temporal_argument(sentence, frame, span, frame_ordinal, triggers)
                )
    return tuples
