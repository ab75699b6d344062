"""Temporal dimensions, label vocabularies, and the distances between labels.

Eight dimensions are modeled. Duration, frequency, and duration upper-bound
share the nine-unit inventory (second through century) on a log-seconds
scale; the typical-time dimensions (time of day, day of week, month, season)
live on rings; relative hierarchy is a plain categorical set.
"""

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "TemporalDimension",
    "DurationUnit",
    "Topology",
    "LabelSpace",
    "DURATION_UNITS",
    "UNIT_ORDER",
    "logsec",
    "canonical_seconds",
    "nearest_unit",
    "circular_distance",
    "linear_distance",
    "label_space",
    "all_label_spaces",
    "render_manifest",
]


class TemporalDimension(str, Enum):
    """The eight temporal facets mined and modeled by this package."""

    DURATION = "duration"
    FREQUENCY = "frequency"
    UPPER_BOUND = "upper_bound"
    TYPICAL_DAY = "typical_day"
    TYPICAL_WEEK = "typical_week"
    TYPICAL_MONTH = "typical_month"
    TYPICAL_SEASON = "typical_season"
    HIERARCHY = "hierarchy"


class Topology(str, Enum):
    LOG_LINEAR = "log_linear"
    CIRCULAR = "circular"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class DurationUnit:
    name: str
    canonical_seconds: int


# Calendar-precision choices (30-day month, 365-day year) do not affect
# nearest-unit assignment, which happens on the log scale.
DURATION_UNITS: tuple[DurationUnit, ...] = (
    DurationUnit("second", 1),
    DurationUnit("minute", 60),
    DurationUnit("hour", 3_600),
    DurationUnit("day", 86_400),
    DurationUnit("week", 604_800),
    DurationUnit("month", 2_592_000),
    DurationUnit("year", 31_536_000),
    DurationUnit("decade", 315_360_000),
    DurationUnit("century", 3_153_600_000),
)

UNIT_ORDER: tuple[str, ...] = tuple(u.name for u in DURATION_UNITS)
_UNIT_BY_NAME = {u.name: u for u in DURATION_UNITS}

TIME_OF_DAY_LABELS = ("midnight", "dawn", "morning", "noon", "afternoon", "evening", "night", "overnight")
DAY_OF_WEEK_LABELS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")
MONTH_LABELS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)
SEASON_LABELS = ("spring", "summer", "fall", "winter")
HIERARCHY_LABELS = ("before", "after", "during", "when")


@dataclass(frozen=True)
class LabelSpace:
    """An ordered label vocabulary plus the geometry its distances live in."""

    dimension: TemporalDimension
    labels: tuple[str, ...]
    topology: Topology

    def __post_init__(self):
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(self.labels)})

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"label {label!r} not in {self.dimension.value} space") from None

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)


_SPACES: dict[TemporalDimension, LabelSpace] = {
    TemporalDimension.DURATION: LabelSpace(TemporalDimension.DURATION, UNIT_ORDER, Topology.LOG_LINEAR),
    TemporalDimension.FREQUENCY: LabelSpace(TemporalDimension.FREQUENCY, UNIT_ORDER, Topology.LOG_LINEAR),
    TemporalDimension.UPPER_BOUND: LabelSpace(TemporalDimension.UPPER_BOUND, UNIT_ORDER, Topology.LOG_LINEAR),
    TemporalDimension.TYPICAL_DAY: LabelSpace(TemporalDimension.TYPICAL_DAY, TIME_OF_DAY_LABELS, Topology.CIRCULAR),
    TemporalDimension.TYPICAL_WEEK: LabelSpace(TemporalDimension.TYPICAL_WEEK, DAY_OF_WEEK_LABELS, Topology.CIRCULAR),
    TemporalDimension.TYPICAL_MONTH: LabelSpace(TemporalDimension.TYPICAL_MONTH, MONTH_LABELS, Topology.CIRCULAR),
    TemporalDimension.TYPICAL_SEASON: LabelSpace(TemporalDimension.TYPICAL_SEASON, SEASON_LABELS, Topology.CIRCULAR),
    TemporalDimension.HIERARCHY: LabelSpace(TemporalDimension.HIERARCHY, HIERARCHY_LABELS, Topology.CATEGORICAL),
}


def label_space(dimension: TemporalDimension) -> LabelSpace:
    """The label space owned by ``dimension``."""
    return _SPACES[dimension]


def all_label_spaces() -> dict[TemporalDimension, LabelSpace]:
    return dict(_SPACES)


def canonical_seconds(unit: str | DurationUnit) -> int:
    if isinstance(unit, DurationUnit):
        return unit.canonical_seconds
    return _UNIT_BY_NAME[unit].canonical_seconds


def logsec(unit: str | DurationUnit) -> float:
    """Natural log of the unit's span in seconds (minute -> 4.094)."""
    return math.log(canonical_seconds(unit))


_UNIT_LOGSECS = tuple(logsec(u) for u in DURATION_UNITS)


def nearest_unit(seconds: float) -> str:
    """The unit whose log-seconds anchor is closest to ``log(seconds)``.

    Ties break toward the smaller unit. 1.75 days (151200 s) lands on "day";
    3 days (259200 s) is already closer to "week" on the log scale.
    """
    if not seconds > 0:
        raise ValueError(f"seconds must be positive, got {seconds!r}")
    target = math.log(seconds)
    best = 0
    best_gap = abs(target - _UNIT_LOGSECS[0])
    for i in range(1, len(_UNIT_LOGSECS)):
        gap = abs(target - _UNIT_LOGSECS[i])
        if gap < best_gap:
            best, best_gap = i, gap
    return UNIT_ORDER[best]


def circular_distance(a: str, b: str, space: LabelSpace) -> int:
    """Minimal number of ring steps between two labels, either direction."""
    if space.topology is not Topology.CIRCULAR:
        raise ValueError(f"{space.dimension.value} is not a circular space")
    i, j = space.index(a), space.index(b)
    n = len(space)
    d = abs(i - j)
    return min(d, n - d)


def linear_distance(a: str, b: str, space: LabelSpace) -> int:
    """Absolute rank difference between two labels on an ordered scale."""
    if space.topology is not Topology.LOG_LINEAR:
        raise ValueError(f"{space.dimension.value} is not a log-linear space")
    return abs(space.index(a) - space.index(b))


def render_manifest() -> str:
    """Label inventory manifest: one ``[dimension]`` section per dimension,
    one label per line, in canonical order. Emitted by the CLI so other
    tools can verify inventories bit-exactly."""
    lines = []
    for dim in TemporalDimension:
        space = _SPACES[dim]
        lines.append(f"[{dim.value}]")
        lines.extend(space.labels)
        lines.append("")
    return "\n".join(lines)
