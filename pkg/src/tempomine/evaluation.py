"""Rank-distance evaluation and prediction-distribution export.

The intrinsic metric is the absolute rank difference between a model's
top label and the gold label: positional on ordered (log-linear) spaces,
minimal ring distance on circular ones. Hierarchy has no ordinal
structure, so it is scored by plain accuracy instead.
"""

import json
from dataclasses import dataclass
from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from .label_space import (
    TemporalDimension,
    Topology,
    circular_distance,
    label_space,
    linear_distance,
)
from .model import TrainConfig, predict_value_distribution
from .sequences import Vocabulary

__all__ = [
    "EvalInstance",
    "rank_distance",
    "mean_distance",
    "normalized_mean_distance",
    "accuracy_at_zero",
    "DimensionReport",
    "evaluate",
    "report_csv_lines",
    "distribution_csv_lines",
    "read_eval_instances",
    "eval_instance_to_json_dict",
]


@dataclass(frozen=True)
class EvalInstance:
    event_tokens: tuple[str, ...]
    verb_index: int
    dimension: TemporalDimension
    gold_label: str

    def __post_init__(self) -> None:
        if self.gold_label not in label_space(self.dimension):
            raise ValueError(
                f"gold label {self.gold_label!r} not in the {self.dimension.value} space"
            )


def eval_instance_to_json_dict(inst: EvalInstance) -> dict:
    return {
        "event_tokens": list(inst.event_tokens),
        "verb_index": inst.verb_index,
        "dimension": inst.dimension.value,
        "gold_label": inst.gold_label,
    }


def read_eval_instances(lines: Iterable[str]) -> list[EvalInstance]:
    instances = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        obj = json.loads(line)
        instances.append(
            EvalInstance(
                event_tokens=tuple(obj["event_tokens"]),
                verb_index=int(obj["verb_index"]),
                dimension=TemporalDimension(obj["dimension"]),
                gold_label=obj["gold_label"],
            )
        )
    return instances


def rank_distance(pred: str, gold: str, dimension: TemporalDimension) -> int:
    """Rank difference between prediction and gold on an ordinal space."""
    space = label_space(dimension)
    if space.topology is Topology.CATEGORICAL:
        raise ValueError(f"{dimension.value} has no ordinal structure to rank")
    if space.topology is Topology.CIRCULAR:
        return circular_distance(pred, gold, space)
    return linear_distance(pred, gold, space)


def mean_distance(
    predictions: Sequence[str],
    golds: Sequence[str],
    dimension: TemporalDimension,
) -> float:
    if not predictions or len(predictions) != len(golds):
        raise ValueError("predictions and golds must be non-empty and aligned")
    return float(np.mean([rank_distance(p, g, dimension) for p, g in zip(predictions, golds)]))


def normalized_mean_distance(
    predictions: Sequence[str],
    golds: Sequence[str],
    dimension: TemporalDimension,
) -> float:
    """Mean distance divided by the dimension's label count; lies in [0, 1)."""
    return mean_distance(predictions, golds, dimension) / len(label_space(dimension))


def accuracy_at_zero(predictions: Sequence[str], golds: Sequence[str]) -> float:
    if not predictions or len(predictions) != len(golds):
        raise ValueError("predictions and golds must be non-empty and aligned")
    return float(np.mean([p == g for p, g in zip(predictions, golds)]))


@dataclass(frozen=True)
class DimensionReport:
    dimension: TemporalDimension
    count: int
    mean_distance: float | None  # None for categorical dimensions
    normalized: float | None
    accuracy_at_0: float


def _predict_label(
    params: Mapping[str, np.ndarray],
    cfg: TrainConfig,
    vocab: Vocabulary,
    inst: EvalInstance,
) -> str:
    dist = predict_value_distribution(
        params, cfg, vocab, inst.event_tokens, inst.verb_index, inst.dimension
    )
    # np.argmax takes the first maximum, so ties break toward lower index.
    return label_space(inst.dimension).labels[int(np.argmax(dist))]


def evaluate(
    params: Mapping[str, np.ndarray],
    cfg: TrainConfig,
    vocab: Vocabulary,
    instances: Sequence[EvalInstance],
) -> list[DimensionReport]:
    """Per-dimension reports in dimension declaration order."""
    if not instances:
        raise ValueError("evaluation requires at least one instance")
    by_dim: dict[TemporalDimension, list[tuple[str, str]]] = {}
    for inst in instances:
        pred = _predict_label(params, cfg, vocab, inst)
        by_dim.setdefault(inst.dimension, []).append((pred, inst.gold_label))

    reports = []
    for dim in TemporalDimension:
        if dim not in by_dim:
            continue
        preds = [p for p, _ in by_dim[dim]]
        golds = [g for _, g in by_dim[dim]]
        acc = accuracy_at_zero(preds, golds)
        if label_space(dim).topology is Topology.CATEGORICAL:
            reports.append(DimensionReport(dim, len(preds), None, None, acc))
        else:
            reports.append(
                DimensionReport(
                    dim, len(preds),
                    mean_distance(preds, golds, dim),
                    normalized_mean_distance(preds, golds, dim),
                    acc,
                )
            )
    return reports


def report_csv_lines(reports: Sequence[DimensionReport]) -> list[str]:
    lines = ["dimension,count,mean_distance,normalized_mean_distance,accuracy_at_0"]
    for r in reports:
        md = "" if r.mean_distance is None else repr(r.mean_distance)
        nd = "" if r.normalized is None else repr(r.normalized)
        lines.append(f"{r.dimension.value},{r.count},{md},{nd},{r.accuracy_at_0!r}")
    return lines


def distribution_csv_lines(
    params: Mapping[str, np.ndarray],
    cfg: TrainConfig,
    vocab: Vocabulary,
    queries: Sequence[tuple[Sequence[str], int, TemporalDimension]],
) -> list[str]:
    """Rows (event id, dimension, label, probability) in query order.

    Each query block spans that dimension's labels and its probabilities
    sum to 1.
    """
    lines = ["event_id,dimension,label,probability"]
    for event_id, (tokens, verb_index, dimension) in enumerate(queries):
        dist = predict_value_distribution(params, cfg, vocab, tokens, verb_index, dimension)
        for label, prob in zip(label_space(dimension).labels, dist):
            lines.append(f"{event_id},{dimension.value},{label},{float(prob)!r}")
    return lines
