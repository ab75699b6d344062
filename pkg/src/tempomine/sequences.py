"""Token vocabulary, training-sequence template, masking, and record IO.

A mined tuple becomes one token-id sequence:

    [W1 .. [Vrb] W_verb .. Wn] [SEP] [Vrb] [Dim:d] [Val:d:v] [embedded..]

where [Vrb] is a single marker token inserted left of the verb and repeated
after [SEP], and the embedded tail is non-empty only for hierarchy tuples.
Masking then selects the [Val] slot, the [Dim] slot, or (when neither was
selected) individual event tokens, and each selected slot goes through the
80/10/10 mask/keep/randomize branches.

Vocabulary id layout: 0..3 are [PAD]/[UNK]/[MASK]/[SEP], corpus words
follow from id 4 ordered by descending count then token, and the reserved
block ([Vrb], every [Dim:*], every [Val:*:*] grouped by dimension) sits
above the words. Random replacement draws word ids only.
"""

import json
import struct
from dataclasses import dataclass
from collections import Counter
from collections.abc import Iterable, Sequence

import numpy as np

from .extraction import TemporalTuple
from .label_space import TemporalDimension, label_space
from .targets import (
    DEFAULT_SIGMA_CIRCULAR,
    DEFAULT_SIGMA_LOG,
    hard_target,
    soft_target,
)

__all__ = [
    "PAD_TOKEN", "UNK_TOKEN", "MASK_TOKEN", "SEP_TOKEN", "VERB_MARKER",
    "PAD_ID", "UNK_ID", "MASK_ID", "SEP_ID",
    "dim_token", "val_token",
    "Vocabulary", "build_vocabulary",
    "BuiltSequence", "build_sequence",
    "MaskingConfig", "MaskTarget", "TrainingRecord", "apply_masking",
    "record_to_json_dict", "record_from_json_dict",
    "write_records_jsonl", "read_records_jsonl",
    "write_records_binary", "read_records_binary",
    "MAX_SEQUENCE_LENGTH",
]

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
MASK_TOKEN = "[MASK]"
SEP_TOKEN = "[SEP]"
VERB_MARKER = "[Vrb]"

PAD_ID = 0
UNK_ID = 1
MASK_ID = 2
SEP_ID = 3

MAX_SEQUENCE_LENGTH = 128

_DIMENSIONS = tuple(TemporalDimension)


def dim_token(dimension: TemporalDimension) -> str:
    return f"[Dim:{dimension.value}]"


def val_token(dimension: TemporalDimension, label: str) -> str:
    return f"[Val:{dimension.value}:{label}]"


@dataclass(frozen=True)
class Vocabulary:
    """Immutable token <-> id tables with the reserved block on top."""

    id_to_token: tuple[str, ...]
    token_to_id: dict[str, int]
    word_id_start: int
    word_id_end: int  # exclusive: [word_id_start, word_id_end) are corpus words

    def __len__(self) -> int:
        return len(self.id_to_token)

    def encode_word(self, token: str) -> int:
        """Corpus text maps to word ids only; anything else becomes [UNK]."""
        wid = self.token_to_id.get(token, UNK_ID)
        if self.word_id_start <= wid < self.word_id_end:
            return wid
        return UNK_ID

    @property
    def verb_marker_id(self) -> int:
        return self.token_to_id[VERB_MARKER]

    def dim_id(self, dimension: TemporalDimension) -> int:
        return self.token_to_id[dim_token(dimension)]

    def val_id(self, dimension: TemporalDimension, label: str) -> int:
        return self.token_to_id[val_token(dimension, label)]

    def val_block(self, dimension: TemporalDimension) -> tuple[int, tuple[str, ...]]:
        """(first id, labels) of the dimension's contiguous [Val] id block."""
        labels = label_space(dimension).labels
        return self.val_id(dimension, labels[0]), labels

    def to_tsv_lines(self) -> list[str]:
        return [f"{tok}\t{i}" for i, tok in enumerate(self.id_to_token)]

    @classmethod
    def from_tsv_lines(cls, lines: Iterable[str]) -> "Vocabulary":
        id_to_token: list[str] = []
        for line in lines:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            tok, _, idx = line.rpartition("\t")
            if int(idx) != len(id_to_token):
                raise ValueError(f"vocabulary ids must be dense, got {idx} at row {len(id_to_token)}")
            id_to_token.append(tok)
        return cls._from_tokens(tuple(id_to_token))

    @classmethod
    def _from_tokens(cls, id_to_token: tuple[str, ...]) -> "Vocabulary":
        token_to_id = {tok: i for i, tok in enumerate(id_to_token)}
        if len(token_to_id) != len(id_to_token):
            raise ValueError("duplicate token in vocabulary")
        word_start = SEP_ID + 1
        word_end = token_to_id[VERB_MARKER]
        return cls(id_to_token, token_to_id, word_start, word_end)


def _reserved_tokens() -> list[str]:
    reserved = [VERB_MARKER]
    reserved.extend(dim_token(d) for d in _DIMENSIONS)
    for d in _DIMENSIONS:
        reserved.extend(val_token(d, lab) for lab in label_space(d).labels)
    return reserved


def build_vocabulary(
    token_sequences: Iterable[Sequence[str]],
    min_count: int = 1,
) -> Vocabulary:
    """Count corpus words and lay out the full id space.

    Words ordered by (-count, token); bracketed surfaces that collide
    with the special-token format are dropped from the word list.
    """
    counts: Counter[str] = Counter()
    for seq in token_sequences:
        counts.update(seq)
    words = sorted(
        (tok for tok, c in counts.items()
         if c >= min_count and not (tok.startswith("[") and tok.endswith("]"))),
        key=lambda tok: (-counts[tok], tok),
    )
    id_to_token = [PAD_TOKEN, UNK_TOKEN, MASK_TOKEN, SEP_TOKEN]
    id_to_token.extend(words)
    id_to_token.extend(_reserved_tokens())
    return Vocabulary._from_tokens(tuple(id_to_token))


@dataclass(frozen=True)
class BuiltSequence:
    """Token ids plus the slot geometry masking needs."""

    ids: tuple[int, ...]
    val_position: int
    dim_position: int
    event_positions: tuple[int, ...]  # maskable event word slots, verb surface included
    dimension: TemporalDimension
    gold_label: str


def _truncate_event(tokens: list[str], verb_index: int, budget: int) -> tuple[list[str], int]:
    """Drop event tokens farthest from the verb until len <= budget.

    Equidistant candidates lose from the right. The verb survives.
    """
    keep = list(range(len(tokens)))
    while len(keep) > budget:
        best = None
        best_dist = -1
        for pos in keep:
            if pos == verb_index:
                continue
            dist = abs(pos - verb_index)
            if dist > best_dist or (dist == best_dist and pos > best):
                best, best_dist = pos, dist
        if best is None:
            break
        keep.remove(best)
    new_tokens = [tokens[i] for i in keep]
    new_verb = keep.index(verb_index)
    return new_tokens, new_verb


def build_sequence(
    tup: TemporalTuple,
    vocab: Vocabulary,
    left_context: Sequence[str] = (),
    right_context: Sequence[str] = (),
    max_length: int = MAX_SEQUENCE_LENGTH,
) -> BuiltSequence:
    """Assemble the template for one tuple.

    Over-length sequences lose context tokens first (right context from
    its far end, then left context from its far end), then event tokens
    farthest from the verb. The verb, its marker, and the tail block are
    never dropped.
    """
    if not tup.event_tokens:
        raise ValueError("cannot build a sequence from an empty event")
    if not 0 <= tup.verb_index < len(tup.event_tokens):
        raise ValueError("verb index outside event tokens")

    space = label_space(tup.dimension)
    if tup.value not in space:
        raise ValueError(f"label {tup.value!r} not in {tup.dimension.value} space")

    tail_words = list(tup.arg_tmp_event_tokens)
    # [SEP] [Vrb] [Dim] [Val] plus the embedded phrase
    tail_len = 4 + len(tail_words)
    event_tokens = list(tup.event_tokens)
    verb_index = tup.verb_index
    left = list(left_context)
    right = list(right_context)

    # Event part carries one marker token in addition to its words.
    def total() -> int:
        return len(left) + len(event_tokens) + 1 + len(right) + tail_len

    while total() > max_length and right:
        right.pop()
    while total() > max_length and left:
        left.pop(0)
    event_budget = max_length - tail_len - 1
    if event_budget < 1:
        # Trim the embedded tail from its right before giving up.
        overflow = tail_len - (max_length - 2)
        if overflow > len(tail_words):
            raise ValueError("maximum sequence length cannot hold the template")
        tail_words = tail_words[: len(tail_words) - overflow]
        tail_len = 4 + len(tail_words)
        event_budget = max_length - tail_len - 1
    if len(event_tokens) > event_budget:
        event_tokens, verb_index = _truncate_event(event_tokens, verb_index, event_budget)

    ids: list[int] = []
    event_positions: list[int] = []
    for tok in left:
        ids.append(vocab.encode_word(tok))
    for i, tok in enumerate(event_tokens):
        if i == verb_index:
            ids.append(vocab.verb_marker_id)
        event_positions.append(len(ids))
        ids.append(vocab.encode_word(tok))
    for tok in right:
        ids.append(vocab.encode_word(tok))
    ids.append(SEP_ID)
    ids.append(vocab.verb_marker_id)
    dim_position = len(ids)
    ids.append(vocab.dim_id(tup.dimension))
    val_position = len(ids)
    ids.append(vocab.val_id(tup.dimension, tup.value))
    for tok in tail_words:
        ids.append(vocab.encode_word(tok))

    assert len(ids) <= max_length
    return BuiltSequence(
        ids=tuple(ids),
        val_position=val_position,
        dim_position=dim_position,
        event_positions=tuple(event_positions),
        dimension=tup.dimension,
        gold_label=tup.value,
    )


@dataclass(frozen=True)
class MaskingConfig:
    p_mask: float = 0.6
    p_dim: float = 0.1
    p_event: float = 0.15
    multi_sentence: bool = False
    sigma_log: float = DEFAULT_SIGMA_LOG
    sigma_circular: float = DEFAULT_SIGMA_CIRCULAR
    norm_mode: str = "normalize"
    # One-hot [Val] targets instead of smoothed ones; the masking draws
    # are identical either way, so paired runs differ only in targets.
    hard_targets: bool = False

    def __post_init__(self) -> None:
        for name in ("p_mask", "p_dim", "p_event"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class MaskTarget:
    """One selected slot: original id for restoration, soft vector if [Val]."""

    position: int
    token_id: int
    soft: tuple[float, ...] | None = None


@dataclass(frozen=True)
class TrainingRecord:
    input_ids: tuple[int, ...]
    targets: tuple[MaskTarget, ...]
    weight: float
    dimension: TemporalDimension
    val_position: int

    @property
    def mask_positions(self) -> tuple[int, ...]:
        return tuple(t.position for t in self.targets)


def apply_masking(
    built: BuiltSequence,
    cfg: MaskingConfig,
    vocab: Vocabulary,
    rng: np.random.Generator,
    weight: float = 1.0,
) -> TrainingRecord:
    """Select slots and run each through the 80/10/10 branches.

    Draw order is pinned for reproducibility: the [Val] draw, the [Dim]
    draw, per-event-token draws in position order (only when both slot
    draws missed), then one branch draw per selected position ascending
    (plus one id draw on the randomize branch). Random ids come from the
    word range only, never the special block.
    """
    selected: list[int] = []
    if rng.random() < cfg.p_mask:
        selected.append(built.val_position)
    if rng.random() < cfg.p_dim:
        selected.append(built.dim_position)
    if not selected:
        for pos in built.event_positions:
            if rng.random() < cfg.p_event:
                selected.append(pos)
    selected.sort()

    ids = list(built.ids)
    targets: list[MaskTarget] = []
    for pos in selected:
        original = ids[pos]
        if pos == built.val_position:
            if cfg.hard_targets:
                soft = hard_target(built.dimension, built.gold_label)
            else:
                soft = soft_target(
                    built.dimension, built.gold_label,
                    sigma_log=cfg.sigma_log, sigma_circular=cfg.sigma_circular,
                    mode=cfg.norm_mode,
                )
            target = MaskTarget(pos, original, tuple(float(v) for v in soft))
        else:
            target = MaskTarget(pos, original, None)
        targets.append(target)
        branch = rng.random()
        if branch < 0.8:
            ids[pos] = MASK_ID
        elif branch < 0.9:
            pass
        else:
            if vocab.word_id_end <= vocab.word_id_start:
                raise ValueError("vocabulary has no word ids to draw noise from")
            ids[pos] = int(rng.integers(vocab.word_id_start, vocab.word_id_end))

    return TrainingRecord(
        input_ids=tuple(ids),
        targets=tuple(targets),
        weight=float(weight),
        dimension=built.dimension,
        val_position=built.val_position,
    )


def record_to_json_dict(record: TrainingRecord) -> dict:
    return {
        "input_ids": list(record.input_ids),
        "mask_positions": list(record.mask_positions),
        "targets": [
            {
                "position": t.position,
                "token_id": t.token_id,
                "soft": list(t.soft) if t.soft is not None else None,
            }
            for t in record.targets
        ],
        "weight": record.weight,
        "dimension": record.dimension.value,
        "val_position": record.val_position,
    }


def record_from_json_dict(obj: dict) -> TrainingRecord:
    targets = tuple(
        MaskTarget(
            position=int(t["position"]),
            token_id=int(t["token_id"]),
            soft=tuple(float(x) for x in t["soft"]) if t.get("soft") is not None else None,
        )
        for t in obj["targets"]
    )
    return TrainingRecord(
        input_ids=tuple(int(i) for i in obj["input_ids"]),
        targets=targets,
        weight=float(obj["weight"]),
        dimension=TemporalDimension(obj["dimension"]),
        val_position=int(obj["val_position"]),
    )


def write_records_jsonl(path: str, records: Iterable[TrainingRecord], header_lines: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        for rec in records:
            fh.write(json.dumps(record_to_json_dict(rec), sort_keys=True))
            fh.write("\n")


def read_records_jsonl(path: str) -> list[TrainingRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            records.append(record_from_json_dict(json.loads(line)))
    return records


_BINARY_MAGIC = b"TMDS"
_BINARY_VERSION = 1


def _pack_record(record: TrainingRecord) -> bytes:
    parts = [struct.pack("<HdHH",
                         _DIMENSIONS.index(record.dimension),
                         record.weight,
                         record.val_position,
                         len(record.input_ids))]
    parts.append(struct.pack(f"<{len(record.input_ids)}I", *record.input_ids))
    parts.append(struct.pack("<H", len(record.targets)))
    for t in record.targets:
        soft = t.soft or ()
        parts.append(struct.pack("<HIBH", t.position, t.token_id, 1 if t.soft is not None else 0, len(soft)))
        if soft:
            parts.append(struct.pack(f"<{len(soft)}d", *soft))
    return b"".join(parts)


def _unpack_record(payload: bytes) -> TrainingRecord:
    off = 0
    dim_idx, weight, val_position, n_ids = struct.unpack_from("<HdHH", payload, off)
    off += struct.calcsize("<HdHH")
    input_ids = struct.unpack_from(f"<{n_ids}I", payload, off)
    off += 4 * n_ids
    (n_targets,) = struct.unpack_from("<H", payload, off)
    off += 2
    targets = []
    for _ in range(n_targets):
        position, token_id, has_soft, n_soft = struct.unpack_from("<HIBH", payload, off)
        off += struct.calcsize("<HIBH")
        soft = None
        if has_soft:
            soft = struct.unpack_from(f"<{n_soft}d", payload, off)
            off += 8 * n_soft
        targets.append(MaskTarget(position, token_id, soft))
    return TrainingRecord(
        input_ids=tuple(input_ids),
        targets=tuple(targets),
        weight=weight,
        dimension=_DIMENSIONS[dim_idx],
        val_position=val_position,
    )


def write_records_binary(path: str, records: Iterable[TrainingRecord], header_lines: Sequence[str] = ()) -> None:
    """Length-prefixed little-endian records behind a text header block."""
    header = "".join(f"# {line}\n" for line in header_lines).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_BINARY_MAGIC)
        fh.write(struct.pack("<HI", _BINARY_VERSION, len(header)))
        fh.write(header)
        for rec in records:
            payload = _pack_record(rec)
            fh.write(struct.pack("<I", len(payload)))
            fh.write(payload)


def read_records_binary(path: str) -> list[TrainingRecord]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _BINARY_MAGIC:
        raise ValueError("not a dataset file (bad magic)")
    version, header_len = struct.unpack_from("<HI", blob, 4)
    if version != _BINARY_VERSION:
        raise ValueError(f"unsupported dataset version {version}")
    off = 4 + struct.calcsize("<HI") + header_len
    records = []
    while off < len(blob):
        (length,) = struct.unpack_from("<I", blob, off)
        off += 4
        records.append(_unpack_record(blob[off:off + length]))
        off += length
    return records
