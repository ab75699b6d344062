"""Command-line pipeline: mine tuples, build datasets, train, evaluate.

Every subcommand is a pure function of its inputs, flags, and seed.
Output files start with a '#'-commented echo of the effective
configuration (no timestamps), so any artifact can be reproduced from
its own header. Environment variables are never consulted.

Exit codes:
    0  success
    2  usage or configuration error (bad flag, bad config file, bad value)
    3  a required input file is missing
    4  an input file violates its schema
    5  training diverged (loss passed the abort threshold)
    1  any other failure
On failure a single machine-readable line is printed to stderr:
    ERROR code=<exit code> <message>
"""

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .evaluation import (
    distribution_csv_lines,
    evaluate,
    read_eval_instances,
    report_csv_lines,
)
from .extraction import (
    TemporalTuple,
    extract_sentence,
    read_tuples_jsonl,
    write_tuples_jsonl,
)
from .label_space import TemporalDimension, label_space, render_manifest
from .model import (
    DivergenceError,
    TrainConfig,
    gradient_check,
    load_checkpoint,
    predict_value_distribution,
    save_checkpoint,
    train,
)
from .seeding import stream_rng
from .sequences import (
    MaskingConfig,
    TrainingRecord,
    Vocabulary,
    apply_masking,
    build_sequence,
    build_vocabulary,
    read_records_binary,
    read_records_jsonl,
    write_records_binary,
    write_records_jsonl,
)
from .srl_ingest import SchemaError, SrlSentence, read_corpus
from .targets import (
    label_count_tables,
    soft_target,
    subsample_tuples,
    weight_table,
)

__all__ = ["main", "PipelineConfig", "load_config_file"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_SCHEMA = 4
EXIT_DIVERGED = 5


class UsageError(ValueError):
    """Bad flags or configuration; maps to exit code 2."""


@dataclass
class PipelineConfig:
    """Every tunable knob, loadable from a flat key=value file.

    Flags override file values; the am preset forces p_event to 0.6
    unless an explicit p_event flag is given.
    """

    seed: int = 0
    workers: int = 1
    p_mask: float = 0.6
    p_dim: float = 0.1
    p_event: float = 0.15
    am: bool = False
    ms: bool = False
    norm_mode: str = "normalize"
    format: str = "jsonl"
    min_count: int = 1
    balance: bool = False
    targets: str = "soft"
    sigma_log: float = 4.0
    sigma_circular: float = 0.5
    max_len: int = 128
    d_model: int = 64
    n_layers: int = 2
    n_heads: int = 4
    ff_dim: int = 128
    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 5
    val_fraction: float = 0.0

    def validate(self) -> None:
        for name in ("p_mask", "p_dim", "p_event", "val_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise UsageError(f"{name} must lie in [0, 1], got {v}")
        if self.norm_mode not in ("normalize", "softmax"):
            raise UsageError(f"norm_mode must be 'normalize' or 'softmax', got {self.norm_mode!r}")
        if self.format not in ("jsonl", "binary"):
            raise UsageError(f"format must be 'jsonl' or 'binary', got {self.format!r}")
        if self.targets not in ("soft", "hard"):
            raise UsageError(f"targets must be 'soft' or 'hard', got {self.targets!r}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        for name in ("min_count", "max_len", "d_model", "n_layers", "n_heads",
                     "ff_dim", "batch_size", "epochs"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.learning_rate <= 0 or self.sigma_log <= 0 or self.sigma_circular <= 0:
            raise UsageError("learning_rate and sigmas must be positive")
        if self.d_model % self.n_heads != 0:
            raise UsageError("d_model must be divisible by n_heads")


_CONFIG_FIELDS = {
    f.name: (f.type if isinstance(f.type, str) else f.type.__name__)
    for f in dataclasses.fields(PipelineConfig)
}


def _coerce(name: str, raw: str):
    kind = _CONFIG_FIELDS[name]
    if kind == "bool":
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise UsageError(f"config key {name} expects a boolean, got {raw!r}")
    if kind == "int":
        try:
            return int(raw)
        except ValueError as exc:
            raise UsageError(f"config key {name} expects an integer, got {raw!r}") from exc
    if kind == "float":
        try:
            return float(raw)
        except ValueError as exc:
            raise UsageError(f"config key {name} expects a number, got {raw!r}") from exc
    return raw


def load_config_file(path: str) -> dict:
    """Flat key=value lines; '#' comments and blank lines are ignored.

    Unknown keys are rejected rather than silently dropped.
    """
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise UsageError(f"{path}:{line_no}: expected key=value, got {stripped!r}")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            if key not in _CONFIG_FIELDS:
                raise UsageError(f"{path}:{line_no}: unknown config key {key!r}")
            values[key] = _coerce(key, raw.strip())
    return values


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """defaults < config file < flags; --am preset applied before --p-event."""
    cfg = PipelineConfig()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            setattr(cfg, key, value)

    flag_map = {
        "seed": "seed", "workers": "workers", "p_mask": "p_mask", "p_dim": "p_dim",
        "norm_mode": "norm_mode", "format": "format", "min_count": "min_count",
        "targets": "targets", "epochs": "epochs", "batch_size": "batch_size",
        "learning_rate": "learning_rate", "val_fraction": "val_fraction",
        "max_len": "max_len", "d_model": "d_model", "n_layers": "n_layers",
        "n_heads": "n_heads", "ff_dim": "ff_dim",
    }
    for attr, field_name in flag_map.items():
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, field_name, value)
    if getattr(args, "am", False):
        cfg.am = True
    if getattr(args, "ms", False):
        cfg.ms = True
    if getattr(args, "balance", False):
        cfg.balance = True
    if cfg.am and getattr(args, "p_event", None) is None:
        cfg.p_event = 0.6
    elif getattr(args, "p_event", None) is not None:
        cfg.p_event = args.p_event
    cfg.validate()
    return cfg


def config_echo(subcommand: str, cfg: PipelineConfig) -> list[str]:
    """Header lines reproducing the run: subcommand plus sorted knobs.

    Paths are deliberately not echoed, so an artifact's bytes do not
    depend on where its inputs happened to live.
    """
    lines = [f"tempomine {subcommand}"]
    for f in sorted(dataclasses.fields(cfg), key=lambda f: f.name):
        value = getattr(cfg, f.name)
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name}={value}")
    return lines


def _open_input(path: str):
    try:
        return open(path, encoding="utf-8")
    except FileNotFoundError:
        raise


def _chunks(items: list, n: int) -> list[list]:
    """n contiguous chunks covering items in order (some may be empty)."""
    if n <= 1 or len(items) <= 1:
        return [items]
    size = (len(items) + n - 1) // n
    return [items[i : i + size] for i in range(0, len(items), size)]


def _extract_worker(sentences: list[SrlSentence]) -> list[TemporalTuple]:
    out: list[TemporalTuple] = []
    for sentence in sentences:
        out.extend(extract_sentence(sentence))
    return out


def cmd_extract(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    with _open_input(args.input) as fh:
        reader = read_corpus(fh)
        sentences = list(reader)
    if args.strict and reader.records_skipped:
        line_no, msg = reader.errors[0]
        raise SchemaError(f"{args.input}:{line_no}: {msg}")

    chunks = _chunks(sentences, cfg.workers)
    if cfg.workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunk_results = list(pool.map(_extract_worker, chunks))
    else:
        chunk_results = [_extract_worker(c) for c in chunks]
    tuples = [t for chunk in chunk_results for t in chunk]

    header = config_echo("extract", cfg)
    write_tuples_jsonl(args.output, tuples, header)
    print(
        f"extracted {len(tuples)} tuples from {reader.records_read} sentences "
        f"({reader.records_skipped} records skipped)"
    )
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    tuples = read_tuples_jsonl(args.input)
    tables = label_count_tables(tuples)
    lines = ["dimension,label,count,weight"]
    for dim in TemporalDimension:
        if dim not in tables:
            continue
        weights = weight_table(tables[dim])
        for label, count in tables[dim].items():
            lines.append(f"{dim.value},{label},{count},{weights[label]!r}")
    header = config_echo("stats", cfg)
    _write_text(args.output, header, lines)
    return EXIT_OK


def _write_text(path: str | None, header_lines: list[str], lines: list[str]) -> None:
    body = "".join(f"# {line}\n" for line in header_lines)
    body += "".join(f"{line}\n" for line in lines)
    if path is None:
        sys.stdout.write(body)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(body)


def _context_lookup(corpus_path: str) -> dict[tuple[str, int], tuple[tuple[str, ...], tuple[str, ...]]]:
    lookup: dict[tuple[str, int], tuple[tuple[str, ...], tuple[str, ...]]] = {}
    with _open_input(corpus_path) as fh:
        for sentence in read_corpus(fh):
            lookup[(sentence.doc_id, sentence.sent_index)] = (
                sentence.left_context or (),
                sentence.right_context or (),
            )
    return lookup


def _mask_worker(payload) -> list[TrainingRecord]:
    vocab, mask_cfg, seed, max_len, items = payload
    records = []
    for ordinal, tup, weight, left, right in items:
        built = build_sequence(tup, vocab, left, right, max_length=max_len)
        rng = stream_rng(seed, "masking", ordinal)
        records.append(apply_masking(built, mask_cfg, vocab, rng, weight))
    return records


def cmd_build_dataset(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if cfg.ms and not args.corpus:
        raise UsageError("--ms needs --corpus to resolve neighbor sentences")
    tuples = read_tuples_jsonl(args.input)
    if not tuples:
        raise UsageError(f"no tuples in {args.input}; nothing to build")

    if cfg.balance:
        kept = subsample_tuples(tuples, cfg.seed)
    else:
        kept = list(enumerate(tuples))

    kept_tuples = [t for _, t in kept]
    token_streams = [t.event_tokens for t in kept_tuples]
    token_streams += [t.arg_tmp_event_tokens for t in kept_tuples if t.arg_tmp_event_tokens]

    contexts: dict = {}
    if cfg.ms:
        contexts = _context_lookup(args.corpus)
        for t in kept_tuples:
            left, right = contexts.get((t.provenance[0], t.provenance[1]), ((), ()))
            if left:
                token_streams.append(left)
            if right:
                token_streams.append(right)

    vocab = build_vocabulary(token_streams, min_count=cfg.min_count)

    tables = label_count_tables(kept_tuples)
    weights = {dim: weight_table(counts) for dim, counts in tables.items()}

    mask_cfg = MaskingConfig(
        p_mask=cfg.p_mask, p_dim=cfg.p_dim, p_event=cfg.p_event,
        multi_sentence=cfg.ms, sigma_log=cfg.sigma_log,
        sigma_circular=cfg.sigma_circular, norm_mode=cfg.norm_mode,
        hard_targets=(cfg.targets == "hard"),
    )

    items = []
    for ordinal, t in kept:
        left, right = ((), ())
        if cfg.ms:
            left, right = contexts.get((t.provenance[0], t.provenance[1]), ((), ()))
        items.append((ordinal, t, weights[t.dimension][t.value], left, right))

    chunks = _chunks(items, cfg.workers)
    payloads = [(vocab, mask_cfg, cfg.seed, cfg.max_len, chunk) for chunk in chunks]
    if cfg.workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunk_results = list(pool.map(_mask_worker, payloads))
    else:
        chunk_results = [_mask_worker(p) for p in payloads]
    records = [r for chunk in chunk_results for r in chunk]

    header = config_echo("build-dataset", cfg)
    vocab_path = args.vocab_out or args.output + ".vocab.tsv"
    _write_text(vocab_path, header, vocab.to_tsv_lines())
    if cfg.format == "binary":
        write_records_binary(args.output, records, header)
    else:
        write_records_jsonl(args.output, records, header)
    print(f"built {len(records)} records over a {len(vocab)}-token vocabulary")
    return EXIT_OK


def _read_records(path: str) -> list[TrainingRecord]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == b"TMDS":
        return read_records_binary(path)
    return read_records_jsonl(path)


def _train_config(cfg: PipelineConfig) -> TrainConfig:
    return TrainConfig(
        d_model=cfg.d_model, n_layers=cfg.n_layers, n_heads=cfg.n_heads,
        ff_dim=cfg.ff_dim, max_len=cfg.max_len,
        learning_rate=cfg.learning_rate, batch_size=cfg.batch_size,
        epochs=cfg.epochs, seed=cfg.seed,
    )


def cmd_train(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    records = _read_records(args.input)
    if not records:
        raise UsageError(f"no records in {args.input}")
    vocab = _read_vocab(args.vocab)

    if cfg.val_fraction > 0.0:
        train_records, val_records = [], []
        for i, rec in enumerate(records):
            if stream_rng(cfg.seed, "split", i).random() < cfg.val_fraction:
                val_records.append(rec)
            else:
                train_records.append(rec)
    else:
        train_records, val_records = records, []
    if not train_records:
        raise UsageError("validation split consumed every record")

    train_cfg = _train_config(cfg)
    params, log = train(train_records, train_cfg, vocab, val_records)

    header = config_echo("train", cfg)
    save_checkpoint(args.output, params, train_cfg, header)
    log_lines = ["epoch,split,loss,mean_distance"] + [row.as_csv() for row in log]
    _write_text(args.loss_log or args.output + ".loss.csv", header, log_lines)
    final = log[-1].loss if log else float("nan")
    print(f"trained {cfg.epochs} epochs on {len(train_records)} records; final loss {final:.4f}")
    return EXIT_OK


def _read_vocab(path: str) -> Vocabulary:
    with _open_input(path) as fh:
        return Vocabulary.from_tsv_lines(fh)


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    with _open_input(args.input) as fh:
        instances = read_eval_instances(fh)
    if not instances:
        raise UsageError(f"no evaluation instances in {args.input}")
    params, train_cfg = load_checkpoint(args.model)
    vocab = _read_vocab(args.vocab)
    reports = evaluate(params, train_cfg, vocab, instances)
    header = config_echo("eval", cfg)
    _write_text(args.output, header, report_csv_lines(reports))
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    params, train_cfg = load_checkpoint(args.model)
    vocab = _read_vocab(args.vocab)
    header = config_echo("predict", cfg)

    if args.input:
        with _open_input(args.input) as fh:
            queries = []
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                obj = json.loads(line)
                queries.append(
                    (obj["event_tokens"], int(obj["verb_index"]),
                     TemporalDimension(obj["dimension"]))
                )
        lines = distribution_csv_lines(params, train_cfg, vocab, queries)
        _write_text(args.output, header, lines)
        return EXIT_OK

    if not args.event or args.verb_index is None or not args.dimension:
        raise UsageError("predict needs --input or all of --event/--verb-index/--dimension")
    dimension = _parse_dimension(args.dimension)
    tokens = args.event.split()
    if not 0 <= args.verb_index < len(tokens):
        raise UsageError("verb index outside the event tokens")
    dist = predict_value_distribution(
        params, train_cfg, vocab, tokens, args.verb_index, dimension
    )
    lines = ["label,probability"]
    for label, prob in zip(label_space(dimension).labels, dist):
        lines.append(f"{label},{float(prob)!r}")
    _write_text(args.output, header, lines)
    return EXIT_OK


def _parse_dimension(name: str) -> TemporalDimension:
    try:
        return TemporalDimension(name)
    except ValueError:
        valid = ", ".join(d.value for d in TemporalDimension)
        raise UsageError(f"unknown dimension {name!r}; expected one of: {valid}")


def cmd_grad_check(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    results = gradient_check(seed=cfg.seed, coords_per_config=args.coords)
    worst = max(results, key=lambda r: r.rel_error)
    print(f"checked {len(results)} coordinates; worst relative error "
          f"{worst.rel_error:.3e} at {worst.key}{list(worst.index)}")
    if worst.rel_error >= 1e-4:
        print(f"ERROR code=1 gradient check failed at {worst.key}", file=sys.stderr)
        return 1
    return EXIT_OK


def cmd_dump_target(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    dimension = _parse_dimension(args.dimension)
    space = label_space(dimension)
    if args.label not in space:
        raise UsageError(f"label {args.label!r} not in the {dimension.value} space")
    y = soft_target(
        dimension, args.label,
        sigma_log=cfg.sigma_log, sigma_circular=cfg.sigma_circular,
        mode=cfg.norm_mode,
    )
    header = config_echo("dump-target", cfg)
    lines = ["label,probability"]
    for label, prob in zip(space.labels, y):
        lines.append(f"{label},{float(prob)!r}")
    _write_text(args.output, header, lines)
    return EXIT_OK


def cmd_manifest(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    header = config_echo("manifest", cfg)
    _write_text(args.output, header, render_manifest().splitlines())
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        print(f"ERROR code={EXIT_USAGE} {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


_EXIT_CODE_HELP = (
    "exit codes: 0 success; 2 usage or config error; 3 missing input file; "
    "4 input schema violation; 5 training divergence; 1 other failure"
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags win over it")
    p.add_argument("--seed", type=int, help="root seed for all named random streams")
    p.add_argument("--workers", type=int, help="worker processes (order-preserving)")
    p.add_argument("--p-mask", dest="p_mask", type=float, help="value-slot masking probability")
    p.add_argument("--p-dim", dest="p_dim", type=float, help="dimension-slot masking probability")
    p.add_argument("--p-event", dest="p_event", type=float, help="per-event-token masking probability")
    p.add_argument("--am", action="store_true", help="all-event masking preset: p-event 0.6 unless --p-event is given")
    p.add_argument("--ms", action="store_true", help="include neighbor-sentence context around the event")
    p.add_argument("--norm-mode", dest="norm_mode", choices=("normalize", "softmax"),
                   help="soft-target normalization mode")
    p.add_argument("--format", choices=("jsonl", "binary"), help="dataset file format")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempomine", description=__doc__.splitlines()[0],
                     epilog=_EXIT_CODE_HELP)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="mine temporal tuples from an SRL corpus",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--input", required=True, help="SRL corpus (JSON Lines)")
    p.add_argument("--output", required=True, help="tuple file to write (JSON Lines)")
    p.add_argument("--strict", action="store_true",
                   help="fail with exit 4 on the first malformed record instead of skipping")
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="per-dimension label counts and instance weights",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--input", required=True, help="tuple file")
    p.add_argument("--output", help="CSV path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("build-dataset", help="masked training records from tuples",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--input", required=True, help="tuple file")
    p.add_argument("--output", required=True, help="dataset file to write")
    p.add_argument("--corpus", help="source corpus, for --ms context lookup")
    p.add_argument("--vocab-out", dest="vocab_out", help="vocabulary TSV path (default: <output>.vocab.tsv)")
    p.add_argument("--balance", action="store_true",
                   help="subsample so non-frequency dimensions match the smallest one")
    p.add_argument("--min-count", dest="min_count", type=int, help="vocabulary frequency cutoff")
    p.add_argument("--targets", choices=("soft", "hard"), help="value-slot target kind")
    p.add_argument("--max-len", dest="max_len", type=int, help="maximum sequence length")
    _add_common(p)
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("train", help="train the encoder on a dataset",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--input", required=True, help="dataset file (jsonl or binary)")
    p.add_argument("--vocab", required=True, help="vocabulary TSV")
    p.add_argument("--output", required=True, help="checkpoint path to write")
    p.add_argument("--loss-log", dest="loss_log", help="loss CSV path (default: <output>.loss.csv)")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--val-fraction", dest="val_fraction", type=float,
                   help="held-out fraction logged each epoch")
    p.add_argument("--d-model", dest="d_model", type=int)
    p.add_argument("--n-layers", dest="n_layers", type=int)
    p.add_argument("--n-heads", dest="n_heads", type=int)
    p.add_argument("--ff-dim", dest="ff_dim", type=int)
    p.add_argument("--max-len", dest="max_len", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="rank-distance report on gold-labeled events",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--input", required=True, help="evaluation instances (JSON Lines)")
    p.add_argument("--model", required=True, help="checkpoint file")
    p.add_argument("--vocab", required=True, help="vocabulary TSV")
    p.add_argument("--output", help="report CSV path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="value distribution for an event",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--model", required=True, help="checkpoint file")
    p.add_argument("--vocab", required=True, help="vocabulary TSV")
    p.add_argument("--input", help="query file (JSON Lines of event_tokens/verb_index/dimension)")
    p.add_argument("--event", help="space-separated event tokens")
    p.add_argument("--verb-index", dest="verb_index", type=int, help="verb position in --event")
    p.add_argument("--dimension", help="dimension to query")
    p.add_argument("--output", help="CSV path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("grad-check", help="analytic vs finite-difference gradients",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--coords", type=int, default=40, help="coordinates probed per config")
    _add_common(p)
    p.set_defaults(func=cmd_grad_check)

    p = sub.add_parser("dump-target", help="soft target distribution for one label",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("dimension", help="dimension name")
    p.add_argument("label", help="gold label")
    p.add_argument("--output", help="CSV path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_dump_target)

    p = sub.add_parser("manifest", help="print every dimension's label inventory",
                       epilog=_EXIT_CODE_HELP)
    p.add_argument("--output", help="path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_manifest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ERROR code={EXIT_USAGE} {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        name = exc.filename or exc
        print(f"ERROR code={EXIT_MISSING_FILE} missing input file: {name}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except (SchemaError, json.JSONDecodeError) as exc:
        print(f"ERROR code={EXIT_SCHEMA} {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except DivergenceError as exc:
        print(f"ERROR code={EXIT_DIVERGED} {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ValueError as exc:
        print(f"ERROR code={EXIT_SCHEMA} {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except Exception as exc:  # keep the machine-readable contract on any failure
        print(f"ERROR code=1 {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
