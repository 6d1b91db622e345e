"""
Command-line entry point for the dilated shapelet toolkit.

Exit codes: 0 success, 2 configuration error, 3 data error, 1 anything else.
Results go to files or stdout; diagnostics go to stderr.
"""

import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO

import numpy as np
from pydantic import ValidationError

from . import __version__, bench
from .archive import load_archive, save_archive
from .config import settings
from .core import interpret
from .core.sampler import check_seed
from .datasets import (
    SyntheticRegime,
    SyntheticSpec,
    load_tsv,
    load_unlabeled_tsv,
    make_synthetic_split,
    save_tsv,
)
from .exceptions import (
    ConfigError,
    LengthMismatchError,
    ShapeletError,
    UnknownClassError,
)
from .models.ridge import AlphaGrid
from .models.series import LabeledDataset, TimeSeries
from .models.shapelet import GenerationConfig, ShapeletBank
from .pipeline import ShapeletClassifier
from .utils.logging import setup_logging

logger = logging.getLogger(__name__)


def _int_list(text: str) -> list[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _percentile_pair(text: str) -> tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected 'p1,p2', got {text!r}")
    return values[0], values[1]


def _add_generation_flags(parser: argparse.ArgumentParser) -> None:
    defaults = settings.generation
    parser.add_argument(
        "--n-shapelets", type=int, default=None,
        help=f"number of shapelets (default {defaults.n_shapelets})",
    )
    parser.add_argument(
        "--lengths", type=_int_list, default=None,
        help=f"comma list of candidate lengths (default {','.join(map(str, defaults.lengths))})",
    )
    parser.add_argument(
        "--p-norm", type=float, default=None,
        help=f"probability of a z-normalized shapelet (default {defaults.p_norm})",
    )
    parser.add_argument(
        "--p1", type=float, default=None,
        help=f"lower threshold percentile (default {defaults.p1:g})",
    )
    parser.add_argument(
        "--p2", type=float, default=None,
        help=f"upper threshold percentile (default {defaults.p2:g})",
    )
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument(
        "--alpha-grid", type=_float_list, default=None,
        help="comma list of ridge regularization strengths",
    )


def _add_runtime_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads", type=int, default=None,
        help="worker threads (default: available cores)",
    )


def _generation_config(args: argparse.Namespace) -> GenerationConfig:
    check_seed(args.seed)
    overrides = {
        "n_shapelets": args.n_shapelets,
        "lengths": args.lengths,
        "p_norm": args.p_norm,
        "p1": args.p1,
        "p2": args.p2,
    }
    try:
        return GenerationConfig(**{k: v for k, v in overrides.items() if v is not None})
    except ValidationError as e:
        raise ConfigError(f"Invalid generation parameters: {e}")


def _alpha_grid(args: argparse.Namespace) -> Optional[AlphaGrid]:
    if args.alpha_grid is None:
        return None
    try:
        return AlphaGrid(values=sorted(args.alpha_grid))
    except ValidationError as e:
        raise ConfigError(f"Invalid alpha grid: {e}")


def _load_series(
    path: str, no_labels: bool, label_names: Optional[Sequence[str]] = None
) -> tuple[tuple[TimeSeries, ...], Optional[LabeledDataset]]:
    if no_labels:
        return load_unlabeled_tsv(path), None
    dataset = load_tsv(path, label_names=label_names)
    return dataset.series, dataset


def _open_output(path: Optional[str]) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="")


def _write_text(path: Optional[str], text: str) -> None:
    stream = _open_output(path)
    try:
        stream.write(text)
    finally:
        if stream is not sys.stdout:
            stream.close()


def cmd_fit(args: argparse.Namespace) -> int:
    config = _generation_config(args)
    dataset = load_tsv(args.train_path, for_training=True)
    classifier = ShapeletClassifier(
        config=config, seed=args.seed, alpha_grid=_alpha_grid(args), threads=args.threads
    )
    classifier.fit(dataset)
    assert classifier.bank is not None and classifier.model is not None
    digest = save_archive(args.output, classifier.bank, classifier.model)
    logger.info(f"Bank digest {digest}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    bank, model = load_archive(args.model_path)
    series, _ = _load_series(args.data_path, args.no_labels, model.label_names)
    classifier = ShapeletClassifier.from_parts(bank, model, threads=args.threads)
    scores = classifier.decision_function(series)
    labels = np.asarray(model.class_table)[np.argmax(scores, axis=1)]
    _write_text(args.output, "".join(f"{model.label_name(int(label))}\n" for label in labels))
    if args.scores:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([f"class_{model.label_name(c)}" for c in model.class_table])
        for row in scores:
            writer.writerow([repr(float(v)) for v in row])
        _write_text(args.scores, buffer.getvalue())
    logger.info(f"Predicted {len(labels)} series")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _generation_config(args)
    train = load_tsv(args.train_path, for_training=True)
    test = load_tsv(args.test_path, label_names=train.label_names)
    report = bench.evaluate(
        train,
        test,
        config,
        n_resamples=args.n_resamples,
        seed=args.seed,
        train_fraction=args.train_fraction,
        alpha_grid=_alpha_grid(args),
        threads=args.threads,
    )
    logger.info(f"Mean accuracy {report.mean:.4f} (std {report.std:.4f})")
    _write_text(args.output, interpret.dumps_json(report.to_payload()))
    return 0


def _placement_records(
    bank: ShapeletBank, shapelet_indices: Sequence[int], series: Sequence[TimeSeries]
) -> list[dict[str, Any]]:
    records = []
    for k in shapelet_indices:
        origin = bank.origins[k].model_dump() if bank.origins else None
        records.append(
            {
                "shapelet": k,
                "origin": origin,
                "placements": [
                    {"series": i, **interpret.locate_on_series(bank.shapelets[k], s).model_dump()}
                    for i, s in enumerate(series)
                ],
            }
        )
    return records


def cmd_explain(args: argparse.Namespace) -> int:
    if args.top_k < 1:
        raise ConfigError(f"--top-k must be >= 1, got {args.top_k}")
    bank, model = load_archive(args.model_path)
    class_id = model.class_for_name(args.class_label)
    if class_id is None:
        raise UnknownClassError(
            f"Unknown class {args.class_label!r}; known classes are "
            f"{[model.label_name(c) for c in model.class_table]}"
        )
    ranking = interpret.rank_shapelets(model, bank, class_id)
    summaries = interpret.global_summary(model, bank, class_id)
    series, dataset = _load_series(args.data_path, args.no_labels, model.label_names)
    for index, s in enumerate(series):
        if s.length != bank.train_length:
            raise LengthMismatchError(
                f"Series {index} has length {s.length}, expected {bank.train_length}"
            )
    top = interpret.top_shapelets(ranking, args.top_k)

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "ranking.json": interpret.dumps_json(interpret.ranking_payload(class_id, ranking)),
        "ranking.csv": interpret.ranking_csv(class_id, ranking),
        "summary.json": interpret.dumps_json(
            {"class": class_id, "groups": [s.model_dump() for s in summaries]}
        ),
        "summary.csv": interpret.summary_csv(summaries),
        "placements.json": interpret.dumps_json(
            {
                "class": class_id,
                "top_k": args.top_k,
                "shapelets": _placement_records(bank, top, series),
            }
        ),
    }
    if dataset is not None:
        files["distribution.json"] = interpret.dumps_json(
            {
                "class": class_id,
                "shapelets": [
                    interpret.feature_distribution(bank, k, dataset) for k in top
                ],
            }
        )
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(files)} explanation files to {out} (top shapelets {top})")
    return 0


def cmd_synthesize(args: argparse.Namespace) -> int:
    try:
        spec = SyntheticSpec(
            n_per_class=args.n_per_class,
            length=args.length,
            pattern_length=args.pattern_length,
            pattern_dilation=args.pattern_dilation,
            noise_std=args.noise_std,
            seed=args.seed,
            regime=args.regime,
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid synthetic dataset parameters: {e}")
    train, test = make_synthetic_split(spec, args.n_test_per_class)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    save_tsv(train, out / f"{args.name}_TRAIN.tsv")
    save_tsv(test, out / f"{args.name}_TEST.tsv")
    logger.info(
        f"Wrote {train.n_series} train and {test.n_series} test series to {out}"
    )
    return 0


def _dataset_pair(text: str) -> tuple[str, tuple[LabeledDataset, LabeledDataset]]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"Expected 'train.tsv,test.tsv', got {text!r}")
    train = load_tsv(parts[0], for_training=True)
    test = load_tsv(parts[1], label_names=train.label_names)
    name = Path(parts[0]).name.split(".")[0]
    return name, (train, test)


def cmd_sweep(args: argparse.Namespace) -> int:
    grid: dict[str, Any] = {}
    if args.n_shapelets:
        grid["n_shapelets"] = args.n_shapelets
    if args.lengths:
        grid["lengths"] = args.lengths
    if args.p_norm:
        grid["p_norm"] = args.p_norm
    if args.percentiles:
        grid["percentiles"] = args.percentiles
    base = bench.SENSITIVITY_BASELINE if args.base == "sensitivity" else GenerationConfig()
    datasets = dict(_dataset_pair(text) for text in args.datasets)
    if len(datasets) != len(args.datasets):
        raise ConfigError("Dataset names (train file stems) must be distinct")
    result = bench.sweep(
        grid,
        datasets,
        n_resamples=args.n_resamples,
        seed=args.seed,
        base=base,
        parallel=args.parallel,
        threads=args.threads,
    )
    for config_id, rank in enumerate(result.mean_ranks):
        logger.info(f"Config {config_id} mean rank {rank:.3f}: {result.configs[config_id]}")
    _write_text(args.output, bench.sweep_csv(result.records))
    return 0


def cmd_scale(args: argparse.Namespace) -> int:
    config = _generation_config(args)
    try:
        template = SyntheticSpec(n_per_class=args.n_per_class, length=args.length, seed=args.seed)
    except ValidationError as e:
        raise ConfigError(f"Invalid template dataset: {e}")
    curve = bench.scalability(
        template,
        args.axis,
        args.points,
        config,
        repeats=args.repeats,
        seed=args.seed,
        threads=args.threads,
    )
    _write_text(args.output, bench.scale_csv(curve))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name, description="Random dilated shapelet transform classifier"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
    )
    parser.add_argument("--log-file", default=None)
    commands = parser.add_subparsers(dest="command", required=True)

    fit = commands.add_parser("fit", help="fit a model on a labeled TSV file")
    fit.add_argument("train_path")
    fit.add_argument("-o", "--output", default="model.json", help="archive path (.json or .json.gz)")
    _add_generation_flags(fit)
    _add_runtime_flags(fit)
    fit.set_defaults(handler=cmd_fit)

    predict = commands.add_parser("predict", help="predict labels with a model archive")
    predict.add_argument("model_path")
    predict.add_argument("data_path")
    predict.add_argument("-o", "--output", default=None, help="label file (default stdout)")
    predict.add_argument("--scores", default=None, help="write per-class decision values as CSV")
    predict.add_argument("--no-labels", action="store_true", help="input has no label column")
    _add_runtime_flags(predict)
    predict.set_defaults(handler=cmd_predict)

    evaluate = commands.add_parser("evaluate", help="fit and score over resamples")
    evaluate.add_argument("train_path")
    evaluate.add_argument("test_path")
    evaluate.add_argument("-o", "--output", default=None, help="JSON report (default stdout)")
    evaluate.add_argument("--n-resamples", type=int, default=1)
    evaluate.add_argument("--train-fraction", type=float, default=None)
    _add_generation_flags(evaluate)
    _add_runtime_flags(evaluate)
    evaluate.set_defaults(handler=cmd_evaluate)

    explain = commands.add_parser("explain", help="write an explanation bundle for one class")
    explain.add_argument("model_path")
    explain.add_argument("data_path")
    explain.add_argument("class_label", help="class label as written in the training file")
    explain.add_argument("-o", "--output", default="explanation", help="bundle directory")
    explain.add_argument("--top-k", type=int, default=1)
    explain.add_argument("--no-labels", action="store_true", help="input has no label column")
    explain.set_defaults(handler=cmd_explain)

    synthesize = commands.add_parser("synthesize", help="write a synthetic train/test pair")
    synthesize.add_argument("-o", "--output", default=".", help="output directory")
    synthesize.add_argument("--name", default="Synthetic")
    synthesize.add_argument("--n-per-class", type=int, default=50)
    synthesize.add_argument("--n-test-per-class", type=int, default=None)
    synthesize.add_argument("--length", type=int, default=256)
    synthesize.add_argument("--pattern-length", type=int, default=11)
    synthesize.add_argument("--pattern-dilation", type=int, default=4)
    synthesize.add_argument("--noise-std", type=float, default=0.2)
    synthesize.add_argument("--seed", type=int, default=0)
    synthesize.add_argument(
        "--regime", choices=[r.value for r in SyntheticRegime], default=SyntheticRegime.PRESENCE.value
    )
    synthesize.set_defaults(handler=cmd_synthesize)

    sweep = commands.add_parser("sweep", help="parameter sensitivity sweep")
    sweep.add_argument("datasets", nargs="+", help="'train.tsv,test.tsv' pairs")
    sweep.add_argument("-o", "--output", default=None, help="results CSV (default stdout)")
    sweep.add_argument("--n-shapelets", type=int, nargs="+", default=None)
    sweep.add_argument("--lengths", type=_int_list, nargs="+", default=None)
    sweep.add_argument("--p-norm", type=float, nargs="+", default=None)
    sweep.add_argument("--percentiles", type=_percentile_pair, nargs="+", default=None)
    sweep.add_argument("--base", choices=["sensitivity", "default"], default="sensitivity")
    sweep.add_argument("--n-resamples", type=int, default=1)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--parallel", action="store_true", help="run configs concurrently")
    _add_runtime_flags(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    scale = commands.add_parser("scale", help="timing curve over synthetic data")
    scale.add_argument("--axis", choices=list(bench.SCALE_AXES), default="n_series")
    scale.add_argument("--points", type=int, nargs="+", required=True)
    scale.add_argument("--repeats", type=int, default=3)
    scale.add_argument("--n-per-class", type=int, default=50)
    scale.add_argument("--length", type=int, default=128)
    scale.add_argument("-o", "--output", default=None, help="curve CSV (default stdout)")
    _add_generation_flags(scale)
    _add_runtime_flags(scale)
    scale.set_defaults(handler=cmd_scale)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file)
    try:
        return int(args.handler(args))
    except ShapeletError as e:
        logger.error(e.detail)
        return e.exit_code
    except ValidationError as e:
        logger.error(f"Invalid parameters: {e}")
        return ConfigError.exit_code
    except FileNotFoundError as e:
        logger.error(f"File not found: {e.filename}")
        return 3
    except Exception as e:
        logger.error(f"Unhandled error: {e}", exc_info=True)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
