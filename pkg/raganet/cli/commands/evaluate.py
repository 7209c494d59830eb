import argparse
import logging
from pathlib import Path
from typing import Any

from raganet.cli.commands import put, write_report
from raganet.cli.commands.train import feature_manifest_path
from raganet.cli.dependencies import (
    CHECKPOINT_PATH,
    get_checkpoint_repository,
    get_feature_repository,
    get_manifest_repository,
)
from raganet.core.exceptions import EXIT_OK
from raganet.schemas.run import RunConfig
from raganet.services.dataset_service import load_dataset
from raganet.services.training_service import evaluate, load_split

logger = logging.getLogger(__name__)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "eval",
        parents=[common],
        help="evaluate a checkpoint on the validation split or the whole manifest",
    )
    parser.add_argument("--checkpoint", default=CHECKPOINT_PATH)
    parser.add_argument("--manifest", help="featurized manifest (default: <features-dir>/manifest.csv)")
    parser.add_argument(
        "--split",
        choices=("validation", "all"),
        default="validation",
        help="validation re-creates the training split from the same seed",
    )
    parser.add_argument("--split-fraction", type=float)
    parser.add_argument("--split-mode", choices=("recording", "clip"))
    parser.set_defaults(handler=run, overrides=overrides)


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    result: dict[str, Any] = {}
    put(result, "training.split_fraction", args.split_fraction)
    put(result, "training.split_mode", args.split_mode)
    return result


def run(args: argparse.Namespace, config: RunConfig, workdir: Path) -> int:
    checkpoint = get_checkpoint_repository(workdir).load(args.checkpoint)
    feature_hash = checkpoint.feature_config.config_hash() if checkpoint.feature_config else None

    manifest = feature_manifest_path(args, config, workdir)
    rows = get_manifest_repository(manifest).load(manifest.name, check_paths=False)
    features = get_feature_repository(manifest)
    if checkpoint.segmentation is not None:
        features.check_segmentation(checkpoint.segmentation)
    if args.split == "all":
        dataset = load_dataset(rows, features, feature_hash, checkpoint.labels)
    else:
        _, dataset = load_split(rows, config.training, features, feature_hash, checkpoint.labels)

    scores = evaluate(checkpoint.network, dataset)
    logger.info(
        "Evaluated %s on %d %s samples: loss %.6f accuracy %.4f",
        args.checkpoint,
        len(dataset),
        args.split,
        scores.loss,
        scores.accuracy,
    )
    write_report(
        workdir,
        "eval",
        {
            "checkpoint": str(args.checkpoint),
            "split": args.split,
            "samples": len(dataset),
            "loss": scores.loss,
            "accuracy": scores.accuracy,
            "labels": checkpoint.labels.names,
            "confusion": scores.confusion.tolist(),
            "confusion_normalized": scores.normalized().tolist(),
        },
    )
    print(f"loss {scores.loss:.6f} accuracy {scores.accuracy:.4f} ({len(dataset)} samples)")
    return EXIT_OK
