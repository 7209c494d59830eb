import argparse
import logging
from pathlib import Path
from typing import Any

from raganet.cli.commands import put, write_report
from raganet.cli.dependencies import (
    CHECKPOINT_PATH,
    MANIFEST_NAME,
    get_checkpoint_repository,
    get_feature_repository,
    get_manifest_repository,
    get_training_service,
)
from raganet.core.exceptions import EXIT_OK
from raganet.models.network import build_model_config, count_parameters
from raganet.repositories.checkpoints import Checkpoint
from raganet.schemas.run import RunConfig
from raganet.services.training_service import load_split

logger = logging.getLogger(__name__)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "train",
        parents=[common],
        help="train the classifier on a featurized manifest",
    )
    parser.add_argument("--manifest", help="featurized manifest (default: <features-dir>/manifest.csv)")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--patience", type=int)
    parser.add_argument("--learning-rate", type=float)
    parser.add_argument("--split", type=float, help="training fraction per raga")
    parser.add_argument("--split-mode", choices=("recording", "clip"))
    parser.add_argument(
        "--no-timing",
        action="store_const",
        const=False,
        dest="record_timing",
        help="write 0.0 seconds per epoch so metrics files compare byte for byte",
    )
    parser.set_defaults(handler=run, overrides=overrides)


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    result: dict[str, Any] = {}
    put(result, "training.epochs", args.epochs)
    put(result, "training.batch_size", args.batch_size)
    put(result, "training.patience", args.patience)
    put(result, "training.learning_rate", args.learning_rate)
    put(result, "training.split_fraction", args.split)
    put(result, "training.split_mode", args.split_mode)
    put(result, "training.record_timing", args.record_timing)
    return result


def feature_manifest_path(args: argparse.Namespace, config: RunConfig, workdir: Path) -> Path:
    return Path(workdir) / (args.manifest or f"{config.dataset.features_dir}/{MANIFEST_NAME}")


def run(args: argparse.Namespace, config: RunConfig, workdir: Path) -> int:
    manifest = feature_manifest_path(args, config, workdir)
    rows = get_manifest_repository(manifest).load(manifest.name, check_paths=False)
    features = get_feature_repository(manifest)
    features.check_segmentation(config.segmentation)
    train, val = load_split(
        rows,
        config.training,
        features,
        expected_hash=config.features.config_hash(),
    )
    _, frames, bins = train.x.shape
    model_config = build_model_config(config.architecture, frames, bins, train.num_classes, seed=config.seed)
    logger.info(
        "Model: %d layers, %d classes, input %dx%d, %s parameters",
        len(model_config.layers),
        model_config.num_classes,
        frames,
        bins,
        f"{count_parameters(model_config).total:,}",
    )

    result = get_training_service(config, workdir).train(model_config, train, val)
    checkpoint = Checkpoint(
        network=result.network,
        labels=train.labels,
        feature_config=config.features,
        segmentation=config.segmentation,
        optimizer=result.optimizer,
    )
    get_checkpoint_repository(workdir).save(checkpoint, CHECKPOINT_PATH)

    final = result.final
    report = {
        "best_epoch": result.best_epoch,
        "epochs_run": len(result.history),
        "stopped_early": result.stopped_early,
        "best_val_loss": result.best_record.val_loss,
        "val_loss": final.loss,
        "val_accuracy": final.accuracy,
        "labels": train.labels.names,
        "confusion": final.confusion.tolist(),
        "train_samples": len(train),
        "val_samples": len(val),
    }
    path = write_report(workdir, "train", report)
    logger.info("Report written to %s", path)
    print(
        f"best epoch {result.best_epoch}/{len(result.history)}: "
        f"val_loss {final.loss:.4f} val_acc {final.accuracy:.4f}"
    )
    return EXIT_OK
