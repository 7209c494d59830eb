import argparse
from pathlib import Path
from typing import Any

from raganet.cli.dependencies import CHECKPOINT_PATH, get_checkpoint_repository
from raganet.core.exceptions import EXIT_OK, UsageError
from raganet.schemas.run import RunConfig
from raganet.services.prediction_service import PredictionService


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "predict",
        parents=[common],
        help="rank ragas for an audio clip",
    )
    parser.add_argument("clip", help="WAV file, relative to --workdir")
    parser.add_argument("--checkpoint", default=CHECKPOINT_PATH)
    parser.add_argument("--top", type=int, default=5)
    parser.set_defaults(handler=run, overrides=overrides)


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    if args.top <= 0:
        raise UsageError("--top must be positive", details={"top": args.top})
    return {}


def run(args: argparse.Namespace, config: RunConfig, workdir: Path) -> int:
    checkpoint = get_checkpoint_repository(workdir).load(args.checkpoint)
    ranked = PredictionService(checkpoint).predict(Path(workdir) / args.clip)
    for prediction in ranked[: args.top]:
        print(f"{prediction.raga:<28} {prediction.probability:.6f}")
    return EXIT_OK
