import argparse
from pathlib import Path
from typing import Any

from raganet.cli.presets import PAPER_NUM_CLASSES
from raganet.core.exceptions import EXIT_OK, UsageError
from raganet.models.network import build_model_config, count_parameters
from raganet.schemas.run import RunConfig


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "params",
        parents=[common],
        help="print the per-layer parameter table of the configured model",
    )
    parser.add_argument("--classes", type=int, help="number of ragas (default: 172 for the paper preset, else the configured melakartas)")
    parser.set_defaults(handler=run, overrides=overrides)


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    if args.classes is not None and args.classes <= 0:
        raise UsageError("--classes must be positive", details={"classes": args.classes})
    return {}


def run(args: argparse.Namespace, config: RunConfig, workdir: Path) -> int:
    if args.classes is not None:
        classes = args.classes
    elif config.preset == "paper":
        classes = PAPER_NUM_CLASSES
    else:
        classes = len(config.dataset.melakartas)
    frames = config.features.stft.num_frames(config.segmentation.segment_samples)
    model_config = build_model_config(
        config.architecture,
        frames,
        config.features.filterbank.num_bins,
        classes,
        seed=config.seed,
    )
    print(count_parameters(model_config).format_table())
    return EXIT_OK
