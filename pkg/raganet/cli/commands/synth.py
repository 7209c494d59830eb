import argparse
import logging
from pathlib import Path
from typing import Any

from raganet.cli.commands import put
from raganet.cli.dependencies import MANIFEST_NAME, get_scales, get_synth_service
from raganet.core.exceptions import EXIT_OK
from raganet.schemas.run import RunConfig
from raganet.schemas.synth import GamakaMode

logger = logging.getLogger(__name__)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "synth",
        parents=[common],
        help="generate labelled synthetic clips and a manifest",
    )
    parser.add_argument("--scales", help="scales file: 'name,arohanam;avarohanam' per line")
    parser.add_argument("--out", help="output directory for WAVs and manifest.csv")
    parser.add_argument("--per-class", type=int, help="clips per raga")
    parser.add_argument("--shruti", type=float, nargs="+", help="tonic frequencies in Hz")
    parser.add_argument("--gamaka", choices=[mode.value for mode in GamakaMode])
    parser.add_argument("--noise-db", type=float, help="noise level relative to the tone RMS")
    parser.add_argument("--harmonics", type=int, choices=(1, 3))
    parser.set_defaults(handler=run, overrides=overrides)


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    result: dict[str, Any] = {}
    put(result, "dataset.scales_file", args.scales)
    put(result, "dataset.data_dir", args.out)
    put(result, "dataset.per_class", args.per_class)
    put(result, "dataset.shruti", args.shruti)
    put(result, "synth.gamaka", args.gamaka)
    put(result, "synth.noise_db", args.noise_db)
    put(result, "synth.harmonics", args.harmonics)
    return result


def run(args: argparse.Namespace, config: RunConfig, workdir: Path) -> int:
    scales = get_scales(config, workdir)
    service = get_synth_service(config, workdir, progress=args.quiet == 0)
    rows = service.generate(scales, config.dataset.per_class, list(config.dataset.shruti), config.synth)
    print(f"{len(rows)} clips, {len(scales)} ragas -> {service.out_dir / MANIFEST_NAME}")
    return EXIT_OK
