import argparse
from pathlib import Path
from typing import Any

from raganet.cli.commands import put
from raganet.cli.dependencies import MANIFEST_NAME, get_featurize_service
from raganet.core.exceptions import EXIT_OK, UsageError
from raganet.schemas.notes import NoteIndex
from raganet.schemas.run import RunConfig


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "featurize",
        parents=[common],
        help="extract note filter-bank features for every clip of a manifest",
    )
    parser.add_argument("--manifest", help="clip manifest (default: <data-dir>/manifest.csv)")
    parser.add_argument("--out", help="output directory for feature files")
    parser.add_argument("--segment-seconds", type=float)
    parser.add_argument("--frame-size", type=int)
    parser.add_argument("--hop-size", type=int)
    parser.add_argument("--fft-size", type=int)
    parser.add_argument("--num-bins", type=int)
    parser.add_argument("--anchor", help="lowest bin note, e.g. B1")
    parser.add_argument("--normalization", choices=("area", "apex"))
    parser.set_defaults(handler=run, overrides=overrides)


def overrides(args: argparse.Namespace) -> dict[str, Any]:
    result: dict[str, Any] = {}
    put(result, "dataset.features_dir", args.out)
    put(result, "segmentation.segment_seconds", args.segment_seconds)
    put(result, "features.stft.frame_size", args.frame_size)
    put(result, "features.stft.hop_size", args.hop_size)
    put(result, "features.stft.fft_size", args.fft_size)
    put(result, "features.filterbank.num_bins", args.num_bins)
    put(result, "features.filterbank.normalization", args.normalization)
    if args.anchor is not None:
        try:
            anchor = NoteIndex.from_name(args.anchor)
        except ValueError as exc:
            raise UsageError(f"Invalid anchor note '{args.anchor}'", details={"anchor": args.anchor}) from exc
        put(result, "features.filterbank.anchor_midi", anchor.midi_number)
    return result


def run(args: argparse.Namespace, config: RunConfig, workdir: Path) -> int:
    manifest = Path(workdir) / (args.manifest or f"{config.dataset.data_dir}/{MANIFEST_NAME}")
    service = get_featurize_service(config, workdir, progress=args.quiet == 0)
    rows = service.run(manifest)
    print(f"{len(rows)} feature files -> {service.out_dir / MANIFEST_NAME}")
    return EXIT_OK
