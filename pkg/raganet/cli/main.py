import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from raganet import __version__
from raganet.cli.commands import evaluate, featurize, params, predict, synth, train
from raganet.cli.config import RUNS_DIR, resolve_run_config, write_run_config
from raganet.cli.presets import PRESETS
from raganet.core.config import settings
from raganet.core.exceptions import EXIT_UNEXPECTED, EXIT_USAGE, DomainException
from raganet.core.logging import resolve_level, setup_logging

logger = logging.getLogger(__name__)

COMMANDS = (synth, featurize, train, evaluate, predict, params)


def create_parser() -> argparse.ArgumentParser:
    """
    Фабрика парсера командной строки.

    Общие флаги (--workdir, --config, --preset, ...) подключаются к каждой
    подкоманде через родительский парсер и пишутся после её имени.

    Returns:
        Настроенный парсер
    """
    parser = argparse.ArgumentParser(
        prog="raganet",
        description="Carnatic raga classification: synthesize, featurize, train, evaluate, predict",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workdir", type=Path, help="base directory for every relative path")
    common.add_argument("--config", type=Path, help="YAML file overriding preset values")
    common.add_argument("--preset", choices=sorted(PRESETS), default="desk")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="count", default=0)

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in COMMANDS:
        command.register(subparsers, common)
    return parser


def _report_failure(exc: DomainException) -> None:
    if exc.details:
        details = ", ".join(f"{key}={value}" for key, value in sorted(exc.details.items()))
        logger.error("%s (%s)", exc.message, details)
    else:
        logger.error("%s", exc.message)


def main(argv: list[str] | None = None) -> int:
    """
    Точка входа CLI.

    Доменные исключения маппятся на их коды выхода, ошибки валидации
    конфигурации - на код использования, остальное - на 1.

    Returns:
        Код выхода процесса
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    workdir = Path(args.workdir or settings.WORKDIR)
    setup_logging(
        resolve_level(settings.LOG_LEVEL, args.verbose - args.quiet),
        workdir / RUNS_DIR / f"{args.command}.log",
    )

    try:
        config_path = workdir / args.config if args.config is not None else None
        run = resolve_run_config(
            args.preset,
            config_path=config_path,
            overrides=args.overrides(args),
            environment={
                "seed": settings.SEED,
                "workers": settings.WORKERS,
                "features": {"tuning_a4": settings.TUNING_A4},
            },
            seed=args.seed,
            workers=args.workers,
        )
        config_file = write_run_config(run, workdir, args.command)
        logger.info("raganet %s %s (workdir %s)", __version__, args.command, workdir)
        logger.info("Resolved config (%s): %s", config_file, run.model_dump_json())
        return args.handler(args, run, workdir)
    except DomainException as exc:
        _report_failure(exc)
        return exc.exit_code
    except ValidationError as exc:
        for error in exc.errors():
            location = ".".join(str(part) for part in error["loc"])
            logger.error("Invalid configuration value %s: %s", location or "<root>", error["msg"])
        return EXIT_USAGE
    except Exception:
        logger.exception("Unexpected error in '%s'", args.command)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
