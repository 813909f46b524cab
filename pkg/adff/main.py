import sys
from pathlib import Path
from typing import Callable, Optional, TypeVar

import structlog
import typer

from adff.core.enums import SweepAxis
from adff.core.exceptions import ADFFError, ConfigError
from adff.core.logging import configure_logging
from adff.schemas.config import RunConfig, parse_config
from adff.services import experiments

logger = structlog.get_logger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
FRAMEWORK_USAGE_EXIT = 2  # what typer exits with on bad arguments


class CommandFailed(SystemExit):
    """Pipeline failure; carried past the CLI framework's own exit-code handling."""


app = typer.Typer(
    name="adff",
    help="Music emotion recognition: log-Mel features, ADFF network, cross-validated experiments.",
    no_args_is_help=True,
    add_completion=False,
)

ConfigOption = typer.Option(..., "--config", "-c", exists=True, dir_okay=False, help="TOML run configuration")
SeedOption = typer.Option(None, "--seed", help="Override run.seed")
OutOption = typer.Option(None, "--out", help="Override run.output_dir")
WidthOption = typer.Option(None, "--width", min=0.0, max=1.0, help="Override model.width")
ReferenceOption = typer.Option(False, "--reference", help="Add published reference values to mean rows")


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override ADFF_LOG_LEVEL"),
    json_logs: Optional[bool] = typer.Option(None, "--json-logs/--console-logs", help="Log renderer"),
):
    configure_logging(level=log_level, json_logs=json_logs)


def _load(config_path: Path, seed: Optional[int], out: Optional[Path], width: Optional[float],
          reference: bool = False) -> RunConfig:
    config = parse_config(config_path).with_overrides(seed=seed, output_dir=out, width=width)
    if reference:
        config.report.published_reference = True
    if not Path(config.run.dataset_root).exists():
        raise ConfigError(f"dataset root does not exist: {config.run.dataset_root}", key="run.dataset_root")
    return config


def _run(command: str, action: Callable[[], T], out_dir: Optional[Path] = None) -> T:
    """Run a command body, mapping pipeline errors to exit codes."""
    logger.info("🚀 Command started", command=command)
    try:
        result = action()
    except ConfigError as e:
        logger.error("❌ Configuration error", command=command, error=str(e))
        raise typer.Exit(code=EXIT_USAGE)
    except ADFFError as e:
        logger.error("❌ Command failed", command=command, error=str(e))
        if out_dir is not None:
            experiments.write_failure_manifest(Path(out_dir), {command: str(e), **{k: str(v) for k, v in e.context.items()}})
        raise CommandFailed(EXIT_RUNTIME)
    logger.info("🎉 Command finished", command=command)
    return result


def _out_dir(config_path: Path, out: Optional[Path]) -> Optional[Path]:
    if out is not None:
        return out
    try:
        return parse_config(config_path).run.output_dir
    except ConfigError:
        return None


@app.command()
def extract(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    width: Optional[float] = WidthOption,
):
    """Compute and cache one log-Mel spectrogram per chorus."""
    def action():
        run_config = _load(config, seed, out, width)
        summary = experiments.cmd_extract(run_config)
        if not summary.ok:
            experiments.write_failure_manifest(Path(run_config.run.output_dir), summary.failed)
        return summary

    summary = _run("extract", action, _out_dir(config, out))
    typer.echo(f"computed={len(summary.computed)} skipped={len(summary.skipped)} failed={len(summary.failed)}")
    if not summary.ok:
        for song_id, error in sorted(summary.failed.items()):
            typer.echo(f"  {song_id}: {error}", err=True)
        raise CommandFailed(EXIT_RUNTIME)


@app.command()
def cv(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    width: Optional[float] = WidthOption,
    reference: bool = ReferenceOption,
):
    """Run k-fold cross-validation for the configured task and variant."""
    run = _run("cv", lambda: experiments.cmd_cv(_load(config, seed, out, width, reference)), _out_dir(config, out))
    typer.echo(str(run.csv_path))


@app.command()
def sweep(
    axis: SweepAxis = typer.Option(..., "--axis", help="Grid to sweep"),
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    width: Optional[float] = WidthOption,
    reference: bool = ReferenceOption,
):
    """Cross-validate every value of the seg_num or seg_len grid."""
    result = _run("sweep", lambda: experiments.cmd_sweep(_load(config, seed, out, width, reference), axis),
                  _out_dir(config, out))
    typer.echo(str(result.summary_path))
    if not result.ok:
        raise CommandFailed(EXIT_RUNTIME)


@app.command()
def ablate(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    width: Optional[float] = WidthOption,
    reference: bool = ReferenceOption,
):
    """Compare the full model with its w/o SE and w/o TFLM variants."""
    result = _run("ablate", lambda: experiments.cmd_ablate(_load(config, seed, out, width, reference)),
                  _out_dir(config, out))
    typer.echo(str(result.summary_path))


@app.command()
def synth(
    n: int = typer.Option(..., "--n", min=1, help="Number of clips"),
    out: Path = typer.Option(..., "--out", help="Corpus root to create"),
    seed: int = typer.Option(0, "--seed"),
    duration: float = typer.Option(20.0, "--duration", min=0.1, help="Clip length in seconds"),
    max_duration: Optional[float] = typer.Option(None, "--max-duration", help="Draw lengths up to this"),
):
    """Generate a synthetic corpus in the PMEmo layout."""
    records = _run("synth", lambda: experiments.cmd_synth(out, n, seed, duration, max_duration))
    typer.echo(f"{len(records)} clips written to {out}")


def cli() -> None:
    """Console entry point; usage errors exit with 1 instead of the framework's 2."""
    try:
        app()
    except CommandFailed:
        raise
    except SystemExit as e:
        if e.code == FRAMEWORK_USAGE_EXIT:
            sys.exit(EXIT_USAGE)
        raise
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    cli()
