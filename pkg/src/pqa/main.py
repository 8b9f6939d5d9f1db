"""CLI entry point for the pqa toolchain."""

from contextlib import contextmanager
from pathlib import Path
from typing import NoReturn, Optional

import click

from pqa.config import settings
from pqa.errors import PqaError

EXIT_STATIC = 1
EXIT_FUEL = 2
EXIT_USAGE = 3


@contextmanager
def _usage_status():
    try:
        yield
    except click.UsageError as exc:
        exc.exit_code = EXIT_USAGE
        raise


class _PqaGroup(click.Group):
    """Click group whose usage errors exit with status 3."""

    def make_context(self, info_name, args, parent=None, **extra):
        with _usage_status():
            return super().make_context(info_name, args, parent=parent, **extra)

    def invoke(self, ctx):
        with _usage_status():
            return super().invoke(ctx)


def _fail(exc: PqaError, file: Path) -> NoReturn:
    click.echo(exc.diagnostic(str(file)), err=True)
    raise SystemExit(EXIT_STATIC)


def _pipeline(sig: Optional[Path], **options):
    from pqa.pipeline import ProgramPipeline

    return ProgramPipeline.from_signature_path(sig, **options)


_file_argument = click.argument(
    "file", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
_sig_option = click.option(
    "--sig",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Gate signature file (default: PQA_STDLIB)",
)
_fuel_option = click.option(
    "--fuel", type=click.IntRange(min=1), default=None, help="Step budget (default: PQA_FUEL)"
)


@click.group(cls=_PqaGroup)
@click.option("-v", "--verbose", is_flag=True, help="Log every stage and reduction step")
def cli(verbose: bool):
    """pqa - type checker, normalizer and circuit renderer for two-layer programs."""
    from pqa.logging_setup import setup_logging

    setup_logging("DEBUG" if verbose else settings.LOG_LEVEL)


@cli.command()
@_file_argument
@_sig_option
@click.option(
    "--system",
    type=click.Choice(["pqa", "pqx"]),
    default="pqa",
    show_default=True,
    help="Linear checker or its structural approximation",
)
def check(file: Path, sig: Optional[Path], system: str):
    """Type check a program and print its type."""
    try:
        result = _pipeline(sig, system=system).check(file)
    except PqaError as exc:
        _fail(exc, file)
    if not result.report.ok:
        _fail(result.report.error, file)
    click.echo(result.report.describe())


@cli.command()
@_file_argument
@_sig_option
@_fuel_option
@click.option("--trace", is_flag=True, help="Print every step with its rule name")
@click.option("--unsafe", is_flag=True, help="Run without type checking first")
@click.option("--annotate", is_flag=True, help="Print binder type annotations")
def normalize(
    file: Path, sig: Optional[Path], fuel: Optional[int], trace: bool, unsafe: bool, annotate: bool
):
    """Reduce a program to its normal form."""
    from pqa.dynamics.normalize import FuelExhausted, Stuck
    from pqa.syntax.printer import print_program

    try:
        result = _pipeline(sig, fuel=fuel).normalize(file, unsafe=unsafe, record=trace)
    except PqaError as exc:
        _fail(exc, file)

    if trace:
        for line in result.trace.lines():
            click.echo(line)
    click.echo(print_program(result.trace.result, annotations=annotate))

    status = result.trace.status
    if isinstance(status, Stuck):
        _fail(status.error, file)
    if isinstance(status, FuelExhausted):
        click.echo(f"{file}: fuel exhausted after {len(result.trace.steps)} steps", err=True)
        raise SystemExit(EXIT_FUEL)


@cli.command()
@_file_argument
@_sig_option
@_fuel_option
@click.option(
    "--emit", type=click.Choice(["ascii", "dot"]), default="ascii", show_default=True
)
def circuit(file: Path, sig: Optional[Path], fuel: Optional[int], emit: str):
    """Normalize a circuit and draw it."""
    try:
        result = _pipeline(sig, fuel=fuel).circuit(file, emit=emit)
    except PqaError as exc:
        _fail(exc, file)

    if result.rendered is None:
        click.echo(f"{file}: fuel exhausted after {len(result.trace.steps)} steps", err=True)
        raise SystemExit(EXIT_FUEL)
    click.echo(result.rendered, nl=not result.rendered.endswith("\n"))


@cli.command()
@click.option("--count", type=click.IntRange(min=1), default=settings.PQA_FUZZ_COUNT)
@click.option("--depth", type=click.IntRange(min=1), default=settings.PQA_FUZZ_DEPTH)
@click.option("--seed", type=int, default=settings.PQA_FUZZ_SEED)
@click.option("--jobs", type=click.IntRange(min=1), default=settings.PQA_FUZZ_JOBS)
@_fuel_option
@click.option(
    "--report",
    "report_path",
    type=click.Path(dir_okay=False, writable=True, path_type=Path),
    default=None,
    help="Write the JSON report here instead of stdout",
)
def fuzz(
    count: int, depth: int, seed: int, jobs: int, fuel: Optional[int], report_path: Optional[Path]
):
    """Run the metatheory property suite on generated programs."""
    from pqa.harness import GenConfig, run_suite

    report = run_suite(GenConfig(seed=seed, max_depth=depth), count, jobs=jobs, fuel=fuel)

    if report_path is None:
        click.echo(report.to_json())
    else:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        report_path.write_text(report.to_json() + "\n", encoding="utf-8")
        click.echo(f"Report written to: {report_path}", err=True)
    for line in report.summary_lines():
        click.echo(line, err=True)
    if not report.ok:
        raise SystemExit(EXIT_STATIC)


if __name__ == "__main__":
    cli()
