"""Console, exit codes and output-directory helpers shared by the commands."""

import logging
from pathlib import Path
from typing import Optional

import click
import typer
from rich.console import Console
from typer.core import TyperGroup

from app.config import settings

logger = logging.getLogger(__name__)

console = Console()

EXIT_OK = 0
EXIT_ERROR = 1  # usage, parse or engine error
EXIT_NOT_CONVERGED = 2


class HydroboostGroup(TyperGroup):
    """Reports command-line usage errors with exit code 1; 2 is reserved for non-convergence."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_ERROR
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_ERROR
            raise


def fail(message: str, code: int = EXIT_ERROR) -> None:
    console.print(f"[bold red]Error:[/bold red] {message}")
    raise typer.Exit(code=code)


def output_dir(out: Optional[Path], fallback: Optional[str] = None) -> Path:
    """--out wins, then a directory named by the input file, then OUTPUT_DIR."""
    return Path(out or fallback or settings.OUTPUT_DIR)


def fmt(value: Optional[float], spec: str = ".6g") -> str:
    return "-" if value is None else format(value, spec)
