"""Command-line entry point."""

import logging

import typer
from dotenv import load_dotenv
load_dotenv(override=True)

from app.commands import batch, diagnostics, scenario
from app.commands.common import HydroboostGroup
from app.config import settings

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

app = typer.Typer(
    cls=HydroboostGroup,
    name="hydroboost",
    help="Launch and boost dynamics of a submarine-launched vehicle and minimum-effort thrust programs",
    no_args_is_help=True,
    add_completion=False,
)

# Mount commands
app.command("simulate")(scenario.simulate)
app.command("optimize")(scenario.optimize)
app.command("sweep")(batch.sweep)
app.command("combine")(batch.combine)
app.command("params")(diagnostics.params)
app.command("verify")(diagnostics.verify)


def main():
    app()


if __name__ == "__main__":
    main()
