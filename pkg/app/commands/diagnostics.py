"""params / verify commands."""

import logging

import typer
from rich.table import Table

from app.runner import added_mass_comparison, verify as run_oracles
from engines.errors import ParameterError
from .common import EXIT_OK, EXIT_ERROR, console, fail, fmt

logger = logging.getLogger(__name__)


def params(
    rho: float = typer.Option(1023.0, "--rho", help="Water density (kg/m^3)"),
    reference: str = typer.Option("cb", "--reference", help="Strip-moment reference point: cb or cg"),
):
    """Print the derived added-mass set next to the published values.

    Analytic coefficients default to C_x0 = -0.12, C_za = -6, C_ma = -2 and C_mq = -400 per rad.
    Set preset = placeholder in a scenario's coefficients section for the lighter
    C_x0 = -0.30, C_za = -2, C_ma = -0.5, C_mq = -200 set.
    """
    try:
        rows = added_mass_comparison(rho, reference)
    except ParameterError as e:
        fail(str(e))
    table = Table(title=f"Added mass (rho = {rho:g} kg/m^3, moments about {reference})")
    for column in ["term", "derived", "published", "rel. error", "band", "ok"]:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(
            row.name,
            f"{row.derived:.4f}",
            f"{row.reference:.4f}",
            fmt(row.relative_error, ".2%"),
            f"{row.tolerance:.0%}",
            "[green]yes[/green]" if row.passed else "[red]no[/red]",
        )
    console.print(table)


def verify():
    """Run the analytic oracle checks (double integrator, RK4 order, trapezoid)."""
    checks = run_oracles()
    table = Table(title="Oracle checks")
    for column in ["check", "value", "expected", "result"]:
        table.add_column(column)
    for check in checks:
        table.add_row(check.name, f"{check.value:.6g}", check.expected,
                      "[green]pass[/green]" if check.passed else "[red]FAIL[/red]")
    console.print(table)
    raise typer.Exit(code=EXIT_OK if all(c.passed for c in checks) else EXIT_ERROR)
