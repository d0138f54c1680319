#!/usr/bin/env python3
"""
fretcavity CLI - parameter sweeps and cross-checks for donor-acceptor energy transfer.

Usage examples:
    fretcavity presets
    fretcavity sweep --preset fig2a_parallel --out fig2a.csv
    fretcavity sweep my_sweep.conf --threads 4 --ncav 8
    fretcavity oracle free_space_simple --params Delta=0,Omega=1
    fretcavity check --only flow_maximum --output json

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 tolerance failure.
"""

import json
import logging
import os
import sys

import click
import yaml
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fretcavity import __version__
from fretcavity.analytic import evaluate
from fretcavity.const import DEFAULT_THREADS, MAX_N_CAV, STATUS_OK
from fretcavity.exceptions import ConfigError, FretCavityError
from fretcavity.sweeps import format_csv, list_presets, load_config as load_sweep_config
from fretcavity.sweeps import load_preset_text, run_sweep, write_csv
from fretcavity.validation import CHECKS, run_checks

console = Console()
err_console = Console(stderr=True)

EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_TOLERANCE = 3


def load_config() -> dict:
    """Load CLI defaults from environment or .env file."""
    from dotenv import load_dotenv
    load_dotenv()

    threads = os.getenv("FRETCAVITY_THREADS")
    ncav = os.getenv("FRETCAVITY_NCAV")
    try:
        settings = {
            "threads": int(threads) if threads else DEFAULT_THREADS,
            "ncav": int(ncav) if ncav else None,
            "out": os.getenv("FRETCAVITY_OUT") or None,
        }
    except ValueError as e:
        raise ConfigError(f"Invalid environment setting: {e}", key="environment") from e
    if settings["ncav"] is not None and not 1 <= settings["ncav"] <= MAX_N_CAV:
        raise ConfigError(
            f"Invalid environment setting: FRETCAVITY_NCAV={ncav} not in [1, {MAX_N_CAV}]",
            key="environment",
        )
    return settings


def _fail(message: str, code: int) -> None:
    err_console.print(f"[red]Error: {message}[/red]")
    sys.exit(code)


def _emit(data, output: str, table: Table) -> None:
    if output == "json":
        console.print_json(json.dumps(data, indent=2))
    elif output == "yaml":
        print(yaml.dump(data, default_flow_style=False, sort_keys=False))
    else:
        console.print(table)


@click.group()
@click.option("--verbose", "-v", count=True, help="Increase log verbosity (-v info, -vv debug)")
@click.version_option(__version__, prog_name="fretcavity")
@click.pass_context
def cli(ctx, verbose):
    """fretcavity - energy flow between quantum emitters in free space and in a cavity."""
    ctx.ensure_object(dict)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )
    try:
        ctx.obj.update(load_config())
    except ConfigError as e:
        _fail(e.message, EXIT_CONFIG)


@cli.command()
@click.argument("config_file", required=False, type=click.Path(dir_okay=False))
@click.option("--preset", help="Shipped preset to run (or to extend with CONFIG_FILE)")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="CSV output path (default: stdout)")
@click.option("--threads", type=click.IntRange(min=1), help="Grid points evaluated concurrently")
@click.option("--ncav", type=click.IntRange(1, MAX_N_CAV), help="Photon-number cutoff")
@click.option("--output", "-o", type=click.Choice(["table", "json", "yaml"]), default="table", help="Summary format")
@click.pass_context
def sweep(ctx, config_file, preset, out_path, threads, ncav, output):
    """Run a parameter sweep and write it as CSV.

    \b
    Examples:
        fretcavity sweep --preset fig4d --out fig4d.csv
        fretcavity sweep grid.conf --threads 4
    """
    if config_file is None and preset is None:
        _fail("Give a config file, --preset NAME, or both", EXIT_CONFIG)

    try:
        config = load_sweep_config(config_file, preset)
        ncav = ncav or ctx.obj.get("ncav")
        if ncav is not None:
            config = config.model_copy(update={"n_cav": ncav})
        result = run_sweep(config, threads=threads or ctx.obj.get("threads", DEFAULT_THREADS))
    except ConfigError as e:
        _fail(e.message, EXIT_CONFIG)
    except FretCavityError as e:
        _fail(str(e), EXIT_SOLVER)

    target = out_path or config.output_path or ctx.obj.get("out")
    if target is None:
        click.echo(format_csv(result), nl=False)
    else:
        write_csv(result, target)

    statuses = result.table["status"]
    failed = int((statuses != STATUS_OK).sum())
    summary = {
        "preset": config.preset,
        "points": result.row_count,
        "failed": failed,
        "n_cav": config.n_cav,
        "output": target or "stdout",
    }
    if target is not None:
        table = Table(title="Sweep Summary", box=box.ROUNDED)
        table.add_column("Field", style="cyan")
        table.add_column("Value")
        for key, value in summary.items():
            table.add_row(key, str(value))
        _emit(summary, output, table)
    if failed:
        for status in statuses[statuses != STATUS_OK].unique()[:5]:
            err_console.print(f"[yellow]{status}[/yellow]")
        _fail(f"{failed} of {result.row_count} points failed", EXIT_SOLVER)


def _parse_params(text: str) -> dict:
    params = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"Expected key=value, got '{item}'", key="params")
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise ConfigError(f"Not a number: '{value}'", key=key.strip()) from e
    return params


@cli.command()
@click.argument("formula")
@click.option("--params", default="", help="Comma-separated key=value list, e.g. Delta=0,Omega=1")
@click.option("--output", "-o", type=click.Choice(["table", "json", "yaml"]), default="table", help="Output format")
def oracle(formula, params, output):
    """Evaluate one closed-form flow expression.

    \b
    Formulas:
        free_space_full, free_space_simple, distinct_emitters,
        coherent_free, cavity_cooperativity, coherent_cavity,
        intermediate_level
    """
    try:
        result = evaluate(formula, **_parse_params(params))
    except ConfigError as e:
        _fail(e.message, EXIT_CONFIG)
    except FretCavityError as e:
        _fail(str(e), EXIT_SOLVER)

    data = {
        "formula": result.formula_id.value,
        "value": result.value,
        "singular": result.singular,
        **result.extras,
    }
    table = Table(title="Oracle", box=box.ROUNDED)
    table.add_column("Formula", style="cyan")
    table.add_column("Value", justify="right")
    for key, value in result.extras.items():
        table.add_column(key, justify="right")
    table.add_row(
        result.formula_id.value,
        f"{result.value:.16e}",
        *(f"{v:.16e}" for v in result.extras.values()),
    )
    _emit(data, output, table)
    if result.singular:
        _fail("Formula evaluated on a singular surface", EXIT_SOLVER)


@cli.command()
@click.option("--only", multiple=True, type=click.Choice(list(CHECKS)), help="Run only these checks")
@click.option("--output", "-o", type=click.Choice(["table", "json", "yaml"]), default="table", help="Output format")
def check(only, output):
    """Run the analytic-versus-numeric cross-validation suite."""
    try:
        results = run_checks(only or None)
    except ConfigError as e:
        _fail(e.message, EXIT_CONFIG)

    data = [result.model_dump() for result in results]
    table = Table(title="Cross-checks", box=box.ROUNDED)
    table.add_column("Check", style="cyan")
    table.add_column("Result", justify="center")
    table.add_column("Value", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Detail")
    for result in results:
        verdict = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, verdict, f"{result.value:.3e}", f"{result.tolerance:.1e}", result.detail)
    _emit(data, output, table)

    failed = [r.name for r in results if not r.passed]
    if failed:
        _fail(f"Tolerance failure: {', '.join(failed)}", EXIT_TOLERANCE)
    console.print(f"\n[green]✓[/green] {len(results)} checks passed")


@cli.command()
@click.option("--output", "-o", type=click.Choice(["table", "json", "yaml"]), default="table", help="Output format")
def presets(output):
    """List the shipped sweep presets."""
    rows = []
    for name in list_presets():
        first = load_preset_text(name).splitlines()[0]
        rows.append({"name": name, "description": first.lstrip("# ").strip()})

    table = Table(title="Presets", box=box.ROUNDED)
    table.add_column("Preset", style="cyan")
    table.add_column("Description")
    for row in rows:
        table.add_row(row["name"], row["description"])
    _emit(rows, output, table)


def main():
    """Main entry point."""
    cli(obj={})


if __name__ == "__main__":
    main()
