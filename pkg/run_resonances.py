"""Main CLI entrypoint: spectra, bound certificates and plot data for a potential file."""
import sys
from pathlib import Path
from typing import List, Optional

import click
from pydantic import ValidationError
from rich.console import Console

from config import setup_logging
from resonance.bounds import report_table, report_text
from resonance.export import (
    certificate_records,
    forbidden_frame,
    grid_frame,
    scatter_frame,
    spectrum_document,
    staircase_frame,
    write_csv,
    write_json,
)
from resonance.pipeline import CertificationPipeline, RunConfig
from resonance.potential import Case
from resonance.zeros import Rectangle

console = Console()


def _float_list(ctx, param, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(s) for s in value.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


def _window(ctx, param, value: str) -> Optional[Rectangle]:
    if value == "auto":
        return None
    try:
        return Rectangle.parse(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def run_options(f):
    """Options shared by every command."""
    options = [
        click.option('--potential', required=True, help='Potential file (JSON)'),
        click.option('--case', type=click.Choice([c.value for c in Case]), default=None,
                     help='Override the case named in the file'),
        click.option('--window', default='auto', callback=_window, help='u0,u1,v0,v1 or auto'),
        click.option('--tol', type=float, default=1e-10, show_default=True, help='Root tolerance'),
        click.option('--out', default='out', show_default=True, help='Output directory'),
        click.option('--jobs', type=int, default=1, show_default=True, help='Worker threads'),
        click.option('--verbose', is_flag=True, help='Echo the trace and log at INFO'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _build_config(**kwargs) -> RunConfig:
    values = {k: v for k, v in kwargs.items() if v is not None}
    values["run_id"] = Path(values["potential"]).stem
    try:
        return RunConfig(**values)
    except ValidationError as e:
        for err in e.errors():
            field = ".".join(str(x) for x in err["loc"])
            console.print(f"[red]Error: {field}: {err['msg']}[/red]")
        sys.exit(2)


def _run(config: RunConfig, verbose: bool) -> dict:
    setup_logging("INFO" if verbose else "WARNING")
    console.print(f"[yellow]Running {config.potential}...[/yellow]")
    result = CertificationPipeline(echo=verbose).run(config)
    if result["error"]:
        console.print(f"[red]Error: {result['error']}[/red]")
    return result


def _write_spectrum(result: dict, out: Path):
    meta = {"case": result["potential"].case.value}
    write_json(spectrum_document(result["spectrum"], **meta), out / "spectrum.json")
    if result["partner"] is not None:
        write_json(spectrum_document(result["partner"], **meta), out / "partner_spectrum.json")
    n = result["spectrum"].total_multiplicity
    console.print(f"[green]Spectrum: {n} zeros written to {out / 'spectrum.json'}[/green]")


@click.group()
def cli():
    """Resonances of 1D Schrödinger operators with piecewise-constant potentials."""


@cli.command()
@run_options
@click.option('--wgrid', is_flag=True, help='Also write the |w| heat-map grid')
def spectrum(potential, case, window, tol, out, jobs, verbose, wgrid):
    """Locate all zeros in the window and write spectrum.json."""
    config = _build_config(potential=potential, case=case, window=window, tol=tol,
                           certify=[], out=out, jobs=jobs)
    result = _run(config, verbose)
    out_dir = Path(config.out)
    if result["spectrum"] is not None:
        _write_spectrum(result, out_dir)
        if wgrid:
            write_csv(grid_frame(result["potential"], result["window"]), out_dir / "wgrid.csv")
    sys.exit(result["exit_code"])


@cli.command()
@run_options
@click.option('--certify', 'certify', default='all', show_default=True,
              help='Comma-separated certificate names or all')
@click.option('--p', 'p_values', callback=_float_list, default=None, help='Exponents, e.g. 1.1,2,10')
@click.option('--radii', callback=_float_list, default=None, help='Radii, e.g. 1,5,10,20')
def certify(potential, case, window, tol, out, jobs, verbose, certify, p_values, radii):
    """Compute the spectrum and certify the selected bounds."""
    config = _build_config(potential=potential, case=case, window=window, tol=tol,
                           certify=[s.strip() for s in certify.split(",") if s.strip()],
                           p_values=p_values, radii=radii, out=out, jobs=jobs)
    result = _run(config, verbose)
    out_dir = Path(config.out)
    if result["spectrum"] is not None:
        _write_spectrum(result, out_dir)
    certs = result["certificates"]
    write_json(certificate_records(certs), out_dir / "certificates.json")
    (out_dir / "certificates.txt").write_text(report_text(certs), encoding="utf-8")
    if certs:
        console.print(report_table(certs))
    failed = [c.id for c in certs if not c.passed]
    if failed:
        console.print(f"[red]✗ {len(failed)} certificate(s) failed: {', '.join(sorted(set(failed)))}[/red]")
    elif result["exit_code"] == 0:
        console.print(f"[green]✓ All {len(certs)} certificates pass[/green]")
    sys.exit(result["exit_code"])


@cli.command()
@run_options
def plotdata(potential, case, window, tol, out, jobs, verbose):
    """Write scatter.csv, staircase.csv and forbidden.csv."""
    config = _build_config(potential=potential, case=case, window=window, tol=tol,
                           certify=[], out=out, jobs=jobs)
    result = _run(config, verbose)
    out_dir = Path(config.out)
    if result["spectrum"] is not None:
        points, p = result["spectrum"], result["potential"]
        write_csv(scatter_frame(points), out_dir / "scatter.csv")
        write_csv(staircase_frame(points, result["consts"], p.case), out_dir / "staircase.csv")
        write_csv(forbidden_frame(points, p), out_dir / "forbidden.csv")
        console.print(f"[green]Plot data written to: {out_dir}[/green]")
    sys.exit(result["exit_code"])


if __name__ == "__main__":
    cli()
