from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import numpy as np
import typer

from exceptions import AppException, NoRealRoot, ParameterError, VerificationFailure, error_payload
from logger import setup_logger
from models import physical_constants, resolve_system
from report import comparison_lines, emit_records, emit_table, particle_branch_lines, rows_from_spectrum, table1_report
from spectrum import closed_form_roots, energy_nonrelativistic, energy_roots, enumerate_spectrum, solve_quantization_scan
from wavefunction import normalization_constant, physical_norm_integral, sample_wavefunction, wavefunction_spec

logger = setup_logger("cli")

app = typer.Typer(
    name="kgws",
    help="Klein-Gordon bound states of the Woods-Saxon well in the Pekeris approximation.",
    add_completion=False,
    no_args_is_help=True,
)

KAPPAS = (1.0, 10.0, 20.0, 40.0)

FormatOption = typer.Option("csv", "--format", help="Output format: csv or json")
HbarOption = typer.Option(None, "--hbar-c", help="hbar*c in MeV fm (overrides KGWS_HBAR_C)")
OutputOption = typer.Option(None, "--output", "-o", help="Write to this file instead of stdout")


@contextmanager
def reporting_errors(fmt: str):
    try:
        yield
    except AppException as exc:
        typer.echo(f"error: {exc.message}", err=True)
        if fmt == "json":
            typer.echo(json.dumps(error_payload(exc)))
        raise typer.Exit(exc.exit_code)
    except OSError as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(1)


def _check_format(fmt: str) -> None:
    if fmt not in ("csv", "json"):
        raise ParameterError(f"unknown output format '{fmt}' (expected csv or json)")


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


@app.command()
def spectrum(
    A: Optional[int] = typer.Option(None, "--A", help="Mass number"),
    V0: Optional[float] = typer.Option(None, "--V0", help="Well depth, MeV"),
    R0: Optional[float] = typer.Option(None, "--R0", help="Nuclear radius, fm"),
    a: Optional[float] = typer.Option(None, "--a", help="Surface diffuseness, fm"),
    m0c2: Optional[float] = typer.Option(None, "--m0c2", help="Rest energy, MeV"),
    l_max: int = typer.Option(3, "--l-max", help="Largest angular momentum"),
    fmt: str = FormatOption,
    hbar_c: Optional[float] = HbarOption,
    output: Optional[Path] = OutputOption,
):
    """Both energy roots of every admissible (n, l) with validity flags."""
    with reporting_errors(fmt):
        _check_format(fmt)
        system = resolve_system(A, V0, R0, a, m0c2, physical_constants(hbar_c))
        table = enumerate_spectrum(system, l_max, A=A)
        for d in table.diagnostics:
            typer.echo(f"excluded n={d.n}, l={d.l}: {d.condition} ({d.message})", err=True)
        for line in particle_branch_lines(table):
            typer.echo(line, err=True)
        _write(emit_table(rows_from_spectrum(table), fmt), output)


@app.command()
def table1(
    oracle: bool = typer.Option(True, "--oracle/--no-oracle", help="Add the physical-domain shooting energy"),
    fmt: str = FormatOption,
    hbar_c: Optional[float] = HbarOption,
    output: Optional[Path] = OutputOption,
):
    """Published binding energies next to the computed roots."""
    with reporting_errors(fmt):
        _check_format(fmt)
        report = table1_report(with_oracle=oracle, constants=physical_constants(hbar_c))
        for item in report.comparisons:
            for line in comparison_lines(item):
                typer.echo(line, err=True)
        _write(emit_table(report.rows, fmt), output)


@app.command()
def wavefunction(
    n: int = typer.Option(0, "--n", help="Radial quantum number"),
    l: int = typer.Option(1, "--l", help="Angular momentum"),
    A: Optional[int] = typer.Option(None, "--A", help="Mass number"),
    V0: Optional[float] = typer.Option(None, "--V0", help="Well depth, MeV"),
    R0: Optional[float] = typer.Option(None, "--R0", help="Nuclear radius, fm"),
    a: Optional[float] = typer.Option(None, "--a", help="Surface diffuseness, fm"),
    m0c2: Optional[float] = typer.Option(None, "--m0c2", help="Rest energy, MeV"),
    points: int = typer.Option(1000, "--points", min=1, help="Number of radial samples"),
    r_max: Optional[float] = typer.Option(None, "--r-max", help="Outer radius, fm (default R0 + 40a)"),
    fmt: str = FormatOption,
    hbar_c: Optional[float] = HbarOption,
    output: Optional[Path] = OutputOption,
):
    """Normalized radial function of the valid (n, l) state as r_fm, z, u columns."""
    with reporting_errors(fmt):
        _check_format(fmt)
        system = resolve_system(A, V0, R0, a, m0c2, physical_constants(hbar_c))
        states = [s for s in energy_roots(system, n, l) if s.valid] or solve_quantization_scan(system, n, l)
        if not states:
            raise ParameterError(f"no root for n={n}, l={l} satisfies the quantization condition")

        spec = wavefunction_spec(system, states[0])
        normalization_constant(spec)
        r_max = r_max if r_max is not None else system.R0 + 40.0 * system.a
        samples = sample_wavefunction(spec, np.linspace(0.0, r_max, points))
        weight = physical_norm_integral(spec)
        typer.echo(f"E={spec.state.energy:.10g} MeV, C={spec.norm:.10g}, weight in r >= 0: {weight:.10g}", err=True)
        records = ({"r_fm": s.r, "z": s.z, "u": s.u} for s in samples)
        _write(emit_records(("r_fm", "z", "u"), records, fmt), output)


@app.command()
def nonrel(
    n: int = typer.Option(0, "--n", help="Radial quantum number"),
    l: int = typer.Option(1, "--l", help="Angular momentum"),
    A: Optional[int] = typer.Option(None, "--A", help="Mass number"),
    V0: Optional[float] = typer.Option(None, "--V0", help="Well depth, MeV"),
    R0: Optional[float] = typer.Option(None, "--R0", help="Nuclear radius, fm"),
    a: Optional[float] = typer.Option(None, "--a", help="Surface diffuseness, fm"),
    m0c2: Optional[float] = typer.Option(None, "--m0c2", help="Rest energy, MeV"),
    fmt: str = FormatOption,
    hbar_c: Optional[float] = HbarOption,
    output: Optional[Path] = OutputOption,
):
    """Schrodinger-limit energy and the relativistic value as c is scaled up."""
    with reporting_errors(fmt):
        _check_format(fmt)
        system = resolve_system(A, V0, R0, a, m0c2, physical_constants(hbar_c))
        e_nr = energy_nonrelativistic(system, n, l)
        records = []
        for kappa in KAPPAS:
            scaled = system.rescaled_light_speed(kappa)
            try:
                e_rel = closed_form_roots(scaled, n, l)[0] - scaled.m0c2
            except NoRealRoot:
                e_rel = None
            records.append({
                "kappa": kappa,
                "E_rel_minus_rest_MeV": e_rel,
                "E_nonrel_MeV": e_nr,
                "gap_MeV": abs(e_rel - e_nr) if e_rel is not None else None,
            })
        columns = ("kappa", "E_rel_minus_rest_MeV", "E_nonrel_MeV", "gap_MeV")
        _write(emit_records(columns, records, fmt), output)


@app.command()
def verify(
    oracle: bool = typer.Option(True, "--oracle/--no-oracle", help="Include the shooting-solver checks"),
    fmt: str = FormatOption,
    hbar_c: Optional[float] = HbarOption,
):
    """Run the self-checks; exit 2 when any fails."""
    from acceptance import run_checks

    with reporting_errors(fmt):
        _check_format(fmt)
        results = run_checks(physical_constants(hbar_c), skip_oracle=not oracle)
        records = [r.model_dump() for r in results]
        sys.stdout.write(emit_records(("name", "passed", "detail"), records, fmt))
    failed = [r.name for r in results if not r.passed]
    if failed:
        failure = VerificationFailure(failed)
        typer.echo(f"error: {failure.message}", err=True)
        raise typer.Exit(failure.exit_code)


@app.command()
def serve(
    host: str = typer.Option("127.0.0.1", "--host"),
    port: int = typer.Option(8000, "--port"),
):
    """Serve the HTTP API."""
    import uvicorn

    uvicorn.run("main:app", host=host, port=port)


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    try:
        result = app(args=argv, prog_name="kgws", standalone_mode=False)
    except AppException as exc:
        typer.echo(f"error: {exc.message}", err=True)
        return exc.exit_code
    except typer.Abort:
        return 1
    except Exception as exc:
        # usage errors come from whichever click typer ships with; they all carry format_message
        format_message = getattr(exc, "format_message", None)
        if format_message is None:
            raise
        typer.echo(f"error: {format_message()}", err=True)
        return 1
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
