from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Literal

from pydantic import BaseModel, ConfigDict

from config import get_settings
from exceptions import AppException, ParameterError
from logger import setup_logger
from models import NuclearInput, PhysicalConstants, system_from_mass_number
from oracle import OracleConfig, SpectrumComparison, compare_spectra, eigenvalues
from reference import PUBLISHED_TABLE, published_binding
from spectrum import BoundState, SpectrumTable, energy_roots, particle_branch

logger = setup_logger("report")

OutputFormat = Literal["csv", "json"]

TABLE_COLUMNS = (
    "A", "R0_fm", "V0_MeV", "n", "l", "n_prime",
    "E_plus_MeV", "E_minus_MeV", "Eb_plus_MeV", "Eb_minus_MeV",
    "valid_plus", "valid_minus", "residual_plus", "residual_minus",
    "oracle_E_MeV", "published_Eb_MeV",
)


class ReportRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: int | None = None
    R0_fm: float
    V0_MeV: float
    n: int
    l: int
    n_prime: float | None = None
    E_plus_MeV: float | None = None
    E_minus_MeV: float | None = None
    Eb_plus_MeV: float | None = None
    Eb_minus_MeV: float | None = None
    valid_plus: bool | None = None
    valid_minus: bool | None = None
    residual_plus: float | None = None
    residual_minus: float | None = None
    oracle_E_MeV: float | None = None
    published_Eb_MeV: float | None = None


def _round(value: float, digits: int) -> float:
    return value if not math.isfinite(value) else float(f"{value:.{digits}g}")


def _csv_cell(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def emit_records(columns: Iterable[str], records: Iterable[dict], fmt: OutputFormat) -> str:
    """Serialize flat records deterministically: fixed column order, no locale, '\\n' line ends."""
    digits = get_settings().float_digits
    columns = list(columns)
    records = list(records)

    if fmt == "json":
        payload = [
            json_safe({c: _round(r[c], digits) if isinstance(r[c], float) else r[c] for c in columns})
            for r in records
        ]
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ParameterError(f"unknown output format '{fmt}'")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([_csv_cell(r[c], digits) for c in columns])
    return buffer.getvalue()


def emit_table(rows: list[ReportRow], fmt: OutputFormat) -> str:
    ordered = sorted(rows, key=lambda r: (r.l, r.n))
    return emit_records(TABLE_COLUMNS, (r.model_dump() for r in ordered), fmt)


def rows_from_spectrum(table: SpectrumTable) -> list[ReportRow]:
    pairs: dict[tuple[int, int], dict[int, object]] = {}
    for state in table.rows:
        pairs.setdefault((state.l, state.n), {})[state.root_sign] = state

    rows = []
    for (l, n), by_sign in sorted(pairs.items()):
        plus, minus = by_sign.get(1), by_sign.get(-1)
        anchor = plus or minus
        rows.append(ReportRow(
            A=table.A,
            R0_fm=table.system.R0,
            V0_MeV=table.system.V0,
            n=n,
            l=l,
            n_prime=anchor.n_prime,
            E_plus_MeV=plus.energy if plus else None,
            E_minus_MeV=minus.energy if minus else None,
            Eb_plus_MeV=plus.binding if plus else None,
            Eb_minus_MeV=minus.binding if minus else None,
            valid_plus=plus.valid if plus else None,
            valid_minus=minus.valid if minus else None,
            residual_plus=plus.residual if plus else None,
            residual_minus=minus.residual if minus else None,
            published_Eb_MeV=published_binding(table.A, n, l) if table.A else None,
        ))
    return rows


class Table1Comparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: int
    n: int
    comparison: SpectrumComparison


class Table1Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: list[ReportRow]
    comparisons: list[Table1Comparison] = []


def table1_report(
    with_oracle: bool = True,
    oracle_config: OracleConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> Table1Report:
    """Computed roots next to the published binding energies, one row per published state.

    With the oracle on, each row's two roots are also paired with the
    physical-domain shooting eigenvalues of the same l.
    """
    settings = get_settings()
    config = oracle_config or OracleConfig(
        domain="physical",
        step=settings.table1_oracle_step,
        scan_points=settings.table1_oracle_scan_points,
    )
    spectra = {}
    rows, comparisons = [], []
    for ref in PUBLISHED_TABLE:
        system = system_from_mass_number(NuclearInput(A=ref.A), constants)
        fields = dict(A=ref.A, R0_fm=system.R0, V0_MeV=system.V0, n=ref.n, l=ref.l, published_Eb_MeV=ref.Eb_MeV)
        roots: list[BoundState] = []
        try:
            plus, minus = energy_roots(system, ref.n, ref.l)
            roots = [plus, minus]
            fields.update(
                n_prime=plus.n_prime,
                E_plus_MeV=plus.energy, E_minus_MeV=minus.energy,
                Eb_plus_MeV=plus.binding, Eb_minus_MeV=minus.binding,
                valid_plus=plus.valid, valid_minus=minus.valid,
                residual_plus=plus.residual, residual_minus=minus.residual,
            )
        except AppException as exc:
            logger.warning(f"A={ref.A}, n={ref.n}, l={ref.l}: {exc.message}")

        if with_oracle:
            key = (ref.A, ref.l)
            if key not in spectra:
                spectra[key] = eigenvalues(system, ref.l, config)
            fields["oracle_E_MeV"] = spectra[key].energy_with_nodes(ref.n)
            analytic = SpectrumTable(system=system, A=ref.A, rows=roots)
            comparisons.append(Table1Comparison(
                A=ref.A, n=ref.n, comparison=compare_spectra(analytic, spectra[key], config.match_tol)
            ))
        rows.append(ReportRow(**fields))
    return Table1Report(rows=rows, comparisons=comparisons)


def table1_rows(
    with_oracle: bool = True,
    oracle_config: OracleConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> list[ReportRow]:
    return table1_report(with_oracle, oracle_config, constants).rows


def comparison_lines(item: Table1Comparison) -> list[str]:
    """One human-readable line per matched, spurious, missed or unexplained energy."""
    c = item.comparison
    head = f"A={item.A}, n={item.n}, l={c.l}"
    lines = [
        f"{head}: E={m.analytic:.10g} MeV matches shooting E={m.oracle:.10g} MeV ({m.nodes} node(s))"
        for m in c.matches
    ]
    lines += [f"{head}: E={u.energy:.10g} MeV {u.classification}" for u in c.unmatched_analytic]
    lines += [f"{head}: shooting E={E:.10g} MeV has no analytic root" for E in c.unmatched_oracle]
    return lines


def json_safe(record: dict) -> dict:
    """Non-finite floats become None so JSON output stays strict."""
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in record.items()}


def particle_branch_lines(table: SpectrumTable) -> list[str]:
    """Labels for the valid roots inside (-m0c2, m0c2)."""
    return [
        f"n={s.n}, l={s.l}: E{'+' if s.root_sign > 0 else '-'}={s.energy:.10g} MeV is the particle branch"
        for s in table.rows
        if s.valid and particle_branch(s)
    ]
