from fastapi import APIRouter, Query

from config import get_settings
from exceptions import NoRealRoot
from logger import setup_logger
from models import physical_constants, resolve_system
from report import json_safe, rows_from_spectrum, table1_report
from spectrum import closed_form_roots, energy_nonrelativistic, enumerate_spectrum

router = APIRouter(prefix="/spectrum", tags=["spectrum"])
settings = get_settings()
logger = setup_logger("spectrum_routes")


@router.get("")
def list_spectrum(
    A: int | None = Query(None, ge=1),
    V0: float | None = Query(None, gt=0),
    R0: float | None = Query(None, gt=0),
    a: float | None = Query(None, gt=0),
    m0c2: float | None = Query(None, gt=0),
    hbar_c: float | None = Query(None, gt=0),
    l_max: int = Query(3, ge=0, le=20),
):
    system = resolve_system(A, V0, R0, a, m0c2, physical_constants(hbar_c))
    table = enumerate_spectrum(system, l_max, A=A)
    logger.info(f"spectrum: {len(table.rows)} candidate(s) up to l={l_max}")
    return {
        "system": system.model_dump(),
        "alpha": system.alpha,
        "rows": [json_safe(r.model_dump()) for r in rows_from_spectrum(table)],
        "diagnostics": [d.model_dump() for d in table.diagnostics],
    }


@router.get("/table1")
def table1(
    oracle: bool = Query(False),
    hbar_c: float | None = Query(None, gt=0),
):
    report = table1_report(with_oracle=oracle, constants=physical_constants(hbar_c))
    return {
        "rows": [json_safe(r.model_dump()) for r in report.rows],
        "comparisons": [c.model_dump() for c in report.comparisons],
    }


@router.get("/nonrel")
def nonrelativistic(
    n: int = Query(0, ge=0),
    l: int = Query(1, ge=0),
    A: int | None = Query(None, ge=1),
    V0: float | None = Query(None, gt=0),
    R0: float | None = Query(None, gt=0),
    a: float | None = Query(None, gt=0),
    m0c2: float | None = Query(None, gt=0),
    hbar_c: float | None = Query(None, gt=0),
):
    system = resolve_system(A, V0, R0, a, m0c2, physical_constants(hbar_c))
    e_nr = energy_nonrelativistic(system, n, l)
    try:
        e_rel = closed_form_roots(system, n, l)[0] - system.m0c2
    except NoRealRoot:
        e_rel = None
    return {"n": n, "l": l, "E_nonrel_MeV": e_nr, "E_rel_minus_rest_MeV": e_rel}
