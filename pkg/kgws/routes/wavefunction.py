import numpy as np
from fastapi import APIRouter, Query

from exceptions import NoBoundState
from logger import setup_logger
from models import physical_constants, resolve_system
from spectrum import energy_roots
from wavefunction import normalization_constant, physical_norm_integral, sample_wavefunction, wavefunction_spec

router = APIRouter(prefix="/wavefunction", tags=["wavefunction"])
logger = setup_logger("wavefunction_routes")


@router.get("")
def get_wavefunction(
    n: int = Query(0, ge=0),
    l: int = Query(1, ge=0),
    A: int | None = Query(None, ge=1),
    V0: float | None = Query(None, gt=0),
    R0: float | None = Query(None, gt=0),
    a: float | None = Query(None, gt=0),
    m0c2: float | None = Query(None, gt=0),
    hbar_c: float | None = Query(None, gt=0),
    points: int = Query(200, ge=1, le=10_000),
):
    system = resolve_system(A, V0, R0, a, m0c2, physical_constants(hbar_c))
    valid = [s for s in energy_roots(system, n, l) if s.valid]
    if not valid:
        raise NoBoundState("radial-count", f"neither root for n={n}, l={l} satisfies the quantization condition")

    spec = wavefunction_spec(system, valid[0])
    normalization_constant(spec)
    r = np.linspace(0.0, system.R0 + 40.0 * system.a, points)
    samples = sample_wavefunction(spec, r)
    logger.info(f"wavefunction n={n}, l={l}: E={spec.state.energy:.6f} MeV")
    return {
        "energy_MeV": spec.state.energy,
        "eps": spec.eps,
        "q": spec.q,
        "norm": spec.norm,
        "physical_weight": physical_norm_integral(spec),
        "samples": [s.model_dump() for s in samples],
    }
