from fastapi import APIRouter

from config import get_settings
from models import PhysicalConstants

router = APIRouter(prefix="/meta", tags=["meta"])


@router.get("/health")
def health():
    settings = get_settings()
    return {
        "status": "healthy",
        "app": settings.app_name,
        "version": settings.app_version,
        "hbar_c": PhysicalConstants().hbar_c,
    }


@router.get("/defaults")
def defaults():
    """Nuclear parameters used when a system is given by its mass number."""
    settings = get_settings()
    return {
        "r0": settings.r0,
        "a": settings.diffuseness,
        "m0c2": settings.m0c2,
        "scan_points": settings.scan_points,
        "oracle_domain": settings.oracle_domain,
    }
