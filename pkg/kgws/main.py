import time
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.gzip import GZipMiddleware

from config import get_settings
from exceptions import AppException, app_exception_handler, general_exception_handler
from logger import setup_logger
from routes import meta, spectrum, wavefunction

settings = get_settings()
logger = setup_logger("main")


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"{settings.app_name} v{settings.app_version} started")
    logger.info(
        f"hbar*c={settings.hbar_c} MeV fm, r0={settings.r0} fm, "
        f"a={settings.diffuseness} fm, m0c2={settings.m0c2} MeV"
    )
    yield
    logger.info(f"{settings.app_name} stopped")


app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Klein-Gordon Woods-Saxon spectra, wavefunctions and shooting cross-checks",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_methods=["GET"],
    allow_headers=["Content-Type"],
)

# sampled wavefunctions run to thousands of rows
app.add_middleware(GZipMiddleware, minimum_size=1000)


@app.middleware("http")
async def timing(request: Request, call_next):
    start = time.perf_counter()
    response: Response = await call_next(request)
    elapsed = time.perf_counter() - start

    response.headers["X-Process-Time"] = f"{elapsed:.6f}"
    logger.info(f"{request.method} {request.url.path}?{request.url.query} -> {response.status_code} ({elapsed:.3f}s)")
    return response


app.add_exception_handler(AppException, app_exception_handler)
app.add_exception_handler(Exception, general_exception_handler)

for module in (meta, spectrum, wavefunction):
    app.include_router(module.router)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("main:app", host="127.0.0.1", port=8000, reload=settings.debug)
