from fastapi import Request
from fastapi.responses import JSONResponse

from logger import setup_logger

logger = setup_logger("exceptions")


class AppException(Exception):
    def __init__(self, message: str, exit_code: int = 1, status_code: int = 400):
        self.message = message
        self.exit_code = exit_code
        self.status_code = status_code
        super().__init__(message)


class ParameterError(AppException):
    def __init__(self, message: str):
        super().__init__(message, 1, 400)


class DomainError(AppException):
    def __init__(self, message: str):
        super().__init__(message, 1, 422)


class NoBoundState(AppException):
    """Raised when an existence condition rules out the requested state.

    ``condition`` is ``"radial-count"`` (no n with n' > 0) or
    ``"depth-window"`` (V0 outside the interval where gamma^2 > 0).
    """

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(message, 1, 404)


class NoRealRoot(AppException):
    def __init__(self, n: int, l: int, discriminant: float):
        self.discriminant = discriminant
        super().__init__(
            f"Energy quadratic for n={n}, l={l} has complex roots "
            f"(discriminant {discriminant:.6g})",
            1,
            404,
        )


class NonNormalizable(AppException):
    def __init__(self, message: str):
        super().__init__(message, 1, 422)


class DegenerateProblem(AppException):
    def __init__(self, message: str = "Zero-discriminant condition holds for every k"):
        super().__init__(message, 1, 422)


class NoValidBranch(AppException):
    def __init__(self, message: str = "No (k, sign) branch gives tau' < 0 with its root inside the interval"):
        super().__init__(message, 1, 422)


class AmbiguousBranch(AppException):
    def __init__(self, count: int):
        super().__init__(f"{count} branches satisfy the selection rules; expected exactly one", 1, 422)


class NonDecayingAsymptotics(AppException):
    def __init__(self, energy: float, eps2: float):
        super().__init__(
            f"E={energy:.10g} MeV gives eps^2={eps2:.6g} <= 0: no decaying solution at large r",
            1,
            422,
        )


class VerificationFailure(AppException):
    def __init__(self, failed: list[str]):
        self.failed = failed
        super().__init__(f"{len(failed)} acceptance check(s) failed: {', '.join(failed)}", 2, 500)


def error_payload(exc: AppException) -> dict:
    return {
        "error": {
            "type": exc.__class__.__name__,
            "message": exc.message,
            "exit_code": exc.exit_code,
        }
    }


async def app_exception_handler(request: Request, exc: AppException):
    logger.error(f"{exc.__class__.__name__}: {exc.message}")
    return JSONResponse(
        status_code=exc.status_code,
        content={"detail": exc.message, "type": exc.__class__.__name__}
    )


async def general_exception_handler(request: Request, exc: Exception):
    logger.error(f"Unhandled exception: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={"detail": "Internal server error", "type": "InternalServerError"}
    )
