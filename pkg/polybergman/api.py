# HTTP mirror of the command-line checks; responses are the same versioned reports.

import logging
from typing import Callable, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, ValidationError

from . import __version__
from .cli import RunConfig, cmd_eval, cmd_gram, cmd_kernel, cmd_ledger, cmd_project
from .config import config
from .expressions import ExpressionError
from .special_fn import NonConvergenceError

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Poly-Bergman Workbench",
    description="Disc polynomials, weighted poly-Bergman kernels and projections with oracle cross-checks.",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request models; range checks happen in RunConfig so that they map to HTTP 400.
class BaseRequest(BaseModel):
    gamma: float = Field(0.0, description="Weight exponent, must exceed -1")
    tol: Optional[float] = Field(None, description="Check tolerance; per-command default when omitted")
    radial_nodes: int = Field(default_factory=lambda: config.RADIAL_NODES)
    angular_nodes: int = Field(default_factory=lambda: config.ANGULAR_NODES)
    seed: int = Field(default_factory=lambda: config.SEED)


class EvalRequest(BaseRequest):
    m: int = 0
    n: int = 0
    reps: list[str] = Field(default_factory=lambda: ["jacobi"], description="Subset of jacobi, sum, rodrigues")
    points: list[tuple[float, float]] = Field(default_factory=list, description="Points as [re, im] pairs")
    grid: Optional[tuple[int, int]] = None
    grid_radius: float = 0.8


class GramRequest(BaseRequest):
    max_m: int = 4
    max_n: int = 4


class KernelRequest(BaseRequest):
    n: int = 0
    trunc: Optional[int] = None
    points: list[tuple[float, float]] = Field(default_factory=list)
    grid: Optional[tuple[int, int]] = None
    grid_radius: float = 0.8


class ProjectRequest(BaseRequest):
    input: str = Field(..., description="Expression, coefficient file or random:ORDER,DEGREE")
    n: int = 0
    trunc: Optional[int] = None
    expect_member: Optional[int] = None


class HealthResponse(BaseModel):
    status: str
    version: str
    config_valid: bool


def _run(handler: Callable[[RunConfig], tuple[int, dict]], request: BaseModel) -> dict:
    try:
        run = RunConfig(**request.model_dump())
        _, report = handler(run)
    except (ValidationError, ExpressionError, ValueError) as e:
        logger.error(f"Rejected {handler.__name__} request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except NonConvergenceError as e:
        logger.error(f"Error in {handler.__name__}: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    return report


@app.get("/health", response_model=HealthResponse)
def health_check():
    is_valid, _ = config.validate_config()
    return HealthResponse(status="healthy", version=__version__, config_valid=is_valid)


@app.get("/")
def root():
    return {
        "message": "Poly-Bergman Workbench API",
        "version": __version__,
        "endpoints": {
            "/eval": "POST - evaluate disc polynomials",
            "/gram": "POST - orthogonality check",
            "/kernel": "POST - series against closed-form kernel",
            "/project": "POST - expansion, decomposition and membership",
            "/ledger": "POST - derivation ledger",
            "/health": "GET - health check",
        },
    }


@app.post("/eval")
def eval_endpoint(request: EvalRequest):
    return _run(cmd_eval, request)


@app.post("/gram")
def gram_endpoint(request: GramRequest):
    return _run(cmd_gram, request)


@app.post("/kernel")
def kernel_endpoint(request: KernelRequest):
    return _run(cmd_kernel, request)


@app.post("/project")
def project_endpoint(request: ProjectRequest):
    return _run(cmd_project, request)


@app.post("/ledger")
def ledger_endpoint(request: BaseRequest):
    return _run(cmd_ledger, request)
