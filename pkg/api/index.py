from __future__ import annotations

from pathlib import Path
import sys

from fastapi import Depends, FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from mangum import Mangum
from pydantic import BaseModel, Field

ROOT_DIR = Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.append(str(ROOT_DIR))

from rurpi.config import SolveConfig, get_settings
from rurpi.errors import (
    EmptyVariety,
    NoSeparatingForm,
    NotZeroDimensional,
    ParseError,
    ReconstructionFailed,
    UsageError,
)
from rurpi.executor import shutdown_executor
from rurpi.models.document import RurDocument
from rurpi.parser import format_system, parse_system
from rurpi.services import SolverService
from rurpi.systems import generate

app = FastAPI(
    title="rurpi",
    version="0.1.0",
    description=(
        "Certified rational univariate representations of zero-dimensional polynomial systems."
    ),
    default_response_class=JSONResponse,
)


class SolveRequest(BaseModel):
    system: str = Field(description="System text: a 'vars:' line, then one polynomial per line")
    certify: int | None = Field(default=None, ge=0)
    isolate: bool = False
    precision: int | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0, lt=1 << 64)
    confirm: int | None = Field(default=None, ge=0)


def get_solver_service() -> SolverService:
    return SolverService()


@app.get("/health", tags=["system"])
async def healthcheck() -> dict[str, str]:
    return {"status": "ok"}


@app.post("/solve", tags=["solve"], response_model=RurDocument, response_model_exclude_none=True)
async def solve(
    request: SolveRequest, service: SolverService = Depends(get_solver_service)
):
    try:
        system = parse_system(request.system, "request")
    except ParseError as exc:
        raise HTTPException(
            status_code=422,
            detail={"message": exc.message, "line": exc.line, "column": exc.column},
        ) from exc
    config = SolveConfig.from_settings(
        get_settings(),
        certify_mode=request.certify,
        isolate=request.isolate,
        precision=request.precision,
        seed=request.seed,
        confirm_extra=request.confirm,
    )
    try:
        return await service.solve_document(system, config)
    except (NotZeroDimensional, EmptyVariety) as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    except (NoSeparatingForm, ReconstructionFailed) as exc:
        raise HTTPException(status_code=503, detail=str(exc)) from exc
    except UsageError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/systems/{family}", tags=["systems"])
async def system_text(
    family: str,
    size: int = Query(4, ge=2, le=12, description="Number of variables"),
) -> dict[str, str]:
    try:
        return {"system": format_system(generate(family, size))}
    except UsageError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc


@app.on_event("shutdown")
async def on_shutdown() -> None:
    shutdown_executor()


handler = Mangum(app, api_gateway_base_path="/api")
