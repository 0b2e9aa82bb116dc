"""HTTP service wrapping the command layer.

POST /v1/run/{command} takes the same document the CLI reads from disk and
returns the result table as JSON. Domain errors map to 400, config errors
to 422, and numerical-convergence failures to 500, each with a
machine-parsable body {"error_type", "message", "data"}.
"""

from __future__ import annotations

from enum import Enum
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .commands import run_command
from .config import RunConfigModel, list_presets, load_preset
from .errors import ConfigError, ConvergenceError, DomainError
from .tables import ResultTable


class CommandName(str, Enum):
    derive = "derive"
    steady = "steady"
    spectrum = "spectrum"
    sweep_n = "sweep-n"
    tuning = "tuning"
    invert = "invert"
    oracle = "oracle"
    metrics = "metrics"
    fig2 = "fig2"
    fig3 = "fig3"
    fig4 = "fig4"


class ResultTableModel(BaseModel):
    provenance: dict
    columns: list[str]
    rows: list[list[Any]]

    @classmethod
    def from_table(cls, table: ResultTable) -> "ResultTableModel":
        return cls(
            provenance=dict(table.provenance),
            columns=list(table.columns),
            rows=[list(r) for r in table.rows],
        )

    def to_table(self) -> ResultTable:
        return ResultTable(
            columns=tuple(self.columns),
            rows=tuple(tuple(r) for r in self.rows),
            provenance=self.provenance,
        )


class HealthModel(BaseModel):
    status: str
    version: str


class PresetListModel(BaseModel):
    presets: list[str]


app = FastAPI(
    title="omitcharge",
    version=__version__,
    description="OMIT charge-detection simulator: steady states, probe "
    "spectra, time-domain checks, and charge inversion.",
)


def _error_payload(exc: Exception, error_type: str) -> dict:
    data: dict[str, Any] = {}
    for attr in ("attainable", "beta", "kappa", "gamma_m", "roots"):
        value = getattr(exc, attr, None)
        if value is not None:
            data[attr] = list(value) if isinstance(value, tuple) else value
    return {"error_type": error_type, "message": str(exc), "data": data}


@app.exception_handler(ConfigError)
async def _config_error(request: Request, exc: ConfigError):
    return JSONResponse(status_code=422, content=_error_payload(exc, "config"))


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return JSONResponse(status_code=400, content=_error_payload(exc, "domain"))


@app.exception_handler(ConvergenceError)
async def _convergence_error(request: Request, exc: ConvergenceError):
    return JSONResponse(status_code=500, content=_error_payload(exc, "convergence"))


@app.get("/health", response_model=HealthModel)
def health() -> HealthModel:
    return HealthModel(status="ok", version=__version__)


@app.get("/v1/presets", response_model=PresetListModel)
def presets() -> PresetListModel:
    return PresetListModel(presets=list_presets())


@app.get("/v1/presets/{name}")
def preset(name: str) -> dict:
    return load_preset(name)


@app.post("/v1/run/{command}", response_model=ResultTableModel)
def run(command: CommandName, cfg: RunConfigModel) -> ResultTableModel:
    table = run_command(command.value, cfg)
    return ResultTableModel.from_table(table)
