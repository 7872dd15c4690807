from contextlib import asynccontextmanager
from typing import List

from fastapi import FastAPI, HTTPException

from backend.core import list_schemes, run_single, run_sweep_table
from backend.schemas import RunRequest, SchemeInfo, SweepRequest, SweepResponse
from errors import FdNomaError
from harness.report import ExperimentReport
from logger import log_error, log_info
from network.config import list_scenarios

scenarios: List[str] = []


@asynccontextmanager
async def lifespan(app: FastAPI):
    global scenarios
    scenarios = list_scenarios()
    log_info(f"Serving {len(scenarios)} catalogue scenarios")
    yield


app = FastAPI(title="fdnoma-sim API", lifespan=lifespan)


def _failure(e: Exception) -> HTTPException:
    if isinstance(e, FdNomaError):
        return HTTPException(status_code=422, detail=str(e))
    log_error(f"Request failed: {e}")
    return HTTPException(status_code=500, detail=str(e))


@app.get("/api/scenarios")
async def get_scenarios() -> list[str]:
    return scenarios


@app.get("/api/schemes", response_model=list[SchemeInfo])
async def get_schemes():
    return list_schemes()


@app.post("/api/run", response_model=ExperimentReport)
def run(req: RunRequest):
    try:
        return run_single(req)
    except Exception as e:
        raise _failure(e)


@app.post("/api/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest):
    try:
        return run_sweep_table(req)
    except Exception as e:
        raise _failure(e)
