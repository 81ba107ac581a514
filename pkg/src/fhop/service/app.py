"""HTTP front for the toolkit: one POST route per mode, one GET for health.

Validation failures map to 400, storage failures to 500; both carry the
error message in the response detail.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import StorageError, ValidationError
from . import handlers, schemas


def create_app() -> FastAPI:
    app = FastAPI(title="fhop service")

    def guarded(fn, req):
        try:
            return fn(req)
        except ValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except StorageError as exc:
            raise HTTPException(status_code=500, detail=str(exc))

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return handlers.health()

    @app.post("/synth", response_model=schemas.SynthResponse)
    def synth(req: schemas.SynthRequest):
        return guarded(handlers.synth, req)

    @app.post("/train", response_model=schemas.TrainResponse)
    def train(req: schemas.TrainRequest):
        return guarded(handlers.train, req)

    @app.post("/run", response_model=schemas.RunResponse)
    def run(req: schemas.RunRequest):
        return guarded(handlers.run, req)

    @app.post("/oracle", response_model=schemas.TraceResponse)
    def oracle(req: schemas.OracleRequest):
        return guarded(handlers.oracle, req)

    @app.post("/baseline", response_model=schemas.TraceResponse)
    def baseline(req: schemas.BaselineRequest):
        return guarded(handlers.baseline, req)

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        return guarded(handlers.sweep, req)

    @app.post("/eval", response_model=schemas.EvalReportModel)
    def eval_trace(req: schemas.EvalRequest):
        return guarded(handlers.eval_trace, req)

    @app.post("/report", response_model=schemas.ReportResponse)
    def report(req: schemas.ReportRequest):
        return guarded(handlers.report, req)

    @app.post("/logs/validate", response_model=schemas.ValidateLogResponse)
    def validate_log(req: schemas.ValidateLogRequest):
        return guarded(handlers.validate_log, req)

    return app


app = create_app()
