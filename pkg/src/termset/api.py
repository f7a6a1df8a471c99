"""HTTP surface for the session service.

Thin JSON wiring over SessionService: every route delegates to one
service call and maps domain errors onto status codes (validation 400,
not-found 404, state-machine violation 409, solver failure 500).  Error
bodies are always {"error": code, "detail": message}.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from .errors import ConvergenceError, NotFoundError, StateError, ValidationError
from .expansion import ExpansionConfig
from .service import Session, SessionService

_HYPERPARAM_KEYS = frozenset({"svm_c", "rbf_gamma", "snr_epsilon"})


class CreateSessionRequest(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    model: str
    method: str
    k: int = 10
    hyperparams: dict[str, float] = Field(default_factory=dict)
    seed_positives: list[str]
    seed_negatives: list[str] = Field(default_factory=list)


class SubmitLabelsRequest(BaseModel):
    labels: dict[str, bool]


def _config_from_request(req: CreateSessionRequest) -> ExpansionConfig:
    unknown = sorted(set(req.hyperparams) - _HYPERPARAM_KEYS)
    if unknown:
        raise ValidationError(f"unknown hyperparameters: {unknown}")
    kwargs = {"method": req.method, "k": req.k}
    kwargs.update(req.hyperparams)
    return ExpansionConfig(**kwargs)


def _session_state(session: Session) -> dict:
    doc = session.to_json_dict()
    del doc["schema_version"]
    return doc


def create_app(service: SessionService) -> FastAPI:
    app = FastAPI(title="termset annotation service")

    @app.exception_handler(ValidationError)
    async def _validation(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400, content={"error": "validation", "detail": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def _request_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "validation", "detail": str(exc)}
        )

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(
            status_code=404, content={"error": "not-found", "detail": str(exc)}
        )

    @app.exception_handler(StateError)
    async def _conflict(request: Request, exc: StateError):
        return JSONResponse(
            status_code=409, content={"error": "conflict", "detail": str(exc)}
        )

    @app.exception_handler(ConvergenceError)
    async def _convergence(request: Request, exc: ConvergenceError):
        return JSONResponse(
            status_code=500, content={"error": "convergence", "detail": str(exc)}
        )

    @app.post("/models")
    def list_models():
        return {"models": service.list_models()}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        session = service.create_session(
            req.model,
            _config_from_request(req),
            req.seed_positives,
            req.seed_negatives,
        )
        return {"session_id": session.id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_state(service.get_session(session_id))

    @app.post("/sessions/{session_id}/candidates")
    def request_candidates(session_id: str):
        return {"candidates": service.request_candidates(session_id)}

    @app.post("/sessions/{session_id}/labels")
    def submit_labels(session_id: str, req: SubmitLabelsRequest):
        session = service.submit_labels(session_id, req.labels)
        return {
            "iteration": session.iteration,
            "positives_this_round": session.history[-1],
            "history": list(session.history),
        }

    @app.get("/sessions/{session_id}/export")
    def export_lexicon(
        session_id: str, mode: str, threshold: float = 0.0
    ):
        return {"terms": service.export_lexicon(session_id, mode, threshold)}

    return app
