"""HTTP decision-tool backend: one immutable model per process.

Endpoints
---------
- ``GET /health`` -> ``{"status": "ok", "model": <name>}``
- ``GET /network`` -> variable catalog (ids, names, categories, roles,
  states) and edges.
- ``POST /infer`` body ``{"evidence": {var: state}}`` -> ``{"posteriors":
  {var: [p, ...]}}`` for every non-evidenced variable.
- ``POST /predict`` body as above -> ``{"predictions": [{"variable",
  "state", "confidence"}, ...]}`` for the output-role variables.

Evidence states are state labels or 1-based state numbers. Domain errors
return 400 with ``{"error": {"code", "message"}}`` where code is one of
``unknown_variable``, ``bad_state``, ``impossible_evidence``.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import DataFormatError, EvidenceError, ImpossibleEvidenceError
from .fileio import resolve_state
from .inference import posterior_ve, predict
from .model import Network


class EvidenceBody(BaseModel):
    evidence: dict[str, Any] = {}


def _resolve_evidence(net: Network, raw: dict[str, Any]) -> dict[str, int]:
    known = set(net.var_ids)
    out = {}
    for var_id, token in raw.items():
        if var_id not in known:
            raise EvidenceError("unknown_variable", f"unknown variable '{var_id}'")
        try:
            out[var_id] = resolve_state(net.variable(var_id), token)
        except DataFormatError as exc:
            raise EvidenceError("bad_state", str(exc)) from None
    return out


def create_app(net: Network) -> FastAPI:
    app = FastAPI(title="profilernet", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(EvidenceError)
    async def _evidence_error(request: Request, exc: EvidenceError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.exception_handler(ImpossibleEvidenceError)
    async def _impossible(request: Request, exc: ImpossibleEvidenceError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "model": net.metadata.get("name", "unnamed")}

    @app.get("/network")
    def network():
        return {
            "name": net.metadata.get("name", "unnamed"),
            "metadata": net.metadata,
            "variables": [
                {
                    "id": v.id,
                    "name": v.display_name,
                    "category": v.category,
                    "role": v.role,
                    "states": list(v.states),
                }
                for v in net.variables
            ],
            "edges": [list(e) for e in net.structure.edges],
        }

    @app.post("/infer")
    def infer(body: EvidenceBody):
        evidence = _resolve_evidence(net, body.evidence)
        posteriors = {
            var_id: [float(p) for p in posterior_ve(net, evidence, var_id).probs]
            for var_id in net.var_ids
            if var_id not in evidence
        }
        return {"posteriors": posteriors}

    @app.post("/predict")
    def predict_profile_route(body: EvidenceBody):
        evidence = _resolve_evidence(net, body.evidence)
        predictions = []
        for var_id in net.output_ids:
            if var_id in evidence:
                raise EvidenceError(
                    "bad_state", f"output variable '{var_id}' cannot be used as evidence"
                )
            p = predict(posterior_ve(net, evidence, var_id))
            predictions.append({
                "variable": var_id,
                "state": net.variable(var_id).states[p.predicted_state],
                "confidence": p.confidence,
            })
        return {"predictions": predictions}

    return app


def run_server(net: Network, host: str = "127.0.0.1", port: int = 8421) -> None:
    import uvicorn

    uvicorn.run(create_app(net), host=host, port=port, log_level="warning")
