"""FastAPI application implementing the backend wire protocol.

POST /fill_mask {text, top_k}        -> {predictions: [{token, probability}]}
POST /entail    {premise, hypothesis} -> {entail, neutral, contradict}
POST /embed     {tokens: [...]}       -> {dim, vectors: {word: [floats] | null}}
POST /head_word {sentence, span}      -> {head: string | null}

Malformed requests get 400; inference failures get 500 with an error
body.  Requests are handled statelessly, so concurrent calls are safe.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from fgtyper_sidecar.config import SidecarConfig
from fgtyper_sidecar.embeddings import EmbeddingTable
from fgtyper_sidecar.headword import head_word
from fgtyper_sidecar.models import EntailmentScorer, MaskFiller


class FillMaskRequest(BaseModel):
    text: str
    top_k: int = Field(ge=1)


class EntailRequest(BaseModel):
    premise: str = Field(min_length=1)
    hypothesis: str = Field(min_length=1)


class EmbedRequest(BaseModel):
    tokens: list[str]


class Span(BaseModel):
    start: int
    end: int


class HeadWordRequest(BaseModel):
    sentence: str
    span: Span


def create_app(config: SidecarConfig) -> FastAPI:
    filler = MaskFiller(config.mlm_model)
    scorer = EntailmentScorer(config.nli_model)
    table = EmbeddingTable.load(config.embeddings_path)

    app = FastAPI(title="fgtyper sidecar")

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ValueError)
    async def bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(Exception)
    async def inference_failure(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.post("/fill_mask")
    def fill_mask(req: FillMaskRequest):
        return {"predictions": filler.predict(req.text, req.top_k)}

    @app.post("/entail")
    def entail(req: EntailRequest):
        return scorer.score(req.premise, req.hypothesis)

    @app.post("/embed")
    def embed(req: EmbedRequest):
        return {"dim": table.dim, "vectors": table.lookup(req.tokens)}

    @app.post("/head_word")
    def head(req: HeadWordRequest):
        return {"head": head_word(req.sentence, req.span.start, req.span.end)}

    return app
