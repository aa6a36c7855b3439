"""HTTP front end over :mod:`provn.commands`.

Run with ``uvicorn provn.service:app``.  Each command has its own endpoint;
``POST /run`` takes ``{"command": ..., "args": {...}}`` and is what the
command line uses with ``--server``.
"""
from __future__ import annotations

from typing import List, Literal, Optional

from fastapi import FastAPI
from pydantic import BaseModel, Field, ValidationError

from . import commands
from .commands import SCHEMA_VERSION


class Result(BaseModel):
    exit_code: int
    text: str
    data: dict


class NormalizeRequest(BaseModel):
    expr: str


class OrdinalRequest(BaseModel):
    expr: str
    measure: str = "pi1"


class PairRequest(BaseModel):
    a: str
    b: str


class ConservesRequest(PairRequest):
    cls: str = "Pi1"


class EmitRequest(BaseModel):
    kind: str
    theory: str
    target: str


class AxiomsRequest(BaseModel):
    expr: str
    stage: Optional[str] = None
    max_code: int = Field(1000, ge=0)
    fuel: int = Field(10_000, gt=0)
    candidates: List[str] = []


class EvalRequest(BaseModel):
    sentence: str
    fuel: int = Field(100_000, gt=0)
    qbound: int = Field(100, gt=0)


class RunRequest(BaseModel):
    command: Literal[commands.COMMANDS]
    args: dict = {}


_MODELS = {
    "normalize": NormalizeRequest, "ordinal": OrdinalRequest, "includes": PairRequest,
    "conserves": ConservesRequest, "emit": EmitRequest, "axioms": AxiomsRequest,
    "eval": EvalRequest,
}

app = FastAPI(title="provn", version="0.1.0")


def _result(command, req: BaseModel) -> Result:
    r = commands.run(command, **req.model_dump())
    return Result(exit_code=r.exit_code, text=r.text, data=r.data)


@app.get("/health")
def health():
    return {"status": "ok", "schema_version": SCHEMA_VERSION}


@app.post("/run", response_model=Result)
def run(req: RunRequest):
    model = _MODELS[req.command]
    try:
        parsed = model(**req.args)
    except ValidationError as exc:
        err = exc.errors()[0]
        msg = f"invalid argument {'.'.join(map(str, err['loc']))}: {err['msg']}"
        return Result(exit_code=commands.INPUT_ERROR, text=f"error: {msg}",
                      data={"schema_version": SCHEMA_VERSION, "command": req.command,
                            "status": "error", "error": msg})
    return _result(req.command, parsed)


@app.post("/normalize", response_model=Result)
def normalize(req: NormalizeRequest):
    return _result("normalize", req)


@app.post("/ordinal", response_model=Result)
def ordinal(req: OrdinalRequest):
    return _result("ordinal", req)


@app.post("/includes", response_model=Result)
def includes(req: PairRequest):
    return _result("includes", req)


@app.post("/conserves", response_model=Result)
def conserves(req: ConservesRequest):
    return _result("conserves", req)


@app.post("/emit", response_model=Result)
def emit(req: EmitRequest):
    return _result("emit", req)


@app.post("/axioms", response_model=Result)
def axioms(req: AxiomsRequest):
    return _result("axioms", req)


@app.post("/eval", response_model=Result)
def eval_(req: EvalRequest):
    return _result("eval", req)
