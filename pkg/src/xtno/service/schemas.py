"""Request/response models for the oracle service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class KPathPreprocessRequest(BaseModel):
    graph: str = Field(description="graph file content")
    k: int
    mode: str = "randomized"
    seed: int = 0
    vertex_failures: bool = False
    amplification: int = 1
    store: bool = True
    include_state: bool = False


class KPathPreprocessResponse(BaseModel):
    oracle_id: Optional[str] = None
    answer: bool
    elapsed_s: float
    n: int
    m: int
    state_b64: Optional[str] = None


class KPathQueryRequest(BaseModel):
    oracle_id: Optional[str] = None
    state_b64: Optional[str] = None
    updates: str = Field(default="", description="update script content")
    strict: bool = True
    brute_force: bool = False


class KPathQueryResponse(BaseModel):
    answer: bool
    witness: str
    elapsed_s: float
    brute_force_answer: Optional[bool] = None
    match: Optional[bool] = None


class UpdatedPairsRequest(BaseModel):
    oracle_id: str
    updates: str = ""
    vertices: list[int] = []
    strict: bool = True


class PairEntry(BaseModel):
    u: int
    v: int
    path_lengths: list[int]


class UpdatedPairsResponse(BaseModel):
    pairs: list[PairEntry]


class CountPreprocessRequest(BaseModel):
    graph: str
    k: int
    epsilon: float = 0.5
    seed: int = 0
    vertex_failures: bool = False
    trials: Optional[int] = None


class CountResponse(BaseModel):
    oracle_id: Optional[str] = None
    estimate: float
    numerator: str
    denominator: str


class CountQueryRequest(BaseModel):
    oracle_id: str
    updates: str = ""
    strict: bool = True


class UndirectedPreprocessRequest(BaseModel):
    graph: str
    k: int
    trials: Optional[int] = None
    seed: int = 0
    sides: Optional[str] = Field(
        default=None, description="two-line bipartition file; fixes the partition"
    )
    store: bool = True
    include_state: bool = False


class UndirectedPreprocessResponse(BaseModel):
    oracle_id: Optional[str] = None
    answer: bool
    elapsed_s: float
    trials: int
    state_b64: Optional[str] = None


class UndirectedQueryRequest(BaseModel):
    oracle_id: Optional[str] = None
    state_b64: Optional[str] = None
    updates: str = ""
    strict: bool = True
    brute_force: bool = False


class UndirectedQueryResponse(BaseModel):
    answer: bool
    elapsed_s: float
    brute_force_answer: Optional[bool] = None
    match: Optional[bool] = None


class LoadStateRequest(BaseModel):
    state_b64: str


class LoadStateResponse(BaseModel):
    oracle_id: str
    kind: str


class SessionCreateRequest(BaseModel):
    problem: str
    mode: str = "randomized"
    seed: int = 0
    k: Optional[int] = None
    m: Optional[int] = None
    d: Optional[int] = None
    count: bool = False
    epsilon: float = 0.5


class SessionCreateResponse(BaseModel):
    session_id: str


class SessionLinesRequest(BaseModel):
    lines: list[str]


class SessionLinesResponse(BaseModel):
    outputs: list[str]


class SessionRunRequest(SessionCreateRequest):
    script: str = ""


class KWalkRequest(BaseModel):
    graph: str
    k: int
    seed: int = 0
    updates: str = ""


class OccupancyRequest(BaseModel):
    graph: str = Field(description="graph file with V1/V2/mu lines appended")
    k: int
    seed: int = 0
    updates: str = ""


class AnswerResponse(BaseModel):
    answer: bool
    elapsed_s: float
