"""Request/response models. Exact rationals travel as "num/den" strings and
floats are rendered at 17 significant digits by the text layer; series
entries are comma-joined coefficient lists."""

from __future__ import annotations

from pydantic import BaseModel, Field


class DocumentRequest(BaseModel):
    document: str


class MatrixModeRequest(DocumentRequest):
    mode: str = "numeric"  # "numeric" | "series"
    order: int = Field(default=16, ge=0)


class MatrixResponse(BaseModel):
    status: str = "ok"
    kind: str  # "rational" | "series" | "float"
    rows: list[str]
    cols: list[str]
    entries: list[list[str]]
    order: int | None = None


class MinorRequest(MatrixModeRequest):
    rows: list[str]
    cols: list[str]
    hitting: bool = False


class ValueResponse(BaseModel):
    status: str = "ok"
    value: str


class LoopEraseRequest(DocumentRequest):
    walk: list[int]
    start: str | None = None  # needed only for the empty walk


class LoopEraseResponse(BaseModel):
    status: str = "ok"
    start: str
    edges: list[int]
    vertices: list[str]


class OracleCheckRequest(DocumentRequest):
    rows: list[str]
    cols: list[str]
    order: int = Field(default=10, ge=0)
    planar: bool = False
    hitting: bool = False


class CoefficientRow(BaseModel):
    power: int
    oracle: str
    determinant: str


class OracleCheckResponse(BaseModel):
    status: str  # "match" | "mismatch"
    coefficients: list[CoefficientRow]


class TnnCheckRequest(DocumentRequest):
    rows: list[str] | None = None
    cols: list[str] | None = None
    hitting: bool = False
    max_minor: int = Field(default=4, ge=1)
    order: int = Field(default=16, ge=0)


class WitnessModel(BaseModel):
    rows: list[str]
    cols: list[str]
    value: str


class TnnCheckResponse(BaseModel):
    status: str = "ok"
    totally_nonnegative: bool
    witness: WitnessModel | None = None


class IngermanRequest(DocumentRequest):
    rows: list[str]
    cols: list[str]


class FamilyModel(BaseModel):
    paths: list[list[int]]
    assignment: list[int]
    weight: str
    kirchhoff_minor: str
    contribution: str


class IngermanResponse(BaseModel):
    status: str = "ok"
    response_minor: str
    hitting_minor: str
    families: list[FamilyModel]


class DocumentResponse(BaseModel):
    status: str = "ok"
    document: str


class McRequest(DocumentRequest):
    rows: list[str]
    cols: list[str] | None = None
    col_sets: list[list[str]] | None = None
    samples: int = Field(default=1000000, gt=0)
    seed: int = 0
    max_steps: int = Field(default=100000, gt=0)


class EstimateResponse(BaseModel):
    status: str = "ok"
    mean: float
    stderr: float
    samples: int
    seed: int
    truncated: int


class BernoulliRequest(BaseModel):
    p: str  # rational, e.g. "3/4"
    k: int = Field(ge=1)
    l: int = Field(ge=1)
    m: int = Field(ge=1)


class BernoulliResponse(BaseModel):
    status: str = "ok"
    w: str
    e2: str
    e2_shifted: str
    e3: str


class QuadrantPairRequest(BaseModel):
    x1: float
    x2: float
    y1: float
    y2: float


class NonintersectionRequest(BaseModel):
    alpha: float
    quadrature: bool = False


class NonintersectionResponse(BaseModel):
    status: str = "ok"
    value: str
    quadrature: str | None = None


class KernelTpRequest(BaseModel):
    kernel: str  # "quadrant" | "strip"
    xs: list[float]
    ys: list[float]
    max_minor: int = Field(default=3, ge=1)


class KernelTpResponse(BaseModel):
    status: str = "ok"
    totally_positive: bool
    witness: WitnessModel | None = None


class DiscretizeRequest(BaseModel):
    h: str  # rational grid step
    radius: str  # rational clip radius, integer multiple of h


class GridRequest(BaseModel):
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    kind: str = "directed"  # "directed" | "conductivity"
    weight: str | None = None


class ErrorResponse(BaseModel):
    status: str = "error"
    error: str
    detail: str


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str
