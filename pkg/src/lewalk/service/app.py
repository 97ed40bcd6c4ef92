"""FastAPI application wrapping the library.

Every handler is a plain function taking its request model and returning its
response model, so the CLI can call them in-process; the HTTP layer adds
JSON transport and error mapping on top (ParseError -> 400, SelfCheckError
-> 500, other domain errors -> 422).
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, errors
from ..continuum import (
    kernel_tp_check,
    quadrant_conditional_nonintersection,
    quadrant_det2,
    quadrant_discretization,
    quadrant_nonintersection,
    quadrant_nonintersection_quadrature,
)
from ..document import (
    NetworkDocument,
    document_from_conductivity,
    document_from_directed,
    emit_document,
    parse_document,
    parse_rational,
)
from ..matrix import ScalarMatrix, det, is_totally_nonnegative, submatrix
from ..network import Walk, loop_erase, walk_vertices
from ..resistor import (
    associated_markov_chain,
    grid_conductivity_network,
    hitting_from_response,
    ingerman_minor,
    response_matrix,
)
from ..series import TruncatedSeries
from ..stochastic import (
    ChainSampler,
    bernoulli_closed_forms,
    estimate_hitting_minor,
    estimate_hitting_minor_sets,
)
from ..walkmat import (
    grid_network,
    hitting_matrix,
    le_constrained_sum,
    walk_matrix,
)
from . import models as m

app = FastAPI(title="lewalk", version=__version__)


def scalar_text(value) -> str:
    if isinstance(value, TruncatedSeries):
        return ",".join(str(c) for c in value.coeffs)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(Fraction(value))


def _parse(doc_text: str) -> NetworkDocument:
    return parse_document(doc_text)

def _ids(doc: NetworkDocument, names: list[str]) -> list[int]:
    table = doc.name_to_id
    out = []
    for n in names:
        if n not in table:
            raise errors.ParseError(f"unknown vertex name {n!r}")
        out.append(table[n])
    return out


def _matrix_response(
    mat: ScalarMatrix, row_names, col_names
) -> m.MatrixResponse:
    return m.MatrixResponse(
        kind=mat.kind,
        rows=list(row_names),
        cols=list(col_names),
        entries=[[scalar_text(x) for x in row] for row in mat.data],
        order=mat.order,
    )


def _name_sorted(doc: NetworkDocument, ids) -> list[int]:
    return sorted(ids, key=lambda i: doc.names[i])


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


@app.get("/health", response_model=m.HealthResponse)
def health() -> m.HealthResponse:
    return m.HealthResponse(version=__version__)


@app.post("/walk-matrix", response_model=m.MatrixResponse)
def walk_matrix_handler(req: m.MatrixModeRequest) -> m.MatrixResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    w = walk_matrix(net, req.mode, req.order)
    order = _name_sorted(doc, range(net.vertex_count))
    names = [doc.names[i] for i in order]
    return _matrix_response(submatrix(w, order, order), names, names)


@app.post("/hitting-matrix", response_model=m.MatrixResponse)
def hitting_matrix_handler(req: m.MatrixModeRequest) -> m.MatrixResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    x = hitting_matrix(net, req.mode, req.order)
    bd = sorted(net.boundary)
    col_of = {b: i for i, b in enumerate(bd)}
    row_order = _name_sorted(doc, range(net.vertex_count))
    col_order = _name_sorted(doc, bd)
    return _matrix_response(
        submatrix(x, row_order, [col_of[b] for b in col_order]),
        [doc.names[i] for i in row_order],
        [doc.names[b] for b in col_order],
    )


@app.post("/minor", response_model=m.ValueResponse)
def minor_handler(req: m.MinorRequest) -> m.ValueResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    rows = _ids(doc, req.rows)
    cols = _ids(doc, req.cols)
    if len(rows) != len(cols):
        raise errors.SizeMismatch(f"|A|={len(rows)} but |B|={len(cols)}")
    if req.hitting:
        bd = sorted(net.boundary)
        col_of = {b: i for i, b in enumerate(bd)}
        for c in cols:
            if c not in col_of:
                raise errors.ParseError(
                    f"column {doc.names[c]!r} is not a boundary vertex"
                )
        x = hitting_matrix(net, req.mode, req.order)
        value = det(submatrix(x, rows, [col_of[c] for c in cols]))
    else:
        w = walk_matrix(net, req.mode, req.order)
        value = det(submatrix(w, rows, cols))
    return m.ValueResponse(value=scalar_text(value))


@app.post("/le", response_model=m.LoopEraseResponse)
def loop_erase_handler(req: m.LoopEraseRequest) -> m.LoopEraseResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    if req.walk:
        eid = req.walk[0]
        if not 0 <= eid < len(net.edges):
            raise errors.InvalidWalk(f"unknown edge id {eid}")
        start = net.edges[eid].tail
    elif req.start is not None:
        start = _ids(doc, [req.start])[0]
    else:
        raise errors.ParseError("empty walk needs --start")
    walk = Walk(start, tuple(req.walk))
    erased = loop_erase(net, walk)
    return m.LoopEraseResponse(
        start=doc.names[start],
        edges=list(erased.edge_ids),
        vertices=[doc.names[v] for v in walk_vertices(net, erased)],
    )


@app.post("/oracle-check", response_model=m.OracleCheckResponse)
def oracle_check_handler(req: m.OracleCheckRequest) -> m.OracleCheckResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    rows = _ids(doc, req.rows)
    cols = _ids(doc, req.cols)
    mode = "planar" if req.planar else "signed"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", errors.TruncationTooSmall)
        oracle = le_constrained_sum(
            net, rows, cols, req.order, mode=mode, hitting=req.hitting
        )
    if req.hitting:
        x = hitting_matrix(net, "series", req.order)
        bd = sorted(net.boundary)
        col_of = {b: i for i, b in enumerate(bd)}
        mat = submatrix(x, rows, [col_of[c] for c in cols])
    else:
        w = walk_matrix(net, "series", req.order)
        mat = submatrix(w, rows, cols)
    reference = det(mat)
    coefficients = [
        m.CoefficientRow(
            power=i, oracle=str(a), determinant=str(b)
        )
        for i, (a, b) in enumerate(zip(oracle.coeffs, reference.coeffs))
    ]
    status = "match" if oracle == reference else "mismatch"
    return m.OracleCheckResponse(status=status, coefficients=coefficients)


@app.post("/tnn-check", response_model=m.TnnCheckResponse)
def tnn_check_handler(req: m.TnnCheckRequest) -> m.TnnCheckResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    if req.hitting:
        x = hitting_matrix(net, "numeric", req.order)
        bd = sorted(net.boundary)
        col_of = {b: i for i, b in enumerate(bd)}
        row_ids = (
            _ids(doc, req.rows)
            if req.rows
            else _name_sorted(doc, range(net.vertex_count))
        )
        col_ids = _ids(doc, req.cols) if req.cols else _name_sorted(doc, bd)
        for c in col_ids:
            if c not in col_of:
                raise errors.ParseError(
                    f"column {doc.names[c]!r} is not a boundary vertex"
                )
        mat = submatrix(x, row_ids, [col_of[c] for c in col_ids])
    else:
        w = walk_matrix(net, "numeric", req.order)
        row_ids = (
            _ids(doc, req.rows)
            if req.rows
            else _name_sorted(doc, range(net.vertex_count))
        )
        col_ids = (
            _ids(doc, req.cols)
            if req.cols
            else _name_sorted(doc, range(net.vertex_count))
        )
        mat = submatrix(w, row_ids, col_ids)
    result = is_totally_nonnegative(mat, req.max_minor)
    witness = None
    if result.witness is not None:
        witness = m.WitnessModel(
            rows=[doc.names[row_ids[i]] for i in result.witness.rows],
            cols=[doc.names[col_ids[j]] for j in result.witness.cols],
            value=scalar_text(result.witness.value),
        )
    return m.TnnCheckResponse(
        totally_nonnegative=result.ok, witness=witness
    )


@app.post("/resistor/response", response_model=m.MatrixResponse)
def resistor_response_handler(req: m.DocumentRequest) -> m.MatrixResponse:
    doc = _parse(req.document)
    net = doc.to_conductivity()
    lam = response_matrix(net)
    bd = sorted(net.boundary)
    pos = {b: i for i, b in enumerate(bd)}
    order = _name_sorted(doc, bd)
    names = [doc.names[b] for b in order]
    sel = [pos[b] for b in order]
    return _matrix_response(submatrix(lam, sel, sel), names, names)


@app.post("/resistor/hitting", response_model=m.MatrixResponse)
def resistor_hitting_handler(req: m.DocumentRequest) -> m.MatrixResponse:
    doc = _parse(req.document)
    net = doc.to_conductivity()
    x = hitting_from_response(net)
    bd = sorted(net.boundary)
    pos = {b: i for i, b in enumerate(bd)}
    order = _name_sorted(doc, bd)
    names = [doc.names[b] for b in order]
    sel = [pos[b] for b in order]
    return _matrix_response(submatrix(x, sel, sel), names, names)


@app.post("/resistor/markov", response_model=m.DocumentResponse)
def resistor_markov_handler(req: m.DocumentRequest) -> m.DocumentResponse:
    doc = _parse(req.document)
    net = doc.to_conductivity()
    chain = associated_markov_chain(net)
    out = document_from_directed(chain, doc.names)
    return m.DocumentResponse(document=emit_document(out))


@app.post("/resistor/ingerman", response_model=m.IngermanResponse)
def resistor_ingerman_handler(req: m.IngermanRequest) -> m.IngermanResponse:
    doc = _parse(req.document)
    net = doc.to_conductivity()
    result = ingerman_minor(net, _ids(doc, req.rows), _ids(doc, req.cols))
    families = [
        m.FamilyModel(
            paths=[list(p) for p in fam.paths],
            assignment=list(fam.assignment),
            weight=str(fam.weight),
            kirchhoff_minor=str(fam.kirchhoff_minor),
            contribution=str(fam.contribution),
        )
        for fam in result.families
    ]
    return m.IngermanResponse(
        response_minor=str(result.response_minor),
        hitting_minor=str(result.hitting_minor),
        families=families,
    )


@app.post("/mc/hitting-minor", response_model=m.EstimateResponse)
def mc_hitting_minor_handler(req: m.McRequest) -> m.EstimateResponse:
    doc = _parse(req.document)
    net = doc.to_directed()
    sampler = ChainSampler(net, req.seed)
    sources = _ids(doc, req.rows)
    if (req.cols is None) == (req.col_sets is None):
        raise errors.ParseError("give exactly one of cols or col_sets")
    if req.cols is not None:
        est = estimate_hitting_minor(
            sampler, sources, _ids(doc, req.cols), req.samples, req.max_steps
        )
    else:
        sets = [_ids(doc, names) for names in req.col_sets]
        est = estimate_hitting_minor_sets(
            sampler, sources, sets, req.samples, req.max_steps
        )
    return m.EstimateResponse(
        mean=est.mean,
        stderr=est.stderr,
        samples=est.samples,
        seed=est.seed,
        truncated=est.truncated,
    )


@app.post("/bernoulli", response_model=m.BernoulliResponse)
def bernoulli_handler(req: m.BernoulliRequest) -> m.BernoulliResponse:
    forms = bernoulli_closed_forms(
        parse_rational(req.p), req.k, req.l, req.m
    )
    return m.BernoulliResponse(
        w=str(forms.w),
        e2=str(forms.e2),
        e2_shifted=str(forms.e2_shifted),
        e3=str(forms.e3),
    )


@app.post("/brownian/quadrant-det2", response_model=m.ValueResponse)
def quadrant_det2_handler(req: m.QuadrantPairRequest) -> m.ValueResponse:
    return m.ValueResponse(
        value=format(quadrant_det2(req.x1, req.x2, req.y1, req.y2), ".17g")
    )


@app.post("/brownian/cond", response_model=m.ValueResponse)
def quadrant_cond_handler(req: m.QuadrantPairRequest) -> m.ValueResponse:
    value = quadrant_conditional_nonintersection(
        req.x1, req.x2, req.y1, req.y2
    )
    return m.ValueResponse(value=format(value, ".17g"))


@app.post("/brownian/nonint", response_model=m.NonintersectionResponse)
def nonintersection_handler(
    req: m.NonintersectionRequest,
) -> m.NonintersectionResponse:
    value = quadrant_nonintersection(req.alpha)
    quad = None
    if req.quadrature:
        quad = format(
            quadrant_nonintersection_quadrature(req.alpha), ".17g"
        )
    return m.NonintersectionResponse(
        value=format(value, ".17g"), quadrature=quad
    )


@app.post("/brownian/tp-check", response_model=m.KernelTpResponse)
def kernel_tp_handler(req: m.KernelTpRequest) -> m.KernelTpResponse:
    result = kernel_tp_check(req.kernel, req.xs, req.ys, req.max_minor)
    witness = None
    if result.witness is not None:
        witness = m.WitnessModel(
            rows=[str(i) for i in result.witness.rows],
            cols=[str(j) for j in result.witness.cols],
            value=scalar_text(result.witness.value),
        )
    return m.KernelTpResponse(totally_positive=result.ok, witness=witness)


@app.post("/brownian/discretize", response_model=m.DocumentResponse)
def discretize_handler(req: m.DiscretizeRequest) -> m.DocumentResponse:
    h = parse_rational(req.h)
    radius = parse_rational(req.radius)
    try:
        net, index = quadrant_discretization(h, radius)
    except ValueError as exc:
        raise errors.DomainError(str(exc)) from exc
    width = int(radius / h) + 1
    digits = len(str(width - 1))
    names = [""] * net.vertex_count
    for (i, j), v in index.items():
        names[v] = f"x{i:0{digits}d}y{j:0{digits}d}"
    out = document_from_directed(net, names)
    return m.DocumentResponse(document=emit_document(out))


@app.post("/grid", response_model=m.DocumentResponse)
def grid_handler(req: m.GridRequest) -> m.DocumentResponse:
    digits_r = len(str(req.rows - 1)) if req.rows > 1 else 1
    digits_c = len(str(req.cols - 1)) if req.cols > 1 else 1
    names = [
        f"r{r:0{digits_r}d}c{c:0{digits_c}d}"
        for r in range(req.rows)
        for c in range(req.cols)
    ]
    if req.kind == "directed":
        weight = parse_rational(req.weight) if req.weight else Fraction(1, 4)
        try:
            net = grid_network(req.rows, req.cols, weight)
        except ValueError as exc:
            raise errors.DomainError(str(exc)) from exc
        out = document_from_directed(net, names)
    elif req.kind == "conductivity":
        weight = parse_rational(req.weight) if req.weight else Fraction(1)
        try:
            net = grid_conductivity_network(req.rows, req.cols, weight)
        except ValueError as exc:
            raise errors.DomainError(str(exc)) from exc
        out = document_from_conductivity(net, names)
    else:
        raise errors.ParseError(f"unknown grid kind {req.kind!r}")
    return m.DocumentResponse(document=emit_document(out))


# ---------------------------------------------------------------------------
# error mapping
# ---------------------------------------------------------------------------


def _error_payload(exc: errors.Error) -> dict:
    return m.ErrorResponse(
        error=type(exc).__name__, detail=str(exc)
    ).model_dump()


@app.exception_handler(errors.ParseError)
async def _parse_error(request: Request, exc: errors.ParseError):
    return JSONResponse(status_code=400, content=_error_payload(exc))


@app.exception_handler(errors.SelfCheckError)
async def _selfcheck_error(request: Request, exc: errors.SelfCheckError):
    return JSONResponse(status_code=500, content=_error_payload(exc))


@app.exception_handler(errors.Error)
async def _domain_error(request: Request, exc: errors.Error):
    return JSONResponse(status_code=422, content=_error_payload(exc))


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    # constructor-level validation (substochasticity, grid shapes, ...)
    return JSONResponse(
        status_code=422,
        content=m.ErrorResponse(
            error="ValueError", detail=str(exc)
        ).model_dump(),
    )
