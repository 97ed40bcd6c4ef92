"""Command-line client for the service handlers.

By default every subcommand calls the service layer in-process, so no server
is needed; with --url the same request is POSTed to a running server. Exit
codes: 0 success, 1 parse/usage error, 2 domain error (Divergent, Singular,
AbsorbingInterior, DomainError, ...), 3 internal invariant violation
(including an oracle-check mismatch, which would mean a theorem failed).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import pydantic

from . import __version__, errors
from .service import app as service
from .service import models as m

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_INTERNAL = 3


def _read_net(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise errors.ParseError(f"cannot read {path}: {exc}") from exc


def _names(text: str) -> list[str]:
    return [t for t in text.split(",") if t]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise errors.ParseError(f"bad integer list {text!r}") from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise errors.ParseError(f"bad float list {text!r}") from exc


# ---------------------------------------------------------------------------
# transport: in-process by default, HTTP with --url
# ---------------------------------------------------------------------------

_HTTP_EXIT = {400: EXIT_PARSE, 422: EXIT_DOMAIN, 500: EXIT_INTERNAL}


class RemoteError(Exception):
    """Server-side failure relayed by the remote transport."""

    def __init__(self, detail: str, code: int):
        super().__init__(detail)
        self.code = code


def _call(url: str | None, path: str, handler, request, response_model):
    if url is None:
        return handler(request)
    import httpx

    reply = httpx.post(
        url.rstrip("/") + path, json=request.model_dump(), timeout=None
    )
    if reply.status_code != 200:
        try:
            payload = reply.json()
            detail = f"{payload.get('error')}: {payload.get('detail')}"
        except ValueError:
            detail = reply.text
        raise RemoteError(detail, _HTTP_EXIT.get(reply.status_code, EXIT_DOMAIN))
    return response_model.model_validate(reply.json())


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _emit(lines) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _matrix_lines(resp: m.MatrixResponse) -> list[str]:
    lines = [f"status: {resp.status}", f"kind: {resp.kind}"]
    if resp.order is not None:
        lines.append(f"order: {resp.order}")
    lines.append("rows: " + " ".join(resp.rows))
    lines.append("cols: " + " ".join(resp.cols))
    for row in resp.entries:
        lines.append("matrix: " + " ".join(row))
    return lines


def _witness_lines(witness) -> list[str]:
    if witness is None:
        return []
    return [
        "witness-rows: " + " ".join(witness.rows),
        "witness-cols: " + " ".join(witness.cols),
        f"witness-value: {witness.value}",
    ]


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_walk_matrix(args) -> int:
    req = m.MatrixModeRequest(
        document=_read_net(args.net), mode=args.mode, order=args.order
    )
    resp = _call(args.url, "/walk-matrix", service.walk_matrix_handler, req,
                 m.MatrixResponse)
    _emit(_matrix_lines(resp))
    return EXIT_OK


def _cmd_hitting_matrix(args) -> int:
    req = m.MatrixModeRequest(
        document=_read_net(args.net), mode=args.mode, order=args.order
    )
    resp = _call(args.url, "/hitting-matrix", service.hitting_matrix_handler,
                 req, m.MatrixResponse)
    _emit(_matrix_lines(resp))
    return EXIT_OK


def _cmd_minor(args) -> int:
    req = m.MinorRequest(
        document=_read_net(args.net),
        rows=_names(args.rows),
        cols=_names(args.cols),
        hitting=args.hitting,
        mode=args.mode,
        order=args.order,
    )
    resp = _call(args.url, "/minor", service.minor_handler, req,
                 m.ValueResponse)
    _emit([f"status: {resp.status}", f"value: {resp.value}"])
    return EXIT_OK


def _cmd_le(args) -> int:
    req = m.LoopEraseRequest(
        document=_read_net(args.net),
        walk=_int_list(args.walk) if args.walk else [],
        start=args.start,
    )
    resp = _call(args.url, "/le", service.loop_erase_handler, req,
                 m.LoopEraseResponse)
    _emit(
        [
            f"status: {resp.status}",
            f"start: {resp.start}",
            "edges: " + ",".join(str(e) for e in resp.edges),
            "vertices: " + " ".join(resp.vertices),
        ]
    )
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    req = m.OracleCheckRequest(
        document=_read_net(args.net),
        rows=_names(args.rows),
        cols=_names(args.cols),
        order=args.order,
        planar=args.planar,
        hitting=args.hitting,
    )
    resp = _call(args.url, "/oracle-check", service.oracle_check_handler,
                 req, m.OracleCheckResponse)
    lines = [f"status: {resp.status}"]
    for row in resp.coefficients:
        lines.append(f"coeff: {row.power} {row.oracle} {row.determinant}")
    _emit(lines)
    return EXIT_OK if resp.status == "match" else EXIT_INTERNAL


def _cmd_tnn_check(args) -> int:
    req = m.TnnCheckRequest(
        document=_read_net(args.net),
        rows=_names(args.rows) if args.rows else None,
        cols=_names(args.cols) if args.cols else None,
        hitting=args.hitting,
        max_minor=args.max_minor,
    )
    resp = _call(args.url, "/tnn-check", service.tnn_check_handler, req,
                 m.TnnCheckResponse)
    lines = [
        f"status: {resp.status}",
        f"totally-nonnegative: {'true' if resp.totally_nonnegative else 'false'}",
    ]
    lines += _witness_lines(resp.witness)
    _emit(lines)
    return EXIT_OK


def _cmd_resistor(args) -> int:
    doc = _read_net(args.net)
    if args.resistor_command == "response":
        resp = _call(args.url, "/resistor/response",
                     service.resistor_response_handler,
                     m.DocumentRequest(document=doc), m.MatrixResponse)
        _emit(_matrix_lines(resp))
    elif args.resistor_command == "hitting":
        resp = _call(args.url, "/resistor/hitting",
                     service.resistor_hitting_handler,
                     m.DocumentRequest(document=doc), m.MatrixResponse)
        _emit(_matrix_lines(resp))
    elif args.resistor_command == "markov":
        resp = _call(args.url, "/resistor/markov",
                     service.resistor_markov_handler,
                     m.DocumentRequest(document=doc), m.DocumentResponse)
        _emit([f"status: {resp.status}", resp.document.rstrip("\n")])
    else:  # ingerman
        req = m.IngermanRequest(
            document=doc, rows=_names(args.rows), cols=_names(args.cols)
        )
        resp = _call(args.url, "/resistor/ingerman",
                     service.resistor_ingerman_handler, req,
                     m.IngermanResponse)
        lines = [
            f"status: {resp.status}",
            f"response-minor: {resp.response_minor}",
            f"hitting-minor: {resp.hitting_minor}",
        ]
        for fam in resp.families:
            paths = "|".join(
                "-".join(str(e) for e in p) for p in fam.paths
            )
            sigma = ",".join(str(s) for s in fam.assignment)
            lines.append(
                f"family: sigma={sigma} paths={paths} weight={fam.weight} "
                f"kirchhoff-minor={fam.kirchhoff_minor} "
                f"contribution={fam.contribution}"
            )
        _emit(lines)
    return EXIT_OK


def _cmd_mc(args) -> int:
    req = m.McRequest(
        document=_read_net(args.net),
        rows=_names(args.rows),
        cols=_names(args.cols) if args.cols else None,
        col_sets=(
            [_names(part) for part in args.col_sets.split(";")]
            if args.col_sets
            else None
        ),
        samples=args.samples,
        seed=args.seed,
        max_steps=args.max_steps,
    )
    resp = _call(args.url, "/mc/hitting-minor",
                 service.mc_hitting_minor_handler, req, m.EstimateResponse)
    _emit(
        [
            f"status: {resp.status}",
            f"mean: {format(resp.mean, '.17g')}",
            f"stderr: {format(resp.stderr, '.17g')}",
            f"samples: {resp.samples}",
            f"seed: {resp.seed}",
            f"truncated: {resp.truncated}",
        ]
    )
    return EXIT_OK


def _cmd_bernoulli(args) -> int:
    req = m.BernoulliRequest(p=args.p, k=args.k, l=args.l, m=args.m)
    resp = _call(args.url, "/bernoulli", service.bernoulli_handler, req,
                 m.BernoulliResponse)
    _emit(
        [
            f"status: {resp.status}",
            f"w: {resp.w}",
            f"e2: {resp.e2}",
            f"e2-shifted: {resp.e2_shifted}",
            f"e3: {resp.e3}",
        ]
    )
    return EXIT_OK


def _cmd_brownian(args) -> int:
    cmd = args.brownian_command
    if cmd in ("quadrant-det2", "cond"):
        req = m.QuadrantPairRequest(
            x1=args.x1, x2=args.x2, y1=args.y1, y2=args.y2
        )
        path = "/brownian/quadrant-det2" if cmd == "quadrant-det2" else "/brownian/cond"
        handler = (
            service.quadrant_det2_handler
            if cmd == "quadrant-det2"
            else service.quadrant_cond_handler
        )
        resp = _call(args.url, path, handler, req, m.ValueResponse)
        _emit([f"status: {resp.status}", f"value: {resp.value}"])
    elif cmd == "nonint":
        req = m.NonintersectionRequest(
            alpha=args.alpha, quadrature=args.quadrature
        )
        resp = _call(args.url, "/brownian/nonint",
                     service.nonintersection_handler, req,
                     m.NonintersectionResponse)
        lines = [f"status: {resp.status}", f"value: {resp.value}"]
        if resp.quadrature is not None:
            lines.append(f"quadrature: {resp.quadrature}")
        _emit(lines)
    elif cmd == "tp-check":
        req = m.KernelTpRequest(
            kernel=args.kernel,
            xs=_floats(args.xs),
            ys=_floats(args.ys),
            max_minor=args.max_minor,
        )
        resp = _call(args.url, "/brownian/tp-check",
                     service.kernel_tp_handler, req, m.KernelTpResponse)
        lines = [
            f"status: {resp.status}",
            f"totally-positive: {'true' if resp.totally_positive else 'false'}",
        ]
        lines += _witness_lines(resp.witness)
        _emit(lines)
    else:  # discretize
        req = m.DiscretizeRequest(h=args.step, radius=args.radius)
        resp = _call(args.url, "/brownian/discretize",
                     service.discretize_handler, req, m.DocumentResponse)
        _emit([f"status: {resp.status}", resp.document.rstrip("\n")])
    return EXIT_OK


def _cmd_grid(args) -> int:
    req = m.GridRequest(
        rows=args.rows, cols=args.cols, kind=args.kind, weight=args.weight
    )
    resp = _call(args.url, "/grid", service.grid_handler, req,
                 m.DocumentResponse)
    _emit([f"status: {resp.status}", resp.document.rstrip("\n")])
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lewalk",
        description="Walk, hitting, and resistor-network response matrices "
        "with loop-erased-walk determinant oracles.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--url", default=None,
        help="base URL of a running server (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_net(p):
        p.add_argument("--net", required=True, help="network document ('-' for stdin)")

    p = sub.add_parser("walk-matrix", help="walk matrix W = (I-Q)^-1")
    add_net(p)
    p.add_argument("--mode", choices=("numeric", "series"), default="numeric")
    p.add_argument("--order", type=int, default=16)
    p.set_defaults(func=_cmd_walk_matrix)

    p = sub.add_parser("hitting-matrix", help="hitting matrix X over V x boundary")
    add_net(p)
    p.add_argument("--mode", choices=("numeric", "series"), default="numeric")
    p.add_argument("--order", type=int, default=16)
    p.set_defaults(func=_cmd_hitting_matrix)

    p = sub.add_parser("minor", help="det of a walk/hitting submatrix")
    add_net(p)
    p.add_argument("--rows", required=True, help="comma-separated row vertex names")
    p.add_argument("--cols", required=True, help="comma-separated column vertex names")
    p.add_argument("--hitting", action="store_true")
    p.add_argument("--mode", choices=("numeric", "series"), default="numeric")
    p.add_argument("--order", type=int, default=16)
    p.set_defaults(func=_cmd_minor)

    p = sub.add_parser("le", help="loop-erase a walk given by edge ids")
    add_net(p)
    p.add_argument("--walk", default="", help="comma-separated edge ids")
    p.add_argument("--start", default=None, help="start vertex (empty walk only)")
    p.set_defaults(func=_cmd_le)

    p = sub.add_parser("oracle-check",
                       help="loop-erased family sum vs series determinant")
    add_net(p)
    p.add_argument("--rows", required=True)
    p.add_argument("--cols", required=True)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--planar", action="store_true")
    p.add_argument("--hitting", action="store_true")
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("tnn-check", help="total nonnegativity of W or X")
    add_net(p)
    p.add_argument("--rows", default=None)
    p.add_argument("--cols", default=None)
    p.add_argument("--hitting", action="store_true")
    p.add_argument("--max-minor", type=int, default=4)
    p.set_defaults(func=_cmd_tnn_check)

    p = sub.add_parser("resistor", help="resistor-network computations")
    rsub = p.add_subparsers(dest="resistor_command", required=True)
    for name in ("response", "hitting", "markov"):
        rp = rsub.add_parser(name)
        add_net(rp)
        rp.set_defaults(func=_cmd_resistor)
    rp = rsub.add_parser("ingerman")
    add_net(rp)
    rp.add_argument("--rows", required=True)
    rp.add_argument("--cols", required=True)
    rp.set_defaults(func=_cmd_resistor)

    p = sub.add_parser("mc", help="Monte Carlo estimators")
    msub = p.add_subparsers(dest="mc_command", required=True)
    mp = msub.add_parser("hitting-minor")
    add_net(mp)
    mp.add_argument("--rows", required=True)
    mp.add_argument("--cols", default=None)
    mp.add_argument("--col-sets", default=None,
                    help="semicolon-separated comma lists, e.g. 'b1,b2;b3'")
    mp.add_argument("--samples", type=int, default=1000000)
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--max-steps", type=int, default=100000)
    mp.set_defaults(func=_cmd_mc)

    p = sub.add_parser("bernoulli", help="drifted walk closed forms")
    p.add_argument("--p", required=True, help="rational, e.g. 3/4")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=_cmd_bernoulli)

    p = sub.add_parser("brownian", help="Brownian kernel closed forms")
    bsub = p.add_subparsers(dest="brownian_command", required=True)
    for name in ("quadrant-det2", "cond"):
        bp = bsub.add_parser(name)
        for arg in ("--x1", "--x2", "--y1", "--y2"):
            bp.add_argument(arg, type=float, required=True)
        bp.set_defaults(func=_cmd_brownian)
    bp = bsub.add_parser("nonint")
    bp.add_argument("--alpha", type=float, required=True)
    bp.add_argument("--quadrature", action="store_true",
                    help="also evaluate the double integral")
    bp.set_defaults(func=_cmd_brownian)
    bp = bsub.add_parser("tp-check")
    bp.add_argument("--kernel", choices=("quadrant", "strip"), required=True)
    bp.add_argument("--xs", required=True, help="comma-separated grid")
    bp.add_argument("--ys", required=True, help="comma-separated grid")
    bp.add_argument("--max-minor", type=int, default=3)
    bp.set_defaults(func=_cmd_brownian)
    bp = bsub.add_parser("discretize")
    bp.add_argument("--step", required=True, help="grid step h (rational)")
    bp.add_argument("--radius", required=True, help="clip radius (rational)")
    bp.set_defaults(func=_cmd_brownian)

    p = sub.add_parser("grid", help="grid network document generator")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--kind", choices=("directed", "conductivity"),
                   default="directed")
    p.add_argument("--weight", default=None, help="uniform edge weight")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("serve", help="run the HTTP server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; the documented contract
        # reserves 2 for domain errors, so usage problems map to 1.
        return EXIT_OK if exc.code in (0, None) else EXIT_PARSE
    try:
        return args.func(args)
    except RemoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except errors.ParseError as exc:
        print(f"error: ParseError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except errors.SelfCheckError as exc:
        print(f"error: SelfCheckError: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except errors.Error as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except pydantic.ValidationError as exc:
        print(f"error: ValidationError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        # constructor-level validation (substochasticity, grid shapes, ...)
        print(f"error: ValueError: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
