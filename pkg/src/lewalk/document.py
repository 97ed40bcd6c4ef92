"""Line-oriented network document format, version 1.

    format: 1
    kind: directed | conductivity
    vertex: <name> [boundary]
    edge: <tail> <head> <weight>

Names are arbitrary non-whitespace tokens and must be unique; weights are
exact rationals written as "num/den" or plain integers. Vertex ids are
assigned in document order and emission preserves id order, so
parse(emit(parse(doc))) == parse(doc). Rationals stay strings end to end;
floats never touch the format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .network import DirectedNetwork
from .resistor import ConductivityNetwork

FORMAT_VERSION = 1


@dataclass(frozen=True)
class NetworkDocument:
    kind: str  # "directed" | "conductivity"
    names: tuple[str, ...]
    boundary_flags: tuple[bool, ...]
    edges: tuple[tuple[int, int, Fraction], ...]

    @property
    def name_to_id(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def to_directed(self) -> DirectedNetwork:
        if self.kind != "directed":
            raise ParseError(f"expected a directed document, got {self.kind}")
        boundary = {i for i, f in enumerate(self.boundary_flags) if f}
        return DirectedNetwork.build(len(self.names), self.edges, boundary)

    def to_conductivity(self) -> ConductivityNetwork:
        if self.kind != "conductivity":
            raise ParseError(
                f"expected a conductivity document, got {self.kind}"
            )
        boundary = {i for i, f in enumerate(self.boundary_flags) if f}
        try:
            return ConductivityNetwork(len(self.names), self.edges, boundary)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_document(text: str) -> NetworkDocument:
    names: list[str] = []
    flags: list[bool] = []
    edges: list[tuple[int, int, Fraction]] = []
    kind = None
    saw_format = False
    ids: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if not _:
            raise ParseError(f"line {lineno}: expected 'key: value'")
        if key == "status":
            continue  # tolerated so CLI outputs pipe straight back in
        if key == "format":
            if rest != str(FORMAT_VERSION):
                raise ParseError(f"line {lineno}: unsupported format {rest!r}")
            saw_format = True
        elif key == "kind":
            if rest not in ("directed", "conductivity"):
                raise ParseError(f"line {lineno}: unknown kind {rest!r}")
            kind = rest
        elif key == "vertex":
            parts = rest.split()
            if not parts or len(parts) > 2:
                raise ParseError(f"line {lineno}: vertex needs a name")
            name = parts[0]
            if name in ids:
                raise ParseError(f"line {lineno}: duplicate vertex {name!r}")
            flag = False
            if len(parts) == 2:
                if parts[1] != "boundary":
                    raise ParseError(
                        f"line {lineno}: unknown vertex flag {parts[1]!r}"
                    )
                flag = True
            ids[name] = len(names)
            names.append(name)
            flags.append(flag)
        elif key == "edge":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError(
                    f"line {lineno}: edge needs 'tail head weight'"
                )
            tail, head, wtext = parts
            if tail not in ids:
                raise ParseError(f"line {lineno}: unknown vertex {tail!r}")
            if head not in ids:
                raise ParseError(f"line {lineno}: unknown vertex {head!r}")
            edges.append((ids[tail], ids[head], parse_rational(wtext)))
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if not saw_format:
        raise ParseError("missing 'format: 1' header")
    if kind is None:
        raise ParseError("missing 'kind:' line")
    if kind == "conductivity":
        for t, h, w in edges:
            if w <= 0:
                raise ParseError(
                    f"conductivity between {names[t]} and {names[h]} must be positive"
                )
    return NetworkDocument(kind, tuple(names), tuple(flags), tuple(edges))


def emit_document(doc: NetworkDocument) -> str:
    lines = [f"format: {FORMAT_VERSION}", f"kind: {doc.kind}"]
    for name, flag in zip(doc.names, doc.boundary_flags):
        lines.append(f"vertex: {name} boundary" if flag else f"vertex: {name}")
    for tail, head, w in doc.edges:
        lines.append(
            f"edge: {doc.names[tail]} {doc.names[head]} {format_rational(w)}"
        )
    return "\n".join(lines) + "\n"


def document_from_directed(
    net: DirectedNetwork, names=None
) -> NetworkDocument:
    names = tuple(names) if names else tuple(
        f"v{i}" for i in range(net.vertex_count)
    )
    flags = tuple(i in net.boundary for i in range(net.vertex_count))
    edges = tuple((e.tail, e.head, e.weight) for e in net.edges)
    return NetworkDocument("directed", names, flags, edges)


def document_from_conductivity(
    net: ConductivityNetwork, names=None
) -> NetworkDocument:
    names = tuple(names) if names else tuple(
        f"v{i}" for i in range(net.vertex_count)
    )
    flags = tuple(i in net.boundary for i in range(net.vertex_count))
    edges = tuple((e.a, e.b, e.conductivity) for e in net.edges)
    return NetworkDocument("conductivity", names, flags, edges)
