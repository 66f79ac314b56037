"""Line-oriented instance files and DOT export.

Example::

    hypercolor-instance 1
    kind hypercube
    d 3
    t 3
    pc 000 0 1
    pc 010 2 1

The header line comes first.  ``kind`` is ``hypercube`` (followed by ``d``),
``knn_power`` (followed by ``n`` and ``d``) or ``bipartite`` (followed by one
``left`` and one ``right`` line of vertex names, then ``edge x y`` lines; edge
ids follow the order of the ``edge`` lines).  ``t`` is the color budget.

Precolored edges are ``pc BASE DIM COLOR`` for hypercubes, with BASE a d-digit
bit string (dimension d-1 leftmost), and ``pc ID COLOR`` otherwise.  Blank
lines and text after ``#`` are ignored.  Bipartite vertex names are read back
as strings.
"""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Tuple

from .coloring import BipartiteGraph, hypercube_graph
from .core import MAX_DIM, Edge, edge_from_index, edge_index, fmt_vertex
from .generators import knn_power_graph

HEADER = "hypercolor-instance"
VERSION = 1


class InstanceFormatError(ValueError):
    def __init__(self, line: Optional[int], message: str):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(line, f"{what} must be an integer, got {tok!r}") from None


def _name(v) -> str:
    s = str(v)
    if not s or any(ch.isspace() for ch in s) or "#" in s:
        raise ValueError(f"vertex name {s!r} cannot be written")
    return s


def dumps(inst) -> str:
    """Serialize an :class:`~hypercolor.solver.Instance`."""
    lines = [f"{HEADER} {VERSION}", f"kind {inst.family}"]
    if inst.family == "hypercube":
        d = inst.params[0]
        lines.append(f"d {d}")
        lines.append(f"t {inst.t}")
        for i, c in sorted(inst.precoloring.items()):
            e = edge_from_index(d, i)
            lines.append(f"pc {fmt_vertex(e.base, d)} {e.dim} {c}")
    else:
        if inst.family == "knn_power":
            n, d = inst.params
            lines += [f"n {n}", f"d {d}"]
        elif inst.family == "bipartite":
            g = inst.graph
            lines.append("left " + " ".join(_name(v) for v in g.left))
            lines.append("right " + " ".join(_name(v) for v in g.right))
            lines += [f"edge {_name(x)} {_name(y)}" for x, y in g.edges]
        else:
            raise ValueError(f"unknown family {inst.family!r}")
        lines.append(f"t {inst.t}")
        lines += [f"pc {i} {c}" for i, c in sorted(inst.precoloring.items())]
    return "\n".join(lines) + "\n"


def loads(text: str):
    """Parse an instance file; errors name the offending line."""
    from .solver import Instance

    records: List[Tuple[int, List[str]]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            records.append((no, toks))
    if not records:
        raise InstanceFormatError(None, "empty instance file")
    no, toks = records[0]
    if toks[0] != HEADER or len(toks) != 2:
        raise InstanceFormatError(no, f"expected header '{HEADER} {VERSION}'")
    if _int(toks[1], no, "format version") != VERSION:
        raise InstanceFormatError(no, f"unsupported format version {toks[1]}")

    fields: Dict[str, Tuple[int, List[str]]] = {}
    edge_lines: List[Tuple[int, List[str]]] = []
    pc_lines: List[Tuple[int, List[str]]] = []
    for no, toks in records[1:]:
        key, args = toks[0], toks[1:]
        if key == "pc":
            pc_lines.append((no, args))
        elif key == "edge":
            edge_lines.append((no, args))
        elif key in ("kind", "d", "n", "t", "left", "right"):
            if key in fields:
                raise InstanceFormatError(no, f"duplicate '{key}' record (first at line {fields[key][0]})")
            fields[key] = (no, args)
        else:
            raise InstanceFormatError(no, f"unknown record {key!r}")

    def scalar(key: str, lo: int = 1, hi: Optional[int] = None) -> int:
        if key not in fields:
            raise InstanceFormatError(None, f"missing '{key}' record")
        no, args = fields[key]
        if len(args) != 1:
            raise InstanceFormatError(no, f"'{key}' takes one value")
        val = _int(args[0], no, key)
        if val < lo or (hi is not None and val > hi):
            bound = f"{lo}..{hi}" if hi is not None else f">= {lo}"
            raise InstanceFormatError(no, f"'{key}' = {val} outside {bound}")
        return val

    if "kind" not in fields:
        raise InstanceFormatError(None, "missing 'kind' record")
    kno, kargs = fields["kind"]
    kind = kargs[0] if len(kargs) == 1 else None
    allowed = {"hypercube": {"kind", "d", "t"}, "knn_power": {"kind", "n", "d", "t"}, "bipartite": {"kind", "left", "right", "t"}}
    if kind not in allowed:
        raise InstanceFormatError(kno, f"unknown kind {' '.join(kargs)!r}")
    for key, (no, _) in fields.items():
        if key not in allowed[kind]:
            raise InstanceFormatError(no, f"'{key}' does not apply to kind {kind}")
    if edge_lines and kind != "bipartite":
        raise InstanceFormatError(edge_lines[0][0], f"'edge' does not apply to kind {kind}")
    t = scalar("t")

    if kind == "hypercube":
        d = scalar("d", 1, MAX_DIM)
        g = hypercube_graph(d)
        params: Tuple[int, ...] = (d,)
    elif kind == "knn_power":
        n, d = scalar("n"), scalar("d")
        try:
            g = knn_power_graph(n, d)
        except ValueError as exc:
            raise InstanceFormatError(fields["d"][0], str(exc)) from None
        params = (n, d)
    else:
        for key in ("left", "right"):
            if key not in fields:
                raise InstanceFormatError(None, f"missing '{key}' record")
        left, right = tuple(fields["left"][1]), tuple(fields["right"][1])
        side = {}
        for key, part in (("left", left), ("right", right)):
            for v in part:
                if v in side:
                    raise InstanceFormatError(fields[key][0], f"vertex {v!r} listed twice")
                side[v] = key
        pairs = []
        for no, args in edge_lines:
            if len(args) != 2:
                raise InstanceFormatError(no, "'edge' takes two vertex names")
            x, y = args
            if side.get(x) != "left" or side.get(y) != "right":
                raise InstanceFormatError(no, f"edge {x}-{y} must join a left vertex to a right vertex")
            pairs.append((x, y))
        g = BipartiteGraph(left, right, tuple(pairs))
        params = ()

    pc: Dict[int, int] = {}
    where: Dict[int, int] = {}
    seen: Dict[Tuple[object, int], int] = {}
    for no, args in pc_lines:
        if kind == "hypercube":
            if len(args) != 3:
                raise InstanceFormatError(no, "'pc' takes BASE DIM COLOR")
            bits, dim_tok, col_tok = args
            if len(bits) != d or set(bits) - {"0", "1"}:
                raise InstanceFormatError(no, f"base {bits!r} is not a {d}-digit bit string")
            base, dim = int(bits, 2), _int(dim_tok, no, "dimension")
            if not 0 <= dim < d:
                raise InstanceFormatError(no, f"dimension {dim} outside 0..{d - 1}")
            if (base >> dim) & 1:
                raise InstanceFormatError(no, f"edge ({bits}, {dim}) not canonical: base has bit {dim} set")
            eid = edge_index(d, Edge(base, dim))
            label = f"({bits}, {dim})"
        else:
            if len(args) != 2:
                raise InstanceFormatError(no, "'pc' takes ID COLOR")
            eid_tok, col_tok = args
            eid = _int(eid_tok, no, "edge id")
            if not 0 <= eid < len(g.edges):
                raise InstanceFormatError(no, f"edge id {eid} outside 0..{len(g.edges) - 1}")
            label = f"{eid}"
        c = _int(col_tok, no, "color")
        if not 1 <= c <= t:
            raise InstanceFormatError(no, f"color {c} of edge {label} outside 1..{t}")
        if eid in pc:
            raise InstanceFormatError(no, f"edge {label} precolored twice (first at line {where[eid]})")
        for v in g.edges[eid]:
            if (v, c) in seen:
                raise InstanceFormatError(no, f"edge {label} color {c} clashes with line {seen[v, c]} at vertex {v!r}")
        for v in g.edges[eid]:
            seen[v, c] = no
        pc[eid] = c
        where[eid] = no
    return Instance(g, pc, t, kind, params)


def read(path: str):
    with open(path) as fh:
        return loads(fh.read())


def write(inst, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(inst))


def to_dot(inst, coloring: Optional[Mapping[int, int]] = None) -> str:
    """Graphviz ``graph`` text; colored edges carry their color as label."""
    coloring = inst.precoloring if coloring is None else coloring
    g = inst.graph
    if inst.family == "hypercube":
        d = inst.params[0]
        name = lambda v: fmt_vertex(v, d)
    else:
        name = str
    out = ["graph G {"]
    for v in g.left:
        out.append(f'  "{name(v)}" [shape=circle];')
    for v in g.right:
        out.append(f'  "{name(v)}" [shape=box];')
    for i, (x, y) in enumerate(g.edges):
        attr = f' [label="{coloring[i]}", penwidth=2]' if i in coloring else ""
        out.append(f'  "{name(x)}" -- "{name(y)}"{attr};')
    out.append("}")
    return "\n".join(out) + "\n"
