"""JSON input documents for complexes and cells, with line-numbered validation errors.

A complex document looks like::

    {"n": 2,
     "vertices": [{"id": 0, "m0": 1}, {"id": 1}],
     "edges": [{"u": 0, "v": 1, "m1": 2.5}],
     "higher_weights": [{"simplex": [0, 1, 2], "m": 3}],
     "coloring": {"0": 1, "1": 2}}

Missing weights default to 1.  Errors raise :class:`InputError` carrying the
line of the offending item.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .coloring import Coloring
from .complex import WeightedGraph, build_complex

_WS = " \t\r\n"


class InputError(ValueError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = f"{source or '<input>'}" + (f":{line}" if line is not None else "")
        super().__init__(f"{where}: {message}")


def _skip(text, pos):
    while pos < len(text) and text[pos] in _WS:
        pos += 1
    return pos


def _line(text, pos) -> int:
    return text.count("\n", 0, pos) + 1


def item_lines(text: str) -> dict:
    """Line numbers of the items of each top-level array, keyed by member name."""
    dec = json.JSONDecoder()
    out = {}
    pos = _skip(text, 0)
    if pos >= len(text) or text[pos] != "{":
        return out
    pos = _skip(text, pos + 1)
    while pos < len(text) and text[pos] != "}":
        key, pos = dec.raw_decode(text, pos)
        pos = _skip(text, pos)
        pos = _skip(text, pos + 1)  # ':'
        if text[pos] == "[":
            lines = []
            pos = _skip(text, pos + 1)
            while text[pos] != "]":
                lines.append(_line(text, pos))
                _, pos = dec.raw_decode(text, pos)
                pos = _skip(text, pos)
                if text[pos] == ",":
                    pos = _skip(text, pos + 1)
            out[key] = lines
            pos += 1
        else:
            out[key] = [_line(text, pos)]
            _, pos = dec.raw_decode(text, pos)
        pos = _skip(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos = _skip(text, pos + 1)
    return out


def _positive(value, what, line, source):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{what} must be a number, got {value!r}", line, source)
    if value <= 0:
        raise InputError(f"{what} must be positive, got {value!r}", line, source)
    return value


@dataclass
class ComplexDocument:
    graph: WeightedGraph
    n: int
    higher_weights: dict = field(default_factory=dict)
    coloring: Coloring | None = None

    def build(self, n: int | None = None, rule: str = "file"):
        n = self.n if n is None else n
        if rule == "unit":
            graph = WeightedGraph(self.graph.vertices, {x: 1 for x in self.graph.vertices},
                                  {e: 1 for e in self.graph.edges})
            return build_complex(graph, n, 1)
        if rule != "file":
            raise ValueError(f"unknown weight rule {rule!r} (use 'file' or 'unit')")
        return build_complex(self.graph, n, self.higher_weights)


def parse_complex(text: str, source: str | None = None) -> ComplexDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}", exc.lineno, source) from None
    if not isinstance(doc, dict):
        raise InputError("top level must be an object", 1, source)
    lines = item_lines(text)

    def at(key, i):
        found = lines.get(key, [])
        return found[i] if i < len(found) else None

    verts, m0 = [], {}
    for i, item in enumerate(doc.get("vertices", [])):
        if not isinstance(item, dict) or "id" not in item:
            raise InputError("vertex entry needs an 'id'", at("vertices", i), source)
        vid = item["id"]
        if vid in m0:
            raise InputError(f"duplicate vertex id {vid!r}", at("vertices", i), source)
        verts.append(vid)
        m0[vid] = _positive(item.get("m0", 1), f"m0 of vertex {vid!r}", at("vertices", i), source)
    m1 = {}
    for i, item in enumerate(doc.get("edges", [])):
        line = at("edges", i)
        if not isinstance(item, dict) or "u" not in item or "v" not in item:
            raise InputError("edge entry needs 'u' and 'v'", line, source)
        u, v = item["u"], item["v"]
        for x in (u, v):
            if x not in m0:
                raise InputError(f"edge ({u!r}, {v!r}) references undeclared vertex {x!r}", line, source)
        if u == v:
            raise InputError(f"self-loop at vertex {u!r}", line, source)
        key = tuple(sorted((u, v)))
        if key in m1:
            raise InputError(f"duplicate edge ({u!r}, {v!r})", line, source)
        m1[key] = _positive(item.get("m1", 1), f"m1 of edge ({u!r}, {v!r})", line, source)
    higher = {}
    for i, item in enumerate(doc.get("higher_weights", [])):
        line = at("higher_weights", i)
        if not isinstance(item, dict) or "simplex" not in item or "m" not in item:
            raise InputError("higher weight entry needs 'simplex' and 'm'", line, source)
        s = tuple(sorted(item["simplex"]))
        if len(s) < 3:
            raise InputError("higher weights apply to simplices with at least 3 vertices", line, source)
        higher[s] = _positive(item["m"], f"weight of simplex {list(s)}", line, source)
    n = doc.get("n", doc.get("dimension", 1))
    if not isinstance(n, int) or n < 1:
        raise InputError(f"dimension n must be a positive integer, got {n!r}", at("n", 0), source)
    coloring = None
    if "coloring" in doc:
        coloring = parse_coloring(doc["coloring"], verts, source, at("coloring", 0))
    try:
        graph = WeightedGraph(tuple(verts), m0, m1)
    except ValueError as exc:
        raise InputError(str(exc), None, source) from None
    return ComplexDocument(graph, n, higher, coloring)


def parse_coloring(raw, vertices, source=None, line=None) -> Coloring:
    if not isinstance(raw, dict):
        raise InputError("coloring must map vertex ids to colours", line, source)
    by_name = {str(v): v for v in vertices}
    colors = {}
    for key, c in raw.items():
        if key not in by_name:
            raise InputError(f"coloring names unknown vertex {key!r}", line, source)
        if isinstance(c, bool) or not isinstance(c, int):
            raise InputError(f"colour of vertex {key!r} must be an integer", line, source)
        colors[by_name[key]] = c
    return Coloring(colors, max(colors.values(), default=1))


def load_complex(path) -> ComplexDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", None, str(path)) from None
    return parse_complex(text, str(path))


def load_json(path):
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", None, str(path)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}", exc.lineno, str(path)) from None


def dump_complex(graph: WeightedGraph, n: int, higher_weights: dict | None = None,
                 coloring: Coloring | None = None) -> str:
    """Serialize to the input format, one item per line."""
    parts = ['{', f'  "n": {n},', '  "vertices": [']
    vs = [f'    {{"id": {json.dumps(v)}, "m0": {float(graph.m0[v])!r}}}' for v in graph.vertices]
    parts.append(",\n".join(vs))
    parts.append("  ],")
    parts.append('  "edges": [')
    es = [f'    {{"u": {json.dumps(u)}, "v": {json.dumps(v)}, "m1": {float(graph.m1[(u, v)])!r}}}'
          for u, v in graph.edges]
    parts.append(",\n".join(es))
    tail = []
    if higher_weights:
        hw = [f'    {{"simplex": {json.dumps(list(s))}, "m": {float(m)!r}}}' for s, m in higher_weights.items()]
        tail.append('  "higher_weights": [\n' + ",\n".join(hw) + "\n  ]")
    if coloring is not None:
        tail.append('  "coloring": ' + json.dumps({str(k): v for k, v in coloring.colors.items()}))
    parts.append("  ]" + ("," if tail else ""))
    parts.append(",\n".join(tail))
    parts.append("}")
    return "\n".join(p for p in parts if p) + "\n"
