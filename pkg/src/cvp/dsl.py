"""Workflow definition formats: the ``.cvp`` text DSL and the JSON wire form.

Text grammar (line oriented; one statement per line)::

    file      := header? stmt*
    header    := "workflow" STRING
    stmt      := node_decl | edge_decl | blank | comment
    node_decl := "node" IDENT ("kind=" IDENT)? ("label=" STRING)?
    edge_decl := "edge" IDENT "->" IDENT
    comment   := "#" any-to-eol
    IDENT     := [A-Za-z_][A-Za-z0-9_]*
    STRING    := double-quoted; escapes \\" \\\\ \\n \\r \\t

Parsing is total: any byte sequence yields either a validated DAG or a list
of :class:`ParseError`, never an unhandled exception.  The parser recovers at
line granularity and reports every diagnosable error in one pass; cycle
errors are reported only once the parse is structurally clean.

``serialize_text``/``serialize_json`` emit a canonical form (header only when
the name is nonempty, nodes in insertion order, edges sorted by (from, to),
default kind and empty label omitted in the text form) so that serialization
is a fixed point and round-trips are lossless.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import CvpError
from .graph import CausalGraph, ModuleNode, NodeKind, is_identifier

__all__ = [
    "SourceSpan",
    "ParseError",
    "WorkflowParseError",
    "UnknownKindWarning",
    "parse_text",
    "serialize_text",
    "parse_json",
    "serialize_json",
    "graph_to_obj",
    "graph_from_obj",
    "read_graph_file",
]

# Inputs larger than this are rejected with a single error instead of parsed,
# which keeps worst-case work bounded under fuzzing.
MAX_SOURCE_BYTES = 16 * 1024 * 1024

_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}
_STRING_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


class UnknownKindWarning(UserWarning):
    """An unrecognized ``kind=`` value was mapped to ``generic``."""


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    code: str
    message: str

    def to_obj(self) -> dict:
        return {
            "line": self.span.line,
            "column": self.span.column,
            "length": self.span.length,
            "code": self.code,
            "message": self.message,
        }


class WorkflowParseError(CvpError):
    """Raised when parsing fails; carries the complete error list."""

    def __init__(self, errors: list[ParseError]):
        self.errors = sorted(errors, key=lambda e: (e.span.line, e.span.column, e.code))
        self.code = self.errors[0].code if self.errors else "UnexpectedToken"
        head = "; ".join(f"{e.span.line}:{e.span.column} {e.code}: {e.message}" for e in self.errors[:3])
        more = f" (+{len(self.errors) - 3} more)" if len(self.errors) > 3 else ""
        super().__init__(head + more)


def _decode(source: str | bytes) -> tuple[str | None, ParseError | None]:
    if isinstance(source, str):
        return source, None
    try:
        return source.decode("utf-8"), None
    except UnicodeDecodeError as exc:
        prefix = source[: exc.start]
        line = prefix.count(b"\n") + 1
        column = exc.start - (prefix.rfind(b"\n") + 1) + 1
        return None, ParseError(
            SourceSpan(line, column, 1), "UnexpectedToken", "input is not valid UTF-8"
        )


def _too_large(source: str | bytes) -> bool:
    return len(source) > MAX_SOURCE_BYTES


class _LineScanner:
    """Cursor over one statement line."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    @property
    def column(self) -> int:
        return self.pos + 1

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text) or self.text[self.pos] == "#"

    def startswith(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def take(self, token: str) -> bool:
        if self.startswith(token):
            self.pos += len(token)
            return True
        return False

    def read_word(self) -> tuple[str, int]:
        """Maximal run of identifier characters; empty when none at cursor."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start : self.pos], start + 1

    def rest_lexeme_length(self) -> int:
        """Length of the non-blank run at the cursor, for error spans."""
        end = self.pos
        while end < len(self.text) and self.text[end] not in " \t\r":
            end += 1
        return max(1, end - self.pos)

    def read_string(self) -> tuple[str | None, int, ParseError | None]:
        """Parse a double-quoted string at the cursor; cursor must be at a quote."""
        self.skip_ws()
        start_col = self.column
        if self.pos >= len(self.text) or self.text[self.pos] != '"':
            return None, start_col, ParseError(
                SourceSpan(self.lineno, start_col, self.rest_lexeme_length()),
                "UnexpectedToken",
                'expected a double-quoted string',
            )
        self.pos += 1
        out: list[str] = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                return "".join(out), start_col, None
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    break
                esc = self.text[self.pos + 1]
                if esc not in _STRING_ESCAPES:
                    return None, start_col, ParseError(
                        SourceSpan(self.lineno, self.column, 2),
                        "UnexpectedToken",
                        f"unsupported string escape '\\{esc}'",
                    )
                out.append(_STRING_ESCAPES[esc])
                self.pos += 2
                continue
            out.append(ch)
            self.pos += 1
        return None, start_col, ParseError(
            SourceSpan(self.lineno, start_col, max(1, len(self.text) - start_col + 1)),
            "UnterminatedString",
            "string is missing its closing quote",
        )


@dataclass
class _NodeDecl:
    node: ModuleNode
    span: SourceSpan


@dataclass
class _EdgeDecl:
    src: str
    dst: str
    span: SourceSpan


def parse_text(source: str | bytes) -> CausalGraph:
    """Parse ``.cvp`` text into a validated DAG.

    Raises
    ------
    WorkflowParseError
        carrying every diagnosable :class:`ParseError`.
    """
    if _too_large(source):
        raise WorkflowParseError(
            [ParseError(SourceSpan(1, 1, 1), "UnexpectedToken", "input exceeds the size cap")]
        )
    text, decode_err = _decode(source)
    if decode_err is not None:
        raise WorkflowParseError([decode_err])
    assert text is not None

    errors: list[ParseError] = []
    name: str | None = None
    nodes: list[_NodeDecl] = []
    edges: list[_EdgeDecl] = []

    def err(lineno: int, column: int, length: int, code: str, message: str) -> None:
        errors.append(ParseError(SourceSpan(lineno, column, max(1, length)), code, message))

    for lineno, raw in enumerate(text.split("\n"), start=1):
        sc = _LineScanner(raw, lineno)
        if sc.at_end():
            continue
        word, col = sc.read_word()
        if not word:
            err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                "expected a statement: workflow, node, or edge")
            continue

        if word == "workflow":
            value, _, serr = sc.read_string()
            if serr is not None:
                errors.append(serr)
                continue
            if name is not None or nodes or edges:
                err(lineno, col, len(word), "UnexpectedToken",
                    "workflow header must appear once, before any declaration")
                continue
            if not sc.at_end():
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "unexpected content after workflow header")
                continue
            name = value

        elif word == "node":
            ident, icol = sc.read_word()
            if not ident:
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "expected a module id after 'node'")
                continue
            if not is_identifier(ident):
                err(lineno, icol, len(ident), "BadIdentifier",
                    f"module id {ident!r} must match [A-Za-z_][A-Za-z0-9_]*")
                continue
            kind = NodeKind.GENERIC
            label = ""
            bad = False
            if sc.take("kind="):
                kcol = sc.column
                kword, _ = sc.read_word()
                if not kword:
                    err(lineno, kcol, 1, "UnexpectedToken", "expected an identifier after 'kind='")
                    continue
                try:
                    kind = NodeKind(kword)
                except ValueError:
                    warnings.warn(
                        f"line {lineno}: unknown kind {kword!r} mapped to generic",
                        UnknownKindWarning,
                        stacklevel=2,
                    )
                    kind = NodeKind.GENERIC
            if sc.startswith("label="):
                sc.take("label=")
                value, _, serr = sc.read_string()
                if serr is not None:
                    errors.append(serr)
                    continue
                label = value if value is not None else ""
            if not sc.at_end():
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "expected kind=, label=, or end of line")
                bad = True
            if not bad:
                nodes.append(_NodeDecl(ModuleNode(ident, kind, label), SourceSpan(lineno, icol, len(ident))))

        elif word == "edge":
            src, scol = sc.read_word()
            if not src:
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "expected a module id after 'edge'")
                continue
            if not is_identifier(src):
                err(lineno, scol, len(src), "BadIdentifier",
                    f"module id {src!r} must match [A-Za-z_][A-Za-z0-9_]*")
                continue
            if not sc.take("->"):
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "expected '->' between edge endpoints")
                continue
            dst, dcol = sc.read_word()
            if not dst:
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "expected a module id after '->'")
                continue
            if not is_identifier(dst):
                err(lineno, dcol, len(dst), "BadIdentifier",
                    f"module id {dst!r} must match [A-Za-z_][A-Za-z0-9_]*")
                continue
            if not sc.at_end():
                err(lineno, sc.column, sc.rest_lexeme_length(), "UnexpectedToken",
                    "unexpected content after edge declaration")
                continue
            edges.append(_EdgeDecl(src, dst, SourceSpan(lineno, scol, len(src))))

        else:
            err(lineno, col, len(word), "UnexpectedToken",
                f"unknown statement {word!r}; expected workflow, node, or edge")

    _check_structure(nodes, edges, errors)
    if errors:
        raise WorkflowParseError(errors)
    return CausalGraph(name or "", [d.node for d in nodes], [(e.src, e.dst) for e in edges])


def _check_structure(nodes: list[_NodeDecl], edges: list[_EdgeDecl], errors: list[ParseError]) -> None:
    """Duplicate/reference/self-loop checks, then a cycle scan if clean."""
    ids: set[str] = set()
    for decl in nodes:
        if decl.node.id in ids:
            errors.append(ParseError(decl.span, "DuplicateNode", f"duplicate module id {decl.node.id!r}"))
        ids.add(decl.node.id)

    seen_edges: set[tuple[str, str]] = set()
    for decl in edges:
        for endpoint in (decl.src, decl.dst):
            if endpoint not in ids:
                errors.append(ParseError(decl.span, "UnknownNodeRef",
                                         f"edge references undeclared module {endpoint!r}"))
        if decl.src == decl.dst:
            errors.append(ParseError(decl.span, "SelfLoop", f"self loop {decl.src}->{decl.dst}"))
        if (decl.src, decl.dst) in seen_edges:
            errors.append(ParseError(decl.span, "DuplicateEdge", f"duplicate edge {decl.src}->{decl.dst}"))
        seen_edges.add((decl.src, decl.dst))

    if errors:
        return
    raw = CausalGraph("", [d.node for d in nodes], [(e.src, e.dst) for e in edges])
    for diag in raw.validate().diagnostics:
        if diag.code != "CycleDetected":
            continue
        cycle = list(diag.involved)
        span = SourceSpan(1, 1, 1)
        pairs = {(cycle[i], cycle[i + 1]) for i in range(len(cycle) - 1)}
        for decl in edges:
            if (decl.src, decl.dst) in pairs:
                span = decl.span
                break
        errors.append(ParseError(span, "CycleDetected", diag.message))


def _quote(s: str) -> str:
    return '"' + "".join(_STRING_UNESCAPES.get(ch, ch) for ch in s) + '"'


def serialize_text(graph: CausalGraph) -> str:
    """Canonical ``.cvp`` form; ``parse_text(serialize_text(g))`` equals ``g``."""
    lines: list[str] = []
    if graph.name:
        lines.append(f"workflow {_quote(graph.name)}")
    for node in graph.nodes:
        parts = ["node", node.id]
        if node.kind is not NodeKind.GENERIC:
            parts.append(f"kind={node.kind.value}")
        if node.label:
            parts.append(f"label={_quote(node.label)}")
        lines.append(" ".join(parts))
    for edge in graph.edges:
        lines.append(f"edge {edge.src} -> {edge.dst}")
    return "".join(line + "\n" for line in lines)


# --- JSON wire format ------------------------------------------------------

_TOP_KEYS = ("name", "nodes", "edges")
_NODE_KEYS = {"id", "kind", "label"}
_EDGE_KEYS = {"from", "to"}
_SPAN0 = SourceSpan(1, 1, 1)


def graph_from_obj(obj: object) -> tuple[CausalGraph | None, list[ParseError]]:
    """Strict-schema construction from an already-decoded JSON value.

    Unknown keys are rejected by name; all structural errors are collected
    (spans degenerate to 1:1, JSON positions are not tracked post-decode).
    """
    errors: list[ParseError] = []

    def err(code: str, message: str) -> None:
        errors.append(ParseError(_SPAN0, code, message))

    if not isinstance(obj, dict):
        err("UnexpectedToken", "top-level value must be an object")
        return None, errors
    for key in obj:
        if key not in _TOP_KEYS:
            err("UnexpectedToken", f"unknown key {key!r}")
    for key in _TOP_KEYS:
        if key not in obj:
            err("UnexpectedToken", f"missing key {key!r}")
    if errors:
        return None, errors

    name = obj["name"]
    if not isinstance(name, str):
        err("UnexpectedToken", "'name' must be a string")
    if not isinstance(obj["nodes"], list):
        err("UnexpectedToken", "'nodes' must be an array")
    if not isinstance(obj["edges"], list):
        err("UnexpectedToken", "'edges' must be an array")
    if errors:
        return None, errors

    nodes: list[ModuleNode] = []
    for i, item in enumerate(obj["nodes"]):
        if not isinstance(item, dict):
            err("UnexpectedToken", f"nodes[{i}] must be an object")
            continue
        unknown = [k for k in item if k not in _NODE_KEYS]
        for k in unknown:
            err("UnexpectedToken", f"unknown key {k!r} in nodes[{i}]")
        if unknown:
            continue
        node_id = item.get("id")
        if not isinstance(node_id, str):
            err("UnexpectedToken", f"nodes[{i}] is missing a string 'id'")
            continue
        if not is_identifier(node_id):
            err("BadIdentifier", f"module id {node_id!r} must match [A-Za-z_][A-Za-z0-9_]*")
            continue
        kind_raw = item.get("kind", "generic")
        label = item.get("label", "")
        if not isinstance(kind_raw, str) or not isinstance(label, str):
            err("UnexpectedToken", f"nodes[{i}] 'kind' and 'label' must be strings")
            continue
        try:
            kind = NodeKind(kind_raw)
        except ValueError:
            err("UnexpectedToken", f"unknown kind {kind_raw!r} in nodes[{i}]")
            continue
        nodes.append(ModuleNode(node_id, kind, label))

    ids = {n.id for n in nodes}
    seen_ids: set[str] = set()
    for n in nodes:
        if n.id in seen_ids:
            err("DuplicateNode", f"duplicate module id {n.id!r}")
        seen_ids.add(n.id)

    edges: list[tuple[str, str]] = []
    seen_edges: set[tuple[str, str]] = set()
    for i, item in enumerate(obj["edges"]):
        if not isinstance(item, dict):
            err("UnexpectedToken", f"edges[{i}] must be an object")
            continue
        unknown = [k for k in item if k not in _EDGE_KEYS]
        for k in unknown:
            err("UnexpectedToken", f"unknown key {k!r} in edges[{i}]")
        if unknown:
            continue
        src, dst = item.get("from"), item.get("to")
        if not isinstance(src, str) or not isinstance(dst, str):
            err("UnexpectedToken", f"edges[{i}] must have string 'from' and 'to'")
            continue
        for endpoint in (src, dst):
            if endpoint not in ids:
                err("UnknownNodeRef", f"edge references unknown module {endpoint!r}")
        if src == dst:
            err("SelfLoop", f"self loop {src}->{dst}")
        if (src, dst) in seen_edges:
            err("DuplicateEdge", f"duplicate edge {src}->{dst}")
        seen_edges.add((src, dst))
        edges.append((src, dst))

    if errors:
        return None, errors
    raw = CausalGraph(name, nodes, edges)
    for diag in raw.validate().diagnostics:
        if diag.code == "CycleDetected":
            err("CycleDetected", diag.message)
    if errors:
        return None, errors
    return raw, []


def parse_json(document: str | bytes) -> CausalGraph:
    """Parse the JSON wire form into a validated DAG.

    Raises
    ------
    WorkflowParseError
        for malformed documents (UnexpectedToken) and for structural errors,
        with the same codes parse_text uses.
    """
    if _too_large(document):
        raise WorkflowParseError(
            [ParseError(_SPAN0, "UnexpectedToken", "input exceeds the size cap")]
        )
    text, decode_err = _decode(document)
    if decode_err is not None:
        raise WorkflowParseError([decode_err])
    assert text is not None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkflowParseError(
            [ParseError(SourceSpan(exc.lineno, exc.colno, 1), "UnexpectedToken",
                        f"malformed JSON: {exc.msg}")]
        ) from None
    except RecursionError:
        raise WorkflowParseError(
            [ParseError(_SPAN0, "UnexpectedToken", "JSON nesting exceeds the depth cap")]
        ) from None
    graph, errors = graph_from_obj(obj)
    if errors:
        raise WorkflowParseError(errors)
    assert graph is not None
    return graph


def graph_to_obj(graph: CausalGraph) -> dict:
    return {
        "name": graph.name,
        "nodes": [{"id": n.id, "kind": n.kind.value, "label": n.label} for n in graph.nodes],
        "edges": [{"from": e.src, "to": e.dst} for e in graph.edges],
    }


def serialize_json(graph: CausalGraph) -> str:
    """Canonical JSON: fixed key order, insertion-order nodes, sorted edges."""
    return json.dumps(graph_to_obj(graph), ensure_ascii=False, separators=(",", ":"))


def read_graph_file(path: str | Path) -> CausalGraph:
    """Load a graph from disk, picking the format by file extension."""
    p = Path(path)
    data = p.read_bytes()
    if p.suffix.lower() == ".json":
        return parse_json(data)
    return parse_text(data)
