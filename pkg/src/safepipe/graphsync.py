"""Lossless two-way transformation between pipeline ASTs and dataflow
graph documents, plus canonical JSON (de)serialization.

A node is one call statement; edges are variable def/use pairs; literal
and lambda arguments ride on the node so the graph stays uncluttered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import GRAPH_FORMAT_VERSION
from .diagnostics import Diagnostic, SourceSpan, error
from .semantics.checker import PipelineAnalysis
from .syntax.formatter import format_expression
from .syntax.nodes import (
    Argument, Assignment, BoolLit, Call, ExpressionStatement, FloatLit,
    IntLit, Lambda, ListLit, MemberAccess, Negation, PipelineDecl, Reference,
    StringLit,
)
from .syntax.parser import parse_pipeline

RECEIVER_PORT = "self"  # dedicated parameter port for method receivers


@dataclass
class GraphNode:
    id: str
    process_name: str
    kind: str  # function | method
    index: int  # original statement order
    receiver_var: str = None  # methods: receiver when it is a plain variable
    literals: dict = field(default_factory=dict)  # paramName -> constant
    lambda_sources: dict = field(default_factory=dict)  # paramName -> source


@dataclass
class GraphEdge:
    from_node: str
    from_port: str
    to_node: str
    to_port: str
    var_name: str


@dataclass
class DanglingOutput:
    from_node: str
    from_port: str
    var_name: str


@dataclass
class GraphDoc:
    pipeline_name: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    version: int = GRAPH_FORMAT_VERSION


_NO_SPAN = SourceSpan("<graph>", 1, 1, 1, 1)


# --- AST -> graph -----------------------------------------------------------


def to_graph(pipeline: PipelineDecl, analysis: PipelineAnalysis):
    """Build a GraphDoc from a resolved pipeline; returns (doc|None, diags)."""
    doc = GraphDoc(pipeline.name)
    diags: list[Diagnostic] = []
    producer: dict = {}  # var name -> (node id, result port)
    consumed: set = set()

    for index, stmt in enumerate(pipeline.body):
        expr = stmt.rhs if isinstance(stmt, Assignment) else stmt.expr
        info = analysis.calls.get(id(expr))
        if (not isinstance(expr, Call) or info is None
                or info.kind not in ("function", "method", "constructor")):
            diags.append(error(
                "E070",
                "only direct process-call statements have a graph form",
                stmt.span or _NO_SPAN))
            continue
        node_id = f"n{index}"
        decl = info.decl
        node = GraphNode(node_id, decl.name,
                         "method" if info.kind == "method" else "function",
                         index)
        if info.kind == "method":
            receiver = expr.callee.receiver
            if not isinstance(receiver, Reference):
                diags.append(error(
                    "E070", "method receiver must be a variable",
                    stmt.span or _NO_SPAN))
                continue
            node.receiver_var = receiver.name
            if receiver.name in producer:
                src, port = producer[receiver.name]
                doc.edges.append(GraphEdge(src, port, node_id, RECEIVER_PORT,
                                           receiver.name))
                consumed.add(receiver.name)
        for param, arg_expr in info.arg_bindings:
            if isinstance(arg_expr, Reference):
                if arg_expr.name in producer:
                    src, port = producer[arg_expr.name]
                    doc.edges.append(GraphEdge(src, port, node_id, param.name,
                                               arg_expr.name))
                    consumed.add(arg_expr.name)
                    continue
                diags.append(error(
                    "E070",
                    f"argument variable '{arg_expr.name}' is not produced by "
                    "a graph node", stmt.span or _NO_SPAN))
                continue
            if isinstance(arg_expr, Lambda):
                node.lambda_sources[param.name] = format_expression(arg_expr)
                continue
            value = _constant_json(arg_expr)
            if value is _NOT_REPRESENTABLE:
                diags.append(error(
                    "E070",
                    f"argument for '{param.name}' has no graph form",
                    stmt.span or _NO_SPAN))
                continue
            node.literals[param.name] = value
        doc.nodes.append(node)
        if isinstance(stmt, Assignment):
            result_ports = (["result"] if info.kind == "constructor"
                            else [r.name for r in decl.results])
            for assignee, port in zip(stmt.assignees, result_ports):
                if assignee == "_":
                    continue  # discarded results are omitted entirely
                producer[assignee] = (node_id, port)

    for var, (node_id, port) in producer.items():
        if var not in consumed:
            doc.outputs.append(DanglingOutput(node_id, port, var))
    if diags:
        return None, diags
    return doc, []


class _NotRepresentable:
    pass


_NOT_REPRESENTABLE = _NotRepresentable()


def _constant_json(expr):
    if isinstance(expr, (IntLit, FloatLit, StringLit, BoolLit)):
        return expr.value
    if isinstance(expr, Negation):
        inner = _constant_json(expr.operand)
        if isinstance(inner, (int, float)) and not isinstance(inner, bool):
            return -inner
        return _NOT_REPRESENTABLE
    if isinstance(expr, ListLit):
        elements = [_constant_json(e) for e in expr.elements]
        if any(e is _NOT_REPRESENTABLE for e in elements):
            return _NOT_REPRESENTABLE
        return elements
    return _NOT_REPRESENTABLE


def _literal_expr(value):
    if isinstance(value, bool):
        return BoolLit(value)
    if isinstance(value, int):
        return IntLit(value)
    if isinstance(value, float):
        return FloatLit(value)
    if isinstance(value, str):
        return StringLit(value)
    if isinstance(value, list):
        return ListLit([_literal_expr(v) for v in value])
    raise ValueError(f"unrepresentable literal {value!r}")


# --- graph -> AST -----------------------------------------------------------


def from_graph(doc: GraphDoc, symbols):
    """Reconstruct a PipelineDecl; returns (pipeline|None, diags)."""
    diags: list[Diagnostic] = []
    nodes = {n.id: n for n in doc.nodes}

    order, cycle = _topo_order(doc)
    if cycle:
        return None, [error("E071", "graph document contains a cycle", _NO_SPAN)]

    inbound: dict = {}  # node id -> {port: var name}
    outbound: dict = {}  # node id -> {port: var name}
    for e in doc.edges:
        inbound.setdefault(e.to_node, {})[e.to_port] = e.var_name
        outbound.setdefault(e.from_node, {})[e.from_port] = e.var_name
    for o in doc.outputs:
        outbound.setdefault(o.from_node, {})[o.from_port] = o.var_name

    statements = []
    for node in order:
        decl = None
        if node.kind == "function":
            decl = symbols.functions.get(node.process_name)
        else:
            for cls in symbols.classes.values():
                for m in cls.methods:
                    if m.name == node.process_name:
                        decl = m
                        break
                if decl:
                    break
        if decl is None and node.kind == "function":
            cls = symbols.classes.get(node.process_name)
            if cls is not None:
                statements.append(_build_statement(
                    node, [], [], inbound.get(node.id, {}),
                    outbound.get(node.id, {}), diags, constructor=True))
                continue
        if decl is None:
            diags.append(error(
                "E073", f"unknown process name '{node.process_name}'", _NO_SPAN))
            continue
        statements.append(_build_statement(
            node, decl.params, decl.results, inbound.get(node.id, {}),
            outbound.get(node.id, {}), diags))
    statements = [s for s in statements if s is not None]
    if diags:
        return None, diags
    pipeline = PipelineDecl(doc.pipeline_name, statements)
    return pipeline, []


def _build_statement(node, params, results, in_ports, out_ports, diags,
                     constructor=False):
    args = []
    for p in params:
        if p.name in in_ports:
            args.append(Argument(None, Reference(in_ports[p.name])))
        elif p.name in node.lambda_sources:
            lam = _parse_lambda(node.lambda_sources[p.name], diags)
            if lam is None:
                return None
            args.append(Argument(None, lam))
        elif p.name in node.literals:
            args.append(Argument(None, _literal_expr(node.literals[p.name])))
        elif p.default is not None:
            continue  # defaulted parameter left unbound
        else:
            diags.append(error(
                "E074",
                f"node '{node.id}' binds nothing to parameter '{p.name}'",
                _NO_SPAN))
            return None
    if node.kind == "method":
        receiver_name = in_ports.get(RECEIVER_PORT, node.receiver_var)
        if receiver_name is None:
            diags.append(error(
                "E074", f"method node '{node.id}' has no receiver", _NO_SPAN))
            return None
        callee = MemberAccess(Reference(receiver_name), node.process_name)
    else:
        callee = Reference(node.process_name)
    call = Call(callee, args)
    if not results and not constructor:
        return ExpressionStatement(call)
    assignees = []
    fresh = 1
    if constructor:
        port_names = ["result"]
    else:
        port_names = [r.name for r in results]
    for port in port_names:
        if port in out_ports:
            assignees.append(out_ports[port])
        else:
            assignees.append(f"unused{fresh}")
            fresh += 1
    return Assignment(assignees, call)


def _parse_lambda(source, diags):
    wrapper = f"pipeline _wrap {{ _ = identity({source}) }}"
    ast, parse_diags = parse_pipeline(wrapper, "<lambda>")
    errors = [d for d in parse_diags if d.is_error]
    if errors or not ast.pipelines or not ast.pipelines[0].body:
        diags.append(error("E074", "embedded lambda source does not parse",
                           _NO_SPAN))
        return None
    return ast.pipelines[0].body[0].rhs.args[0].value


def _topo_order(doc: GraphDoc):
    """Kahn's algorithm, ties broken by (index, id); detects cycles."""
    nodes = {n.id: n for n in doc.nodes}
    indegree = {n.id: 0 for n in doc.nodes}
    successors: dict = {n.id: [] for n in doc.nodes}
    for e in doc.edges:
        if e.from_node in nodes and e.to_node in nodes:
            indegree[e.to_node] += 1
            successors[e.from_node].append(e.to_node)
    ready = sorted((n for n in doc.nodes if indegree[n.id] == 0),
                   key=lambda n: (n.index, n.id))
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for succ in successors[node.id]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                ready.append(nodes[succ])
        ready.sort(key=lambda n: (n.index, n.id))
    if len(order) != len(doc.nodes):
        return [], True
    return order, False


# --- JSON serialization -----------------------------------------------------


def graph_to_jsonable(doc: GraphDoc) -> dict:
    return {
        "version": doc.version,
        "pipelineName": doc.pipeline_name,
        "nodes": [
            {
                "id": n.id,
                "processName": n.process_name,
                "kind": n.kind,
                "index": n.index,
                **({"receiverVar": n.receiver_var} if n.receiver_var else {}),
                "literals": n.literals,
                "lambdaSources": n.lambda_sources,
            }
            for n in doc.nodes
        ],
        "edges": [
            {
                "from": {"node": e.from_node, "port": e.from_port},
                "to": {"node": e.to_node, "port": e.to_port},
                "varName": e.var_name,
            }
            for e in doc.edges
        ],
        "outputs": [
            {
                "from": {"node": o.from_node, "port": o.from_port},
                "varName": o.var_name,
            }
            for o in doc.outputs
        ],
    }


def graph_json_encode(doc: GraphDoc) -> str:
    """Canonical JSON: sorted keys, stable separators."""
    return json.dumps(graph_to_jsonable(doc), sort_keys=True, indent=2) + "\n"


def graph_json_decode(text_or_obj):
    """Parse and validate; returns (GraphDoc|None, diags)."""
    if isinstance(text_or_obj, str):
        try:
            raw = json.loads(text_or_obj)
        except json.JSONDecodeError as exc:
            return None, [error("E074", f"invalid JSON: {exc}", _NO_SPAN)]
    else:
        raw = text_or_obj
    if not isinstance(raw, dict):
        return None, [error("E074", "graph document must be a JSON object",
                            _NO_SPAN)]
    if raw.get("version") != GRAPH_FORMAT_VERSION:
        return None, [error(
            "E074",
            f"missing or unsupported version (expected {GRAPH_FORMAT_VERSION})",
            _NO_SPAN)]
    diags: list[Diagnostic] = []

    def fail(msg):
        diags.append(error("E074", msg, _NO_SPAN))

    name = raw.get("pipelineName")
    if not isinstance(name, str) or not name:
        fail("missing pipelineName")
        return None, diags
    doc = GraphDoc(name)
    seen_ids = set()
    for n in raw.get("nodes", []):
        try:
            node = GraphNode(n["id"], n["processName"], n["kind"], n["index"],
                             n.get("receiverVar"),
                             dict(n.get("literals", {})),
                             dict(n.get("lambdaSources", {})))
        except (KeyError, TypeError):
            fail("malformed node entry")
            return None, diags
        if node.id in seen_ids:
            fail(f"duplicate node id '{node.id}'")
            return None, diags
        if node.kind not in ("function", "method"):
            fail(f"bad node kind '{node.kind}'")
            return None, diags
        seen_ids.add(node.id)
        doc.nodes.append(node)
    indices = sorted(n.index for n in doc.nodes)
    if indices != list(range(len(doc.nodes))):
        fail("node indices must be a permutation of 0..n-1")
        return None, diags
    seen_inbound = set()
    for e in raw.get("edges", []):
        try:
            edge = GraphEdge(e["from"]["node"], e["from"]["port"],
                             e["to"]["node"], e["to"]["port"], e["varName"])
        except (KeyError, TypeError):
            fail("malformed edge entry")
            return None, diags
        if edge.from_node not in seen_ids or edge.to_node not in seen_ids:
            fail("edge endpoint names an unknown node")
            return None, diags
        if (edge.to_node, edge.to_port) in seen_inbound:
            fail(f"port '{edge.to_port}' of node '{edge.to_node}' has "
                 "multiple inbound edges")
            return None, diags
        seen_inbound.add((edge.to_node, edge.to_port))
        doc.edges.append(edge)
    for o in raw.get("outputs", []):
        try:
            out = DanglingOutput(o["from"]["node"], o["from"]["port"],
                                 o["varName"])
        except (KeyError, TypeError):
            fail("malformed output entry")
            return None, diags
        if out.from_node not in seen_ids:
            fail("output names an unknown node")
            return None, diags
        doc.outputs.append(out)
    _, cyclic = _topo_order(doc)
    if cyclic:
        return None, [error("E071", "graph document contains a cycle",
                            _NO_SPAN)]
    return doc, []
