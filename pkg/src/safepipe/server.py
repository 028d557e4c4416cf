"""HTTP API backing the graphical editor.

Each request is handled against an immutable snapshot of the loaded
stubs; the snapshot is rebuilt only on POST /reload.  Every response
carries the graph format version.
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from . import GRAPH_FORMAT_VERSION, graphsync, protocol, schema
from .diagnostics import SourceSpan, error, sort_key
from .project import Manifest, _expand
from .semantics.checker import check_pipeline
from .semantics.symbols import SymbolTable
from .syntax import parse_pipeline
from .syntax.formatter import (
    format_pipeline, format_protocol, format_require, format_schema_expr,
    format_type,
)
from .syntax.nodes import RefinedTypeRef
from .syntax.parser import parse_stubs


@dataclass
class Snapshot:
    symbols: SymbolTable
    automata: dict
    datasets: dict
    csv_cache: schema.CsvSchemaCache
    stub_diagnostics: list

    @classmethod
    def load(cls, manifest: Manifest) -> "Snapshot":
        diags = []
        stub_asts = []
        for f in _expand(manifest.stub_paths, ".sdsstub"):
            stub, d = parse_stubs(f.read_text(), str(f))
            stub_asts.append(stub)
            diags.extend(d)
        symbols, d = SymbolTable.from_stub_files(stub_asts)
        diags.extend(d)  # includes stub-validity checks
        return cls(
            symbols=symbols,
            automata=protocol.build_automata(symbols),
            datasets={k: str(v) for k, v in manifest.datasets.items()},
            csv_cache=schema.CsvSchemaCache(),
            stub_diagnostics=diags,
        )


def _diag_payload(diags):
    return [d.to_json() for d in sorted(diags, key=sort_key)]


def _bad_request(diags):
    return JSONResponse(status_code=400, content={
        "version": GRAPH_FORMAT_VERSION,
        "diagnostics": _diag_payload(diags),
    })


_NO_SPAN = SourceSpan("<request>", 1, 1, 1, 1)


def check_source(source: str, snap: Snapshot):
    """Stage-gated checking of one pipeline source against the snapshot.

    Returns (diagnostics, analyzed) where analyzed is a list of
    (PipelineDecl, PipelineAnalysis) for clean inputs.
    """
    program, diags = parse_pipeline(source, "<input>")
    if any(d.is_error for d in diags):
        return diags, []
    analyzed = []
    for decl in program.pipelines:
        analysis = check_pipeline(decl, snap.symbols)
        diags = diags + analysis.diagnostics
        analyzed.append((decl, analysis))
    if any(d.is_error for d in diags):
        return diags, analyzed
    for decl, analysis in analyzed:
        _, d = schema.propagate(
            decl, analysis, snap.symbols, snap.datasets, snap.csv_cache)
        diags = diags + d
        words, d = protocol.extract_call_words(decl, analysis, snap.symbols)
        diags = diags + d
        diags = diags + protocol.check_order(words, snap.automata)
    return diags, analyzed


def _param_entry(p):
    return {
        "name": p.name,
        "type": format_type(p.type_ref) if p.type_ref is not None else "Any",
        "refined": isinstance(p.type_ref, RefinedTypeRef),
    }


def _fun_entry(decl, kind, name=None):
    return {
        "name": name or decl.name,
        "kind": kind,
        "params": [_param_entry(p) for p in decl.params],
        "results": [
            {"name": r.name,
             "type": format_type(r.type_ref) if r.type_ref is not None
             else "Any"}
            for r in decl.results
        ],
        "schemaEffects": [format_schema_expr(s) for s in decl.schema_clauses]
        + [format_require(r) for r in decl.require_clauses],
        "protocol": None,
    }


def _palette(symbols: SymbolTable):
    entries = []
    for fun in symbols.functions.values():
        entries.append(_fun_entry(fun, "function"))
    for cls in symbols.classes.values():
        entries.append({
            "name": cls.name,
            "kind": "class",
            "params": [],
            "results": [{"name": "result", "type": cls.name}],
            "schemaEffects": [],
            "protocol": (format_protocol(cls.protocol)
                         if cls.protocol is not None else None),
        })
        for method in cls.methods:
            entries.append(
                _fun_entry(method, "method", f"{cls.name}.{method.name}"))
    return sorted(entries, key=lambda e: e["name"])


def create_app(manifest: Manifest) -> FastAPI:
    app = FastAPI(title="safepipe", version="0.1.0")
    state = {"snapshot": Snapshot.load(manifest)}

    def snap() -> Snapshot:
        return state["snapshot"]

    @app.exception_handler(Exception)
    async def internal_error(request, exc):
        return _bad_request([error("E060", f"internal error: {exc}", _NO_SPAN)])

    @app.post("/check")
    async def check_endpoint(body: dict):
        source = body.get("source")
        if not isinstance(source, str):
            return _bad_request([error(
                "E003", "request body must contain a 'source' string",
                _NO_SPAN)])
        diags, _ = check_source(source, snap())
        return {"version": GRAPH_FORMAT_VERSION,
                "diagnostics": _diag_payload(diags)}

    @app.post("/graph/from-text")
    async def from_text(body: dict):
        source = body.get("source")
        if not isinstance(source, str):
            return _bad_request([error(
                "E003", "request body must contain a 'source' string",
                _NO_SPAN)])
        diags, analyzed = check_source(source, snap())
        if any(d.is_error for d in diags) or not analyzed:
            if not analyzed and not diags:
                diags = [error("E003", "no pipeline in source", _NO_SPAN)]
            return _bad_request(diags)
        decl, analysis = analyzed[0]
        doc, gdiags = graphsync.to_graph(decl, analysis)
        if doc is None:
            return _bad_request(gdiags)
        return {"version": GRAPH_FORMAT_VERSION,
                "graph": graphsync.graph_to_jsonable(doc),
                "diagnostics": _diag_payload(diags)}

    @app.post("/graph/to-text")
    async def to_text(body: dict):
        graph = body.get("graph")
        if not isinstance(graph, dict):
            return _bad_request([error(
                "E074", "request body must contain a 'graph' object",
                _NO_SPAN)])
        doc, diags = graphsync.graph_json_decode(graph)
        if doc is None:
            return _bad_request(diags)
        decl, diags = graphsync.from_graph(doc, snap().symbols)
        if decl is None:
            return _bad_request(diags)
        return {"version": GRAPH_FORMAT_VERSION,
                "source": format_pipeline(decl),
                "diagnostics": _diag_payload(diags)}

    @app.get("/stubs")
    async def stubs():
        return {"version": GRAPH_FORMAT_VERSION,
                "stubs": _palette(snap().symbols),
                "diagnostics": _diag_payload(snap().stub_diagnostics)}

    @app.post("/reload")
    async def reload():
        state["snapshot"] = Snapshot.load(manifest)
        return {"version": GRAPH_FORMAT_VERSION,
                "diagnostics": _diag_payload(snap().stub_diagnostics)}

    return app
