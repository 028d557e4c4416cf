"""Project manifest handling and the check/compile drivers.

A project is described by a `safepipe.json` manifest.  The drivers load
stubs and pipelines and run the checker stages in a fixed order (syntax,
resolution, types, then schema and protocol together); later stages only
run when the earlier ones are clean, so a seeded fault surfaces as
exactly one diagnostic family.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import codegen, protocol, schema
from .diagnostics import Diagnostic, sort_key
from .semantics.checker import check_pipeline
from .semantics.symbols import SymbolTable
from .syntax import parse_pipeline, parse_stubs

MANIFEST_NAME = "safepipe.json"
ENV_MANIFEST = "SAFEPIPE_MANIFEST"


class ManifestError(Exception):
    """Manifest or project IO failure; maps to exit code 2."""


@dataclass
class Manifest:
    name: str
    stub_paths: list
    pipeline_paths: list
    datasets: dict  # dataset key -> csv Path
    out_dir: Path
    root: Path  # directory the manifest lives in

    @classmethod
    def load(cls, path) -> "Manifest":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except OSError as exc:
            raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ManifestError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ManifestError(f"{path}: manifest must be a JSON object")
        root = path.resolve().parent
        datasets = raw.get("datasets", {})
        if not isinstance(datasets, dict):
            raise ManifestError(f"{path}: 'datasets' must be an object")
        return cls(
            name=raw.get("name", root.name),
            stub_paths=[root / p for p in raw.get("stubPaths", [])],
            pipeline_paths=[root / p for p in raw.get("pipelinePaths", [])],
            datasets={k: root / v for k, v in datasets.items()},
            out_dir=root / raw.get("outDir", "out"),
            root=root,
        )


def discover_manifest(start=None):
    """Nearest safepipe.json upward from cwd; SAFEPIPE_MANIFEST overrides."""
    override = os.environ.get(ENV_MANIFEST)
    if override:
        return Path(override)
    current = Path(start or os.getcwd()).resolve()
    for directory in [current, *current.parents]:
        candidate = directory / MANIFEST_NAME
        if candidate.is_file():
            return candidate
    return None


def _expand(paths, suffix) -> list:
    files = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob(f"*{suffix}")))
        elif p.is_file():
            files.append(p)
        else:
            raise ManifestError(f"path does not exist: {p}")
    return files


@dataclass
class LoadedPipeline:
    file: str
    decl: object  # PipelineDecl
    analysis: object = None  # PipelineAnalysis, set by the types stage
    schemas: dict = field(default_factory=dict)


@dataclass
class CheckResult:
    diagnostics: list
    schemas: dict  # "pipeline.variable" -> Schema
    exit_code: int
    symbols: object = None  # SymbolTable when resolution succeeded
    pipelines: list = field(default_factory=list)  # LoadedPipeline


def _has_errors(diags) -> bool:
    return any(d.is_error for d in diags)


def run_check(manifest: Manifest, csv_cache=None) -> CheckResult:
    """Run every stage over the whole project and aggregate diagnostics."""
    diags: list[Diagnostic] = []
    stub_files = _expand(manifest.stub_paths, ".sdsstub")
    pipeline_files = _expand(manifest.pipeline_paths, ".sdspipe")

    # stage 1: syntax
    stub_asts = []
    for f in stub_files:
        try:
            source = f.read_text()
        except OSError as exc:
            raise ManifestError(f"cannot read {f}: {exc}") from exc
        stub, d = parse_stubs(source, str(f))
        stub_asts.append(stub)
        diags.extend(d)
    pipelines: list[LoadedPipeline] = []
    for f in pipeline_files:
        try:
            source = f.read_text()
        except OSError as exc:
            raise ManifestError(f"cannot read {f}: {exc}") from exc
        program, d = parse_pipeline(source, str(f))
        diags.extend(d)
        for decl in program.pipelines:
            pipelines.append(LoadedPipeline(str(f), decl))
    if _has_errors(diags):
        return _finish(diags, pipelines, None)

    # stage 2: resolution (symbol table construction + stub validation)
    symbols, d = SymbolTable.from_stub_files(stub_asts)
    diags.extend(d)  # includes cross-file duplicate and stub-validity checks
    if _has_errors(diags):
        return _finish(diags, pipelines, symbols)

    # stage 3: types (includes refined-type and arity checks)
    for lp in pipelines:
        lp.analysis = check_pipeline(lp.decl, symbols)
        diags.extend(lp.analysis.diagnostics)
    if _has_errors(diags):
        return _finish(diags, pipelines, symbols)

    # stage 4: schema and protocol, both on a clean typed program
    cache = csv_cache if csv_cache is not None else schema.CsvSchemaCache()
    datasets = {k: str(v) for k, v in manifest.datasets.items()}
    automata = protocol.build_automata(symbols)
    for lp in pipelines:
        lp.schemas, d = schema.propagate(
            lp.decl, lp.analysis, symbols, datasets, cache)
        diags.extend(d)
        words, d = protocol.extract_call_words(lp.decl, lp.analysis, symbols)
        diags.extend(d)
        diags.extend(protocol.check_order(words, automata))
    return _finish(diags, pipelines, symbols)


def _finish(diags, pipelines, symbols) -> CheckResult:
    ordered = sorted(diags, key=sort_key)
    schemas = {}
    for lp in pipelines:
        for var, sch in lp.schemas.items():
            schemas[f"{lp.decl.name}.{var}"] = sch
    exit_code = 1 if _has_errors(ordered) else 0
    return CheckResult(ordered, schemas, exit_code, symbols, pipelines)


def run_compile(manifest: Manifest) -> tuple:
    """Check, then emit one Python file per pipeline into outDir.

    Returns (written_paths, CheckResult); refuses to write when any check
    fails.
    """
    result = run_check(manifest)
    if result.exit_code != 0:
        return [], result
    written = []
    for lp in result.pipelines:
        text, d = codegen.emit_python(lp.decl, lp.analysis, result.symbols)
        if d:
            result.diagnostics.extend(d)
            result.exit_code = 1
            return [], result
        manifest.out_dir.mkdir(parents=True, exist_ok=True)
        target = manifest.out_dir / f"{lp.decl.name}.py"
        target.write_text(text)
        written.append(target)
    return written, result
