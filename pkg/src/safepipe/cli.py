"""Command-line entry point."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import graphsync, stubgen
from .diagnostics import sort_key
from .project import (
    Manifest, ManifestError, discover_manifest, run_check, run_compile,
)
from .syntax import (
    format_pipeline, format_program, format_stub_file, parse_pipeline,
    parse_stubs,
)


def _load_manifest(path):
    manifest_path = Path(path) if path else discover_manifest()
    if manifest_path is None:
        raise ManifestError(
            "no safepipe.json found (searched upward from the current "
            "directory; set SAFEPIPE_MANIFEST to override)")
    return Manifest.load(manifest_path)


def _print_diags(diags, as_json):
    if as_json:
        click.echo(json.dumps([d.to_json() for d in diags], indent=2))
    else:
        for d in diags:
            click.echo(d.render())


@click.group()
@click.option("--manifest", "manifest_path", default=None,
              type=click.Path(), help="Path to safepipe.json.")
@click.pass_context
def main(ctx, manifest_path):
    """Statically checked data-science pipelines."""
    ctx.ensure_object(dict)
    ctx.obj["manifest_path"] = manifest_path


@main.command()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def check(ctx, as_json):
    """Run all checker stages over the project."""
    try:
        manifest = _load_manifest(ctx.obj["manifest_path"])
        result = run_check(manifest)
    except ManifestError as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    _print_diags(result.diagnostics, as_json)
    sys.exit(result.exit_code)


@main.command()
@click.option("--write", is_flag=True, help="Rewrite files in place.")
@click.argument("files", nargs=-1, type=click.Path(exists=True))
@click.pass_context
def format(ctx, write, files):
    """Canonically format pipeline and stub files."""
    targets = [Path(f) for f in files]
    if not targets:
        try:
            manifest = _load_manifest(ctx.obj["manifest_path"])
        except ManifestError as exc:
            click.echo(str(exc), err=True)
            sys.exit(2)
        from .project import _expand
        targets = (_expand(manifest.pipeline_paths, ".sdspipe")
                   + _expand(manifest.stub_paths, ".sdsstub"))
    failed = False
    for path in targets:
        source = path.read_text()
        if path.suffix == ".sdsstub":
            ast, diags = parse_stubs(source, str(path))
            text = format_stub_file(ast)
        else:
            ast, diags = parse_pipeline(source, str(path))
            text = format_program(ast)
        if any(d.is_error for d in diags):
            _print_diags(diags, False)
            failed = True
            continue
        if write:
            if text != source:
                path.write_text(text)
                click.echo(f"formatted {path}")
        else:
            click.echo(text, nl=False)
    sys.exit(1 if failed else 0)


@main.command()
@click.pass_context
def compile(ctx):
    """Check the project and emit Python code into outDir."""
    try:
        manifest = _load_manifest(ctx.obj["manifest_path"])
        written, result = run_compile(manifest)
    except ManifestError as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    if result.exit_code != 0:
        _print_diags(result.diagnostics, False)
        sys.exit(1)
    for path in written:
        click.echo(str(path))
    sys.exit(0)


@main.group()
def graph():
    """Export or import dataflow-graph documents."""


@graph.command("export")
@click.argument("pipeline_name")
@click.pass_context
def graph_export(ctx, pipeline_name):
    """Print the graph JSON for one pipeline of the project."""
    try:
        manifest = _load_manifest(ctx.obj["manifest_path"])
        result = run_check(manifest)
    except ManifestError as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    if result.exit_code != 0:
        _print_diags(result.diagnostics, False)
        sys.exit(1)
    for lp in result.pipelines:
        if lp.decl.name == pipeline_name:
            doc, diags = graphsync.to_graph(lp.decl, lp.analysis)
            if doc is None:
                _print_diags(diags, False)
                sys.exit(1)
            click.echo(graphsync.graph_json_encode(doc), nl=False)
            sys.exit(0)
    click.echo(f"no pipeline named '{pipeline_name}' in the project", err=True)
    sys.exit(2)


@graph.command("import")
@click.argument("graph_file", type=click.Path(exists=True))
@click.pass_context
def graph_import(ctx, graph_file):
    """Print pipeline source reconstructed from a graph JSON file."""
    try:
        manifest = _load_manifest(ctx.obj["manifest_path"])
        result = run_check(manifest)
    except ManifestError as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    if result.symbols is None:
        _print_diags(result.diagnostics, False)
        sys.exit(1)
    doc, diags = graphsync.graph_json_decode(Path(graph_file).read_text())
    if doc is None:
        _print_diags(diags, False)
        sys.exit(1)
    decl, diags = graphsync.from_graph(doc, result.symbols)
    if decl is None:
        _print_diags(diags, False)
        sys.exit(1)
    click.echo(format_pipeline(decl), nl=False)
    sys.exit(0)


@main.command("stubgen")
@click.argument("py_files", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--module", default=None,
              help="Python module name recorded in @PythonModule "
                   "(default: the file stem).")
def stubgen_cmd(py_files, module):
    """Extract stub files from Python sources."""
    report_entries = []
    generated_total = 0
    failed = False
    for f in py_files:
        path = Path(f)
        try:
            source = path.read_text()
        except OSError as exc:
            click.echo(f"{path}: error[E080]: {exc}", err=True)
            failed = True
            continue
        module_name = module or path.stem
        signatures, diags = stubgen.parse_py_signatures(
            source, module_name, str(path))
        for d in diags:
            click.echo(d.render())
        text, report = stubgen.generate_stubs(signatures, module_name)
        target = path.with_suffix(".sdsstub")
        target.write_text(text)
        click.echo(str(target))
        generated_total += report.generated
        report_entries.extend(
            {"file": str(path), "declaration": decl, "reason": reason}
            for decl, reason in report.needs_review)
    report_path = Path("stubgen-report.json")
    report_path.write_text(json.dumps(
        {"generated": generated_total, "needsReview": report_entries},
        indent=2) + "\n")
    click.echo(str(report_path))
    sys.exit(1 if failed else 0)


@main.command()
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.pass_context
def serve(ctx, port, host):
    """Serve the HTTP API that backs the graphical editor."""
    import uvicorn

    from .server import create_app

    try:
        manifest = _load_manifest(ctx.obj["manifest_path"])
    except ManifestError as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    app = create_app(manifest)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
