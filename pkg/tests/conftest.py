import json
from pathlib import Path

import pytest

from safepipe.semantics.symbols import SymbolTable
from safepipe.syntax import parse_stubs

FIXTURES = Path(__file__).parent / "fixtures"
DEMO = FIXTURES / "demo"
CORPUS = FIXTURES / "corpus"
GOLDENS = FIXTURES / "goldens"


def corpus_pipeline_files():
    return sorted((CORPUS / "pipelines").glob("*.sdspipe"))


def corpus_stub_files():
    return sorted((CORPUS / "stubs").glob("*.sdsstub")) + sorted(
        (DEMO / "stubs").glob("*.sdsstub"))


@pytest.fixture(scope="session")
def demo_symbols():
    stub_asts = []
    for f in sorted((DEMO / "stubs").glob("*.sdsstub")):
        stub, diags = parse_stubs(f.read_text(), str(f))
        assert not diags
        stub_asts.append(stub)
    symbols, diags = SymbolTable.from_stub_files(stub_asts)
    assert not diags
    assert not symbols.validate()
    return symbols


@pytest.fixture()
def demo_manifest_file(tmp_path):
    """A manifest for the demo project with a configurable pipeline set."""

    def make(pipeline_paths):
        manifest = tmp_path / "safepipe.json"
        manifest.write_text(json.dumps({
            "name": "demo",
            "stubPaths": [str(DEMO / "stubs")],
            "pipelinePaths": [str(p) for p in pipeline_paths],
            "datasets": {"Titanic": str(DEMO / "data" / "titanic.csv")},
            "outDir": str(tmp_path / "out"),
        }))
        return manifest

    return make
