"""End-to-end acceptance suite.

One test per acceptance criterion, each with its stated tolerance.  The
randomized criteria reuse the independent oracles defined in the
per-module suites (brute-force schema application, naive regex
matching) so this file only orchestrates and enforces budgets.
"""

import ast as python_ast
import random
import time

import pytest
from fastapi.testclient import TestClient

from conftest import (
    CORPUS, DEMO, GOLDENS, corpus_pipeline_files, corpus_stub_files,
)
from safepipe import graphsync
from safepipe.codegen import emit_python
from safepipe.project import Manifest, run_check
from safepipe.semantics.checker import check_pipeline
from safepipe.semantics.types import (
    ANY, BOOLEAN, FLOAT, INT, NOTHING, STRING, ClassType, EnumType,
    FunctionType, RefinedType, is_subtype, list_of, make_union,
)
from safepipe.server import create_app
from safepipe.stubgen import generate_stubs, map_hint, mine_constraints, parse_py_signatures
from safepipe.syntax import (
    ast_equal, format_pipeline, format_program, format_stub_file,
    parse_pipeline, parse_stubs,
)
from safepipe.syntax.formatter import format_type

from test_protocol import run_dfa_equivalence
from test_schema import run_equivalence
from test_types import _H  # the Animal/Dog/Puppy hierarchy


# --- criterion 1: parser round-trip on the corpus, < 5 s --------------------


def test_parser_roundtrip_corpus_under_five_seconds():
    pipeline_files = corpus_pipeline_files()
    stub_files = corpus_stub_files()
    assert len(pipeline_files) >= 25
    assert len(stub_files) >= 10
    start = time.perf_counter()
    for path in pipeline_files:
        source = path.read_text()
        program, diags = parse_pipeline(source, str(path))
        assert not diags, path
        text = format_program(program)
        program2, diags = parse_pipeline(text, str(path))
        assert not diags, path
        assert ast_equal(program, program2), path
        assert format_program(program2) == text, path  # idempotent
    for path in stub_files:
        source = path.read_text()
        stub, diags = parse_stubs(source, str(path))
        assert not diags, path
        text = format_stub_file(stub)
        stub2, diags = parse_stubs(text, str(path))
        assert not diags, path
        assert ast_equal(stub, stub2), path
        assert format_stub_file(stub2) == text, path
    assert time.perf_counter() - start < 5.0


# --- criterion 2: Titanic fixture clean + 8 seeded faults -------------------

FAULT_EXPECTATIONS = {
    "e020": ("E020", 5),
    "e021": ("E021", 9),
    "e022": ("E022", 9),
    "e030": ("E030", 7),
    "e031": ("E031", 8),
    "e040": ("E040", 11),
    "e050": ("E050", 11),
    "e011": ("E011", 8),
}


def test_titanic_fixture_checks_cleanly():
    result = run_check(Manifest.load(DEMO / "safepipe.json"))
    assert result.exit_code == 0
    assert result.diagnostics == []


@pytest.mark.parametrize("fault", sorted(FAULT_EXPECTATIONS))
def test_titanic_seeded_fault(fault, demo_manifest_file):
    expected_code, expected_line = FAULT_EXPECTATIONS[fault]
    manifest = Manifest.load(
        demo_manifest_file([DEMO / "faults" / f"{fault}.sdspipe"]))
    result = run_check(manifest)
    assert result.exit_code == 1
    assert [(d.code, d.span.start_line) for d in result.diagnostics] == [
        (expected_code, expected_line)]


# --- criterion 3: schema oracle equivalence, 500 cases < 10 s ---------------


def test_schema_effects_match_bruteforce_oracle_500_cases():
    start = time.perf_counter()
    assert run_equivalence(500, seed=20250825) == 0
    assert time.perf_counter() - start < 10.0


# --- criterion 4: protocol DFA vs naive matcher, 200 regexes ----------------


def test_protocol_dfa_matches_naive_matcher_200_regexes():
    mismatches, prefix_violations = run_dfa_equivalence(
        200, seed=424242, max_word_len=6)
    assert mismatches == 0
    assert prefix_violations == 0


# --- criterion 5: subtyping laws on 1000 random type terms ------------------


_ATOMS = [
    INT, FLOAT, STRING, BOOLEAN, ANY, NOTHING,
    ClassType("Animal"), ClassType("Dog"), ClassType("Puppy"),
    EnumType("Color"),
    RefinedType(INT, ((">=", 0),)),
    RefinedType(FLOAT, (("<=", 1.0),)),
]


def _random_term(rng, depth=3):
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(_ATOMS)
    kind = rng.randrange(3)
    if kind == 0:
        return list_of(_random_term(rng, depth - 1))
    if kind == 1:
        return FunctionType(
            tuple(_random_term(rng, depth - 1)
                  for _ in range(rng.randint(0, 2))),
            tuple(_random_term(rng, depth - 1)
                  for _ in range(rng.randint(0, 2))))
    return make_union([_random_term(rng, depth - 1)
                       for _ in range(rng.randint(1, 3))])


def test_subtyping_laws_on_1000_random_terms():
    rng = random.Random(1000)
    terms = [_random_term(rng) for _ in range(1000)]
    violations = 0
    for t in terms:
        if not is_subtype(t, t, _H):
            violations += 1
    for _ in range(1000):
        a, b, c = rng.choice(terms), rng.choice(terms), rng.choice(terms)
        if is_subtype(a, b, _H) and is_subtype(b, c, _H):
            if not is_subtype(a, c, _H):
                violations += 1
        u = make_union([a, b])
        if not (is_subtype(a, u, _H) and is_subtype(b, u, _H)):
            violations += 1
        if make_union([u, a]) != u or make_union([a, a]) != a:
            violations += 1
    assert violations == 0


# --- criterion 6: graph equivalence, direct and through HTTP ----------------


def _corpus_pipelines(demo_symbols):
    for path in corpus_pipeline_files():
        program, diags = parse_pipeline(path.read_text(), str(path))
        assert not diags, path
        for decl in program.pipelines:
            yield path, decl, check_pipeline(decl, demo_symbols)


def test_graph_roundtrip_every_corpus_pipeline(demo_symbols):
    failures = []
    for path, decl, analysis in _corpus_pipelines(demo_symbols):
        doc, diags = graphsync.to_graph(decl, analysis)
        if doc is None:
            failures.append((path, decl.name, [d.code for d in diags]))
            continue
        back, diags = graphsync.from_graph(doc, demo_symbols)
        if back is None or not ast_equal(decl, back):
            failures.append((path, decl.name, [d.code for d in diags]))
    assert failures == []


def test_graph_roundtrip_through_http(demo_symbols):
    client = TestClient(create_app(Manifest.load(DEMO / "safepipe.json")))
    failures = []
    for path, decl, _ in _corpus_pipelines(demo_symbols):
        source = format_pipeline(decl)
        exported = client.post("/graph/from-text", json={"source": source})
        if exported.status_code != 200:
            failures.append((path, decl.name, exported.json()))
            continue
        back = client.post(
            "/graph/to-text", json={"graph": exported.json()["graph"]})
        if back.status_code != 200 or back.json()["source"] != source:
            failures.append((path, decl.name, back.json()))
    assert failures == []


# --- criterion 7: codegen goldens, byte-exact + external validation ---------

GOLDEN_SOURCES = {
    "titanic": DEMO / "pipelines" / "titanic.sdspipe",
    "empty": CORPUS / "pipelines" / "p04_empty.sdspipe",
    "lambda_transform": CORPUS / "pipelines" / "p17_lambda_two_stmts.sdspipe",
    "two_models": CORPUS / "pipelines" / "p11_two_models.sdspipe",
    "train_and_score": CORPUS / "pipelines" / "p19_full_train.sdspipe",
}


@pytest.mark.parametrize("name", sorted(GOLDEN_SOURCES))
def test_codegen_golden(name, demo_symbols):
    path = GOLDEN_SOURCES[name]
    program, diags = parse_pipeline(path.read_text(), str(path))
    assert not diags
    decl = program.pipelines[0]
    analysis = check_pipeline(decl, demo_symbols)
    text, diags = emit_python(decl, analysis, demo_symbols)
    assert text is not None, [d.render() for d in diags]
    golden = (GOLDENS / f"{name}.py.golden").read_text()
    assert text == golden
    python_ast.parse(golden)  # external syntax validation


# --- criterion 8: stubgen tables + emitted stubs re-parse -------------------


def test_stubgen_mapping_table_reproduces():
    table = {
        "int": "Int",
        "float": "Float",
        "str": "String",
        "bool": "Boolean",
        "list[int]": "List<Int>",
        "Optional[float]": "union<Float, Nothing>",
        "int | None": "union<Int, Nothing>",
        "int | str": "union<Int, String>",
    }
    for hint, expected in table.items():
        ty, reason = map_hint(hint)
        assert (format_type(ty), reason) == (expected, None), hint


def test_stubgen_mining_table_reproduces():
    assert mine_constraints("between 0 and 1")[0] == [(">=", 0), ("<=", 1)]
    assert mine_constraints("in range (0, 1]")[0] == [(">", 0), ("<=", 1)]
    assert mine_constraints("non-negative")[0] == [(">=", 0)]
    assert mine_constraints("positive")[0] == [(">", 0)]
    assert mine_constraints("at most 5")[0] == [("<=", 5)]
    source = '''def f(ratio: float):
    """Do.

    Parameters
    ----------
    ratio : float, between 0 and 1
    """
'''
    sigs, _ = parse_py_signatures(source)
    text, _ = generate_stubs(sigs, "m")
    assert "ratio: Float where {it >= 0.0, it <= 1.0}" in text


STUBGEN_SAMPLES = [
    "def load(path: str) -> object:\n    pass\n",
    "def f(a: int = 3, b: float = 0.5, c: bool = True) -> float:\n    pass\n",
    "def g(xs: list[int], label: str = 'x') -> str:\n    pass\n",
    "def h(x: int | None, y) -> None:\n    pass\n",
    '''def split(table, ratio: float = 0.8):
    """Split.

    Parameters
    ----------
    ratio : float, in range (0, 1)
    """
''',
]


@pytest.mark.parametrize("index", range(len(STUBGEN_SAMPLES)))
def test_emitted_stub_reparses_cleanly(index):
    sigs, _ = parse_py_signatures(STUBGEN_SAMPLES[index])
    text, _ = generate_stubs(sigs, f"sample{index}")
    _, diags = parse_stubs(text)
    assert diags == []
