import pytest

from safepipe.semantics.checker import check_pipeline
from safepipe.semantics.consteval import NOT_CONSTANT, eval_const
from safepipe.semantics.symbols import SymbolTable
from safepipe.semantics.types import ClassType, FLOAT, INT
from safepipe.syntax import parse_pipeline, parse_stubs

STUBS = """
fun makeInt() -> result: Int

fun makeFloat() -> result: Float

fun takeFloat(x: Float) -> result: Float

fun takeRatio(ratio: Float where {it >= 0.0, it <= 1.0}) -> result: Float

fun takeLabel(label: String where {it != ""}) -> result: String

fun two() -> (a: Int, b: Int)

fun firstOf<T>(values: List<T>) -> result: T

fun same<T>(a: T, b: T) -> result: T

fun applyOnce(op: (Int) -> (Int), seed: Int) -> result: Int

class Counter {
    attr count: Int

    fun bump(by: Int) -> result: Counter
}

enum Color { Red, Green }

fun paint(shade: Color) -> result: String
"""


@pytest.fixture(scope="module")
def symbols():
    stub, diags = parse_stubs(STUBS)
    assert not diags
    table, diags = SymbolTable.from_stub_files([stub])
    assert not diags
    assert not table.validate()
    return table


def errors(source, symbols):
    ast, diags = parse_pipeline(source)
    assert not diags
    analysis = check_pipeline(ast.pipelines[0], symbols)
    return [d.code for d in analysis.diagnostics]


def analysis_of(source, symbols):
    ast, diags = parse_pipeline(source)
    assert not diags
    return ast.pipelines[0], check_pipeline(ast.pipelines[0], symbols)


def test_clean_pipeline(symbols):
    assert errors("pipeline p { x = makeInt()\n y = takeFloat(x) }",
                  symbols) == []


def test_widening_accepted(symbols):
    assert errors("pipeline p { y = takeFloat(3) }", symbols) == []


def test_argument_type_mismatch(symbols):
    assert errors('pipeline p { y = takeFloat("no") }', symbols) == ["E020"]


def test_unresolved_reference(symbols):
    assert errors("pipeline p { y = makeIn() }", symbols) == ["E010"]


def test_duplicate_assignment(symbols):
    assert errors("pipeline p { x = makeInt()\n x = makeInt() }",
                  symbols) == ["E011"]


def test_unknown_member(symbols):
    assert errors("pipeline p { c = Counter()\n z = c.missing }",
                  symbols) == ["E012"]


def test_refined_ok_and_violations(symbols):
    assert errors("pipeline p { r = takeRatio(0.5) }", symbols) == []
    assert errors("pipeline p { r = takeRatio(1.5) }", symbols) == ["E022"]
    assert errors("pipeline p { x = makeFloat()\n r = takeRatio(x) }",
                  symbols) == ["E021"]


def test_refined_constant_via_reference(symbols):
    # a directly-bound literal still counts as a compile-time constant
    assert errors("pipeline p { k = 0.25\n r = takeRatio(k) }", symbols) == []


def test_string_refinement(symbols):
    assert errors('pipeline p { s = takeLabel("ok") }', symbols) == []
    assert errors('pipeline p { s = takeLabel("") }', symbols) == ["E022"]


def test_arity_errors(symbols):
    assert errors("pipeline p { y = takeFloat() }", symbols) == ["E050"]
    assert errors("pipeline p { y = takeFloat(1.0, 2.0) }", symbols) == ["E050"]
    assert errors("pipeline p { y = takeFloat(wrong = 1.0) }",
                  symbols) == ["E050"]


def test_constructor_takes_no_arguments(symbols):
    assert errors("pipeline p { c = Counter(1) }", symbols) == ["E050"]


def test_result_count_mismatch(symbols):
    assert errors("pipeline p { a = two() }", symbols) == ["E051"]
    assert errors("pipeline p { a, b = two() }", symbols) == []
    assert errors("pipeline p { a, _ = two() }", symbols) == []


def test_generic_inference(symbols):
    decl, analysis = analysis_of(
        "pipeline p { x = firstOf([1, 2, 3]) }", symbols)
    assert analysis.diagnostics == []
    assert analysis.env["x"].type == INT


def test_mixed_list_infers_union(symbols):
    from safepipe.semantics.types import STRING, make_union

    decl, analysis = analysis_of(
        'pipeline p { x = firstOf([1, "a"]) }', symbols)
    assert analysis.diagnostics == []
    assert analysis.env["x"].type == make_union([INT, STRING])


def test_generic_unification_conflict(symbols):
    assert errors('pipeline p { x = same(1, "a") }', symbols) == ["E052"]


def test_lambda_argument(symbols):
    decl, analysis = analysis_of(
        "pipeline p { y = applyOnce((n: Int) -> { m = makeInt() }, 1) }",
        symbols)
    assert analysis.diagnostics == []
    assert analysis.env["y"].type == INT


def test_enum_variant_access(symbols):
    assert errors("pipeline p { s = paint(Color.Red) }", symbols) == []
    assert errors("pipeline p { s = paint(Color.Purple) }",
                  symbols) == ["E012"]


def test_method_call_types(symbols):
    decl, analysis = analysis_of(
        "pipeline p { c = Counter()\n d = c.bump(2)\n n = d.count }", symbols)
    assert analysis.diagnostics == []
    assert analysis.env["d"].type == ClassType("Counter")
    assert analysis.env["n"].type == INT


def test_refined_default_violation_reported_at_stub():
    stub, diags = parse_stubs(
        "fun bad(ratio: Float where {it <= 1.0} = 2.0)")
    assert not diags
    table, diags = SymbolTable.from_stub_files([stub])
    assert [d.code for d in diags] == ["E022"]


def test_const_eval():
    from safepipe.syntax.nodes import IntLit, ListLit, Negation, StringLit

    assert eval_const(IntLit(3)) == 3
    assert eval_const(Negation(IntLit(3))) == -3
    assert eval_const(ListLit([IntLit(1), StringLit("a")])) == [1, "a"]
