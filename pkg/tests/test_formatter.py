from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_pipeline_files, corpus_stub_files
from safepipe.syntax import (
    ast_equal, format_pipeline, format_program, format_stub_file,
    parse_pipeline, parse_stubs,
)


def test_corpus_pipeline_roundtrip():
    for f in corpus_pipeline_files():
        ast, diags = parse_pipeline(f.read_text(), str(f))
        assert not diags, f
        text = format_program(ast)
        re_ast, re_diags = parse_pipeline(text)
        assert not re_diags, f
        assert ast_equal(ast, re_ast), f
        assert format_program(re_ast) == text, f


def test_corpus_stub_roundtrip():
    for f in corpus_stub_files():
        ast, diags = parse_stubs(f.read_text(), str(f))
        assert not diags, f
        text = format_stub_file(ast)
        re_ast, re_diags = parse_stubs(text)
        assert not re_diags, f
        assert ast_equal(ast, re_ast), f
        assert format_stub_file(re_ast) == text, f


def test_empty_pipeline_renders_compactly():
    ast, _ = parse_pipeline("pipeline   p   {   }")
    assert format_program(ast) == "pipeline p {}\n"


def test_statements_indented_four_spaces():
    ast, _ = parse_pipeline("pipeline p { x = f(1) }")
    assert format_program(ast) == "pipeline p {\n    x = f(1)\n}\n"


def test_lambda_single_line():
    ast, _ = parse_pipeline(
        "pipeline p {\n  y = apply(( x :Int )->{ a = f(x) ; b = g(a) })\n}")
    assert ("apply((x: Int) -> { a = f(x); b = g(a) })"
            in format_program(ast))


def test_list_and_string_rendering():
    ast, _ = parse_pipeline('pipeline p { x = f([1, 2.5, "a\\nb", true]) }')
    assert 'f([1, 2.5, "a\\nb", true])' in format_program(ast)


def test_stub_blocks_separated_by_blank_line():
    stub, _ = parse_stubs("fun a()\nfun b()")
    assert format_stub_file(stub) == "fun a()\n\nfun b()\n"


def test_enum_single_line():
    stub, _ = parse_stubs("enum Color {\n  Red,\n  Green\n}")
    assert format_stub_file(stub) == "enum Color { Red, Green }\n"


# A tiny grammar-directed source generator: every generated program is
# syntactically valid, so formatting must round-trip it.
_names = st.sampled_from(["a", "b", "c", "load", "fitModel"])
_literals = st.sampled_from(['1', '2.5', '"x"', "true", "false", "[1, 2]"])


@st.composite
def _expressions(draw, depth=2):
    if depth == 0:
        return draw(_literals | _names)
    choice = draw(st.integers(0, 3))
    if choice == 0:
        return draw(_literals | _names)
    if choice == 1:
        args = draw(st.lists(_expressions(depth=depth - 1), max_size=3))
        return f"{draw(_names)}({', '.join(args)})"
    if choice == 2:
        return f"{draw(_names)}.{draw(_names)}"
    inner = draw(_expressions(depth=depth - 1))
    return f"(x: Int) -> {{ r = f({inner}) }}"


@st.composite
def _programs(draw):
    statements = draw(st.lists(
        st.tuples(_names, _expressions()), min_size=0, max_size=5))
    body = "\n".join(f"    {n} = {e}" for n, e in statements)
    return "pipeline generated {\n" + body + "\n}"


@given(_programs())
@settings(max_examples=150, deadline=None)
def test_format_roundtrip_property(source):
    ast, diags = parse_pipeline(source)
    assert not diags
    text = format_program(ast)
    re_ast, re_diags = parse_pipeline(text)
    assert not re_diags
    assert ast_equal(ast, re_ast)
    assert format_program(re_ast) == text
