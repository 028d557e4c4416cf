from hypothesis import given, settings
from hypothesis import strategies as st

from safepipe.stubgen import (
    camel_case, generate_stubs, map_hint, mine_constraints,
    parse_py_signatures,
)
from safepipe.syntax import parse_stubs
from safepipe.syntax.formatter import format_type

# --- signature extraction ---------------------------------------------------


def test_simple_def():
    sigs, diags = parse_py_signatures(
        "def load_dataset(name: str) -> object:\n    pass\n")
    assert not diags
    (sig,) = sigs
    assert sig.name == "load_dataset"
    assert sig.params == [("name", "str", None)]
    assert sig.return_hint == "object"


def test_docstring_parameters_captured():
    source = '''def train_test_split(table, ratio: float):
    """Split rows.

    Parameters
    ----------
    table : object, the rows
    ratio : float, between 0 and 1
    """
'''
    sigs, _ = parse_py_signatures(source)
    assert sigs[0].doc_params["ratio"] == "float, between 0 and 1"


def test_broken_def_skipped_with_w080():
    source = ("def ok(x: int) -> int:\n    pass\n\n"
              "def broken(oops\n    pass\n\n"
              "def also_ok() -> float:\n    pass\n")
    sigs, diags = parse_py_signatures(source)
    assert [s.name for s in sigs] == ["ok", "also_ok"]
    assert [d.code for d in diags] == ["W080"]


def test_nested_and_class_decls_w081():
    source = ("class Helper:\n    pass\n\n"
              "def outer():\n    def inner():\n        pass\n")
    sigs, diags = parse_py_signatures(source)
    assert [s.name for s in sigs] == ["outer"]
    assert sorted(d.code for d in diags) == ["W081", "W081"]


def test_defaults_extracted():
    sigs, _ = parse_py_signatures("def f(a: int = 3, b: str = 'x'):\n    pass\n")
    assert sigs[0].params == [("a", "int", "3"), ("b", "str", "'x'")]


# --- hint mapping -----------------------------------------------------------


def mapped(hint):
    ty, reason = map_hint(hint)
    return format_type(ty), reason


def test_mapping_table():
    assert mapped("int") == ("Int", None)
    assert mapped("float") == ("Float", None)
    assert mapped("str") == ("String", None)
    assert mapped("bool") == ("Boolean", None)
    assert mapped("list[int]") == ("List<Int>", None)
    assert mapped("List[float]") == ("List<Float>", None)
    assert mapped("Optional[int]") == ("union<Int, Nothing>", None)
    assert mapped("int | None") == ("union<Int, Nothing>", None)
    assert mapped("int | str") == ("union<Int, String>", None)


def test_unmapped_hints_become_any():
    ty, reason = map_hint("np.ndarray")
    assert format_type(ty) == "Any"
    assert "unmapped hint" in reason
    assert map_hint(None)[1] == "missing type hint"


# --- constraint mining ------------------------------------------------------


def test_between_phrase():
    assert mine_constraints("between 0 and 1") == ([(">=", 0), ("<=", 1)], None)
    assert mine_constraints("a ratio Between 0.5 and 2.5")[0] == [
        (">=", 0.5), ("<=", 2.5)]


def test_range_brackets_control_strictness():
    assert mine_constraints("in range [0, 1]")[0] == [(">=", 0), ("<=", 1)]
    assert mine_constraints("in range (0, 1)")[0] == [(">", 0), ("<", 1)]
    assert mine_constraints("in the range (0, 1]")[0] == [(">", 0), ("<=", 1)]


def test_keyword_phrases():
    assert mine_constraints("must be non-negative")[0] == [(">=", 0)]
    assert mine_constraints("a positive count")[0] == [(">", 0)]
    assert mine_constraints("at most 10")[0] == [("<=", 10)]
    assert mine_constraints("at least 2")[0] == [(">=", 2)]


def test_reversed_bounds_dropped():
    constraints, reason = mine_constraints("between 5 and 2")
    assert constraints == []
    assert "reversed bounds" in reason


@given(st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Zs")), max_size=60))
@settings(max_examples=200, deadline=None)
def test_mining_is_conservative(text):
    # sentences without the recognized keywords never yield constraints
    keywords = ("between", "range", "non-negative", "positive",
                "at most", "at least")
    if not any(k in text for k in keywords):
        assert mine_constraints(text) == ([], None)


# --- stub emission ----------------------------------------------------------


def test_camel_case():
    assert camel_case("load_dataset") == "loadDataset"
    assert camel_case("fit") == "fit"
    assert camel_case("train_test_split") == "trainTestSplit"


def test_generated_stub_text():
    source = '''def train_test_split(table, ratio: float = 0.8) -> tuple:
    """Split a table.

    Parameters
    ----------
    ratio : float, between 0 and 1
    """
'''
    sigs, _ = parse_py_signatures(source)
    text, report = generate_stubs(sigs, "demo.split")
    assert '@PythonModule("demo.split")' in text
    assert '@PythonName("train_test_split")' in text
    assert "fun trainTestSplit(" in text
    assert "ratio: Float where {it >= 0.0, it <= 1.0} = 0.8" in text
    assert report.generated == 1


def test_every_emitted_any_is_in_needs_review():
    source = ("def mystery(x, y: int) -> object:\n    pass\n"
              "\ndef plain(z: float) -> float:\n    pass\n")
    sigs, _ = parse_py_signatures(source)
    text, report = generate_stubs(sigs, "m")
    any_count = text.count(": Any")
    assert any_count == len(
        [e for e in report.needs_review
         if "hint" in e[1] or "missing" in e[1]]) == 2


def test_generated_stubs_reparse_cleanly():
    source = '''def load_dataset(name: str) -> object:
    pass

def sample(count: int = 10, ratio: float = 0.5) -> float:
    """Sample rows.

    Parameters
    ----------
    count : int, must be positive
    ratio : float, in range (0, 1]
    """

def label_of(row: list[int], fallback: str = "none") -> str:
    pass
'''
    sigs, diags = parse_py_signatures(source)
    assert not diags
    text, _ = generate_stubs(sigs, "demo.mix")
    _, stub_diags = parse_stubs(text)
    assert stub_diags == []


def test_empty_input_produces_empty_report():
    text, report = generate_stubs([], "demo.empty")
    assert report.generated == 0
    _, diags = parse_stubs(text)
    assert not diags


def test_accounting_generated_equals_parsed_minus_skipped():
    source = ("def a():\n    pass\n\ndef broken(:\n    pass\n\n"
              "def b():\n    pass\n")
    sigs, diags = parse_py_signatures(source)
    text, report = generate_stubs(sigs, "m")
    assert report.generated == len(sigs) == 2
    assert [d.code for d in diags] == ["W080"]
