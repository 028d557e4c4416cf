"""Semi-automated stub generation from Python sources.

Extracts top-level function signatures (type hints plus numpydoc-style
"Parameters" sections), maps them to DSL types, mines range phrases into
refinement constraints, and emits stub text that is guaranteed to
re-parse (it is rendered through the regular formatter).
"""

from __future__ import annotations

import ast as py_ast
import re
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, SourceSpan, error, warning
from .syntax.formatter import format_stub_file
from .syntax.nodes import (
    Annotation, Constraint, FloatLit, FunDecl, IntLit, NamedType, ParamDecl,
    RefinedTypeRef, ResultDecl, StringLit, BoolLit, StubFile, UnionTypeRef,
)


@dataclass
class PySignature:
    module: str
    name: str
    params: list = field(default_factory=list)  # (name, hint|None, default|None)
    return_hint: str = None
    doc_params: dict = field(default_factory=dict)  # name -> description text


@dataclass
class ExtractionReport:
    generated: int = 0
    needs_review: list = field(default_factory=list)  # (declaration, reason)

    def to_json(self):
        return {
            "generated": self.generated,
            "needsReview": [
                {"declaration": d, "reason": r} for d, r in self.needs_review
            ],
        }


# --- signature extraction ---------------------------------------------------


def _split_top_level_blocks(source: str):
    """Yield (start_line, kind, text) for col-0 def/class blocks.

    Per-block splitting lets one broken def be skipped without losing the
    valid ones around it.
    """
    lines = source.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        match = re.match(r"^(def|class)\s", line)
        if not match and re.match(r"^@", line):
            # a decorator heads the following def/class block
            j = i
            while j < len(lines) and re.match(r"^@", lines[j]):
                j += 1
            if j < len(lines) and re.match(r"^(def|class)\s", lines[j]):
                match = re.match(r"^(def|class)\s", lines[j])
        if not match:
            i += 1
            continue
        start = i
        i += 1
        while i < len(lines):
            nxt = lines[i]
            if nxt.strip() == "" or nxt.startswith((" ", "\t", ")")):
                i += 1
            else:
                break
        yield start + 1, match.group(1), "\n".join(lines[start:i])


def parse_py_signatures(source: str, module: str = "", file: str = "<input>"):
    """Extract PySignatures from Python source; returns (signatures, diags)."""
    signatures: list[PySignature] = []
    diags: list[Diagnostic] = []
    for line_no, kind, block in _split_top_level_blocks(source):
        span = SourceSpan(file, line_no, 1, line_no, max(1, len(block.split("\n")[0])))
        if kind == "class":
            diags.append(warning(
                "W081", "class declarations are skipped (functions only)", span))
            continue
        try:
            tree = py_ast.parse(block)
        except SyntaxError:
            diags.append(warning("W080", "skipped unparseable def", span))
            continue
        defs = [n for n in tree.body if isinstance(n, py_ast.FunctionDef)]
        if not defs:
            diags.append(warning("W080", "skipped unparseable def", span))
            continue
        fn = defs[0]
        for nested in py_ast.walk(fn):
            if nested is not fn and isinstance(
                    nested, (py_ast.FunctionDef, py_ast.ClassDef)):
                diags.append(warning(
                    "W081", f"skipped nested declaration '{nested.name}'", span))
        sig = PySignature(module, fn.name)
        args = fn.args
        defaults = [None] * (len(args.args) - len(args.defaults)) + list(args.defaults)
        for arg, default in zip(args.args, defaults):
            hint = py_ast.unparse(arg.annotation) if arg.annotation else None
            default_text = py_ast.unparse(default) if default is not None else None
            sig.params.append((arg.arg, hint, default_text))
        if fn.returns is not None:
            sig.return_hint = py_ast.unparse(fn.returns)
        doc = py_ast.get_docstring(fn)
        if doc:
            sig.doc_params = _parse_doc_params(doc)
        signatures.append(sig)
    return signatures, diags


def _parse_doc_params(doc: str) -> dict:
    """Numpydoc-like "Parameters" section: `name : free text` entries."""
    lines = doc.splitlines()
    params = {}
    in_section = False
    for i, line in enumerate(lines):
        stripped = line.strip()
        if stripped == "Parameters":
            if i + 1 < len(lines) and set(lines[i + 1].strip()) == {"-"}:
                in_section = True
            continue
        if in_section:
            if set(stripped) == {"-"}:
                continue
            if not stripped:
                continue
            if re.match(r"^\w+$", stripped) and i + 1 < len(lines) \
                    and set(lines[i + 1].strip()) == {"-"}:
                in_section = False  # next section header
                continue
            m = re.match(r"^(\w+)\s*:\s*(.*)$", stripped)
            if m:
                params[m.group(1)] = m.group(2)
    return params


# --- hint mapping -----------------------------------------------------------

_SCALAR_HINTS = {"int": "Int", "float": "Float", "str": "String", "bool": "Boolean"}


def map_hint(hint_text):
    """Map a Python type-hint string to a TypeRef.

    Returns (TypeRef, reason) where reason is None when the mapping is
    exact and a needs-review explanation otherwise.
    """
    if hint_text is None:
        return NamedType("Any"), "missing type hint"
    try:
        node = py_ast.parse(hint_text.strip(), mode="eval").body
    except SyntaxError:
        return NamedType("Any"), f"unmapped hint '{hint_text}'"
    ty = _map_hint_node(node)
    if ty is None:
        return NamedType("Any"), f"unmapped hint '{hint_text}'"
    return ty, None


def _map_hint_node(node):
    if isinstance(node, py_ast.Name):
        if node.id in _SCALAR_HINTS:
            return NamedType(_SCALAR_HINTS[node.id])
        if node.id in ("list", "List"):
            return NamedType("List", [NamedType("Any")])
        return None
    if isinstance(node, py_ast.Constant) and node.value is None:
        return NamedType("Nothing")
    if isinstance(node, py_ast.Subscript):
        base = node.value
        base_name = base.id if isinstance(base, py_ast.Name) else None
        inner = node.slice
        if base_name in ("list", "List"):
            member = _map_hint_node(inner)
            return None if member is None else NamedType("List", [member])
        if base_name == "Optional":
            member = _map_hint_node(inner)
            if member is None:
                return None
            return UnionTypeRef([member, NamedType("Nothing")])
        return None
    if isinstance(node, py_ast.BinOp) and isinstance(node.op, py_ast.BitOr):
        members = []
        ok = _collect_union(node, members)
        if not ok:
            return None
        return UnionTypeRef(members)
    return None


def _collect_union(node, members) -> bool:
    if isinstance(node, py_ast.BinOp) and isinstance(node.op, py_ast.BitOr):
        return (_collect_union(node.left, members)
                and _collect_union(node.right, members))
    mapped = _map_hint_node(node)
    if mapped is None:
        return False
    members.append(mapped)
    return True


# --- constraint mining ------------------------------------------------------

_NUM = r"[-+]?\d+(?:\.\d+)?"


def _num(text: str):
    return float(text) if "." in text or "e" in text.lower() else int(text)


def mine_constraints(doc_text):
    """Recognize range phrases; returns (constraints, dropped_reason|None).

    Constraints are (op, number) pairs; unmatched text yields none.
    """
    if not doc_text:
        return [], None
    text = doc_text.lower()
    m = re.search(rf"between\s+({_NUM})\s+and\s+({_NUM})", text)
    if m:
        low, high = _num(m.group(1)), _num(m.group(2))
        if low > high:
            return [], f"reversed bounds: between {low} and {high}"
        return [(">=", low), ("<=", high)], None
    m = re.search(rf"in\s+(?:the\s+)?range\s*([\[\(])\s*({_NUM})\s*,"
                  rf"\s*({_NUM})\s*([\]\)])", text)
    if m:
        low, high = _num(m.group(2)), _num(m.group(3))
        if low > high:
            return [], f"reversed bounds: range {low}, {high}"
        low_op = ">=" if m.group(1) == "[" else ">"
        high_op = "<=" if m.group(4) == "]" else "<"
        return [(low_op, low), (high_op, high)], None
    if re.search(r"non-negative", text):
        return [(">=", 0)], None
    if re.search(r"positive", text):
        return [(">", 0)], None
    m = re.search(rf"at\s+most\s+({_NUM})", text)
    if m:
        return [("<=", _num(m.group(1)))], None
    m = re.search(rf"at\s+least\s+({_NUM})", text)
    if m:
        return [(">=", _num(m.group(1)))], None
    return [], None


# --- stub emission ----------------------------------------------------------


def camel_case(name: str) -> str:
    parts = name.split("_")
    head = parts[0] or "_"
    return head + "".join(p.title() for p in parts[1:] if p)


def _constant_node(value, as_float=False):
    if isinstance(value, bool):
        return BoolLit(value)
    if isinstance(value, float) or (as_float and isinstance(value, int)):
        return FloatLit(float(value))
    if isinstance(value, int):
        return IntLit(value)
    return StringLit(str(value))


def _default_node(default_text):
    if default_text is None:
        return None
    try:
        value = py_ast.literal_eval(default_text)
    except (ValueError, SyntaxError):
        return None
    if isinstance(value, (bool, int, float, str)):
        return _constant_node(value)
    return None


def generate_stubs(signatures, module_name):
    """Emit stub text for a module's signatures; returns (text, report)."""
    report = ExtractionReport()
    declarations = []
    for sig in signatures:
        stub_name = camel_case(sig.name)
        label = f"{stub_name} ({sig.name})"
        params = []
        for name, hint, default_text in sig.params:
            ty, reason = map_hint(hint)
            if reason is not None:
                report.needs_review.append((f"{label}, parameter {name}", reason))
            constraints, dropped = mine_constraints(sig.doc_params.get(name))
            if dropped:
                report.needs_review.append((f"{label}, parameter {name}", dropped))
            if constraints and isinstance(ty, NamedType) \
                    and ty.name in ("Int", "Float"):
                as_float = ty.name == "Float"
                ty = RefinedTypeRef(ty, [
                    Constraint(op, _constant_node(v, as_float))
                    for op, v in constraints
                ])
            default = _default_node(default_text)
            if default_text is not None and default is None \
                    and default_text != "None":
                report.needs_review.append(
                    (f"{label}, parameter {name}",
                     f"unmapped default '{default_text}'"))
            params.append(ParamDecl(name, ty, default))
        results = []
        if sig.return_hint != "None":
            ty, reason = map_hint(sig.return_hint)
            if reason is not None:
                report.needs_review.append(
                    (f"{label}, return", reason or "missing return hint"))
            results.append(ResultDecl("result", ty))
        declarations.append(FunDecl(
            stub_name, [], params, results, [], [],
            [Annotation("PythonName", sig.name)]))
        report.generated += 1
    stub = StubFile(module_name, declarations)
    return format_stub_file(stub), report
