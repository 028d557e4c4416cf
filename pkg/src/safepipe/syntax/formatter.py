"""Canonical source rendering for pipeline and stub ASTs.

The output is deterministic: 4-space indent, one statement per line,
single spaces around `=` and `->`, no trailing whitespace.  Formatting a
well-formed AST never fails, and reparsing the output yields an equal AST.
"""

from __future__ import annotations

from .nodes import (
    Annotation, Argument, Assignment, AttrDecl, BoolLit, Call, ClassDecl,
    Constraint, EnumDecl, ExpressionStatement, FloatLit, FunDecl,
    FunctionTypeRef, IntLit, Lambda, ListLit, MemberAccess, NamedType,
    Negation, PAlt, PAny, POpt, PPlus, PSeq, PStar, PToken, PipelineDecl,
    ProgramAst, RefinedTypeRef, Reference, SchemaExprDecl,
    SchemaRequirementDecl, StringLit, StubFile, UnionTypeRef,
)

INDENT = "    "

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def format_string(value: str) -> str:
    return '"' + "".join(_STRING_ESCAPES.get(c, c) for c in value) + '"'


def format_expression(expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, FloatLit):
        return repr(expr.value)
    if isinstance(expr, StringLit):
        return format_string(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, ListLit):
        return "[" + ", ".join(format_expression(e) for e in expr.elements) + "]"
    if isinstance(expr, Reference):
        return expr.name
    if isinstance(expr, MemberAccess):
        return f"{format_expression(expr.receiver)}.{expr.member}"
    if isinstance(expr, Call):
        args = ", ".join(format_argument(a) for a in expr.args)
        return f"{format_expression(expr.callee)}({args})"
    if isinstance(expr, Negation):
        return f"-{format_expression(expr.operand)}"
    if isinstance(expr, Lambda):
        params = ", ".join(
            p.name if p.type_ref is None else f"{p.name}: {format_type(p.type_ref)}"
            for p in expr.params
        )
        if not expr.body:
            return f"({params}) -> {{}}"
        body = "; ".join(format_statement(s) for s in expr.body)
        return f"({params}) -> {{ {body} }}"
    raise TypeError(f"unknown expression node {expr!r}")


def format_argument(arg: Argument) -> str:
    if arg.name is None:
        return format_expression(arg.value)
    return f"{arg.name} = {format_expression(arg.value)}"


def format_statement(stmt) -> str:
    if isinstance(stmt, Assignment):
        return ", ".join(stmt.assignees) + " = " + format_expression(stmt.rhs)
    if isinstance(stmt, ExpressionStatement):
        return format_expression(stmt.expr)
    raise TypeError(f"unknown statement node {stmt!r}")


def format_type(ty) -> str:
    if isinstance(ty, NamedType):
        if ty.args:
            return ty.name + "<" + ", ".join(format_type(a) for a in ty.args) + ">"
        return ty.name
    if isinstance(ty, UnionTypeRef):
        return "union<" + ", ".join(format_type(m) for m in ty.members) + ">"
    if isinstance(ty, FunctionTypeRef):
        params = ", ".join(format_type(p) for p in ty.params)
        results = ", ".join(format_type(r) for r in ty.results)
        return f"({params}) -> ({results})"
    if isinstance(ty, RefinedTypeRef):
        constraints = ", ".join(format_constraint(c) for c in ty.constraints)
        return f"{format_type(ty.base)} where {{{constraints}}}"
    raise TypeError(f"unknown type node {ty!r}")


def format_constraint(c: Constraint) -> str:
    return f"it {c.op} {format_expression(c.value)}"


def format_pipeline(decl: PipelineDecl) -> str:
    if not decl.body:
        return f"pipeline {decl.name} {{}}\n"
    lines = [f"pipeline {decl.name} {{"]
    for stmt in decl.body:
        lines.append(INDENT + format_statement(stmt))
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- stub declarations -----------------------------------------------------


def format_protocol(regex, prec=0) -> str:
    # precedence: 0 = alternation, 1 = sequence, 2 = quantified atom
    if isinstance(regex, PToken):
        return regex.name
    if isinstance(regex, PAny):
        return "."
    if isinstance(regex, PStar):
        return format_protocol(regex.inner, 2) + "*"
    if isinstance(regex, PPlus):
        return format_protocol(regex.inner, 2) + "+"
    if isinstance(regex, POpt):
        return format_protocol(regex.inner, 2) + "?"
    if isinstance(regex, PSeq):
        text = " ".join(format_protocol(i, 2) for i in regex.items)
        return f"({text})" if prec >= 2 else text
    if isinstance(regex, PAlt):
        text = " | ".join(format_protocol(i, 1) for i in regex.items)
        return f"({text})" if prec >= 1 else text
    raise TypeError(f"unknown protocol node {regex!r}")


def format_annotation(ann: Annotation) -> str:
    if ann.value is None:
        return f"@{ann.name}"
    return f"@{ann.name}({format_string(ann.value)})"


def format_schema_expr(entry: SchemaExprDecl) -> str:
    if entry.external_param is not None:
        return f"{entry.result} = external({entry.external_param})"
    parts = [entry.base]
    for op in entry.ops:
        args = [_format_name_arg(n) for n in op.names]
        if op.kind == "add":
            parts.append(f".add({args[0]}: {format_type(op.type_ref)})")
        elif op.kind == "retype":
            parts.append(f".retype({args[0]}, {format_type(op.type_ref)})")
        elif op.kind == "rename":
            parts.append(f".rename({args[0]}, {args[1]})")
        else:
            parts.append(f".{op.kind}({args[0]})")
    return f"{entry.result} = " + "".join(parts)


def _format_name_arg(n) -> str:
    return n.value if n.is_param_ref else format_string(n.value)


def format_require(req: SchemaRequirementDecl) -> str:
    text = f"require {req.table_param} has column {_format_name_arg(req.column)}"
    if req.required_type is not None:
        text += f": {format_type(req.required_type)}"
    return text


def format_fun(decl: FunDecl, indent="") -> str:
    lines = []
    for ann in decl.annotations:
        lines.append(indent + format_annotation(ann))
    head = f"fun {decl.name}"
    if decl.type_params:
        parts = []
        for tp in decl.type_params:
            parts.append(tp.name if tp.bound is None
                         else f"{tp.name} sub {format_type(tp.bound)}")
        head += "<" + ", ".join(parts) + ">"
    params = []
    for p in decl.params:
        text = f"{p.name}: {format_type(p.type_ref)}"
        if p.default is not None:
            text += f" = {format_expression(p.default)}"
        params.append(text)
    head += "(" + ", ".join(params) + ")"
    if decl.results:
        results = [f"{r.name}: {format_type(r.type_ref)}" for r in decl.results]
        if len(results) == 1:
            head += f" -> {results[0]}"
        else:
            head += " -> (" + ", ".join(results) + ")"
    if decl.schema_clauses or decl.require_clauses:
        lines.append(indent + head + " {")
        if decl.schema_clauses:
            lines.append(indent + INDENT + "schema {")
            for entry in decl.schema_clauses:
                lines.append(indent + INDENT * 2 + format_schema_expr(entry))
            lines.append(indent + INDENT + "}")
        for req in decl.require_clauses:
            lines.append(indent + INDENT + format_require(req))
        lines.append(indent + "}")
    else:
        lines.append(indent + head)
    return "\n".join(lines)


def format_class(decl: ClassDecl) -> str:
    lines = []
    for ann in decl.annotations:
        lines.append(format_annotation(ann))
    head = f"class {decl.name}"
    if decl.type_params:
        parts = []
        for tp in decl.type_params:
            parts.append(tp.name if tp.bound is None
                         else f"{tp.name} sub {format_type(tp.bound)}")
        head += "<" + ", ".join(parts) + ">"
    if decl.super_type is not None:
        head += f" sub {format_type(decl.super_type)}"
    if not decl.attributes and not decl.methods and decl.protocol is None:
        lines.append(head)
        return "\n".join(lines)
    lines.append(head + " {")
    for attr in decl.attributes:
        lines.append(INDENT + f"attr {attr.name}: {format_type(attr.type_ref)}")
    for method in decl.methods:
        lines.append(format_fun(method, INDENT))
    if decl.protocol is not None:
        text = format_protocol(decl.protocol)
        lines.append(INDENT + ("protocol" if not text else f"protocol {text}"))
    lines.append("}")
    return "\n".join(lines)


def format_enum(decl: EnumDecl) -> str:
    lines = [format_annotation(a) for a in decl.annotations]
    lines.append(f"enum {decl.name} {{ " + ", ".join(decl.variants) + " }")
    return "\n".join(lines)


def format_stub_file(stub: StubFile) -> str:
    blocks = []
    if stub.python_module is not None:
        blocks.append(f"@PythonModule({format_string(stub.python_module)})")
    for decl in stub.declarations:
        if isinstance(decl, FunDecl):
            blocks.append(format_fun(decl))
        elif isinstance(decl, ClassDecl):
            blocks.append(format_class(decl))
        elif isinstance(decl, EnumDecl):
            blocks.append(format_enum(decl))
        else:
            raise TypeError(f"unknown declaration {decl!r}")
    if not blocks:
        return ""
    return "\n\n".join(blocks) + "\n"


def format_program(ast: ProgramAst) -> str:
    blocks = [format_pipeline(p).rstrip("\n") for p in ast.pipelines]
    blocks.extend(format_stub_file(s).rstrip("\n") for s in ast.stub_files)
    blocks = [b for b in blocks if b]
    if not blocks:
        return ""
    return "\n\n".join(blocks) + "\n"


# `format` is the public name used by the rest of the toolchain.
format = format_program
