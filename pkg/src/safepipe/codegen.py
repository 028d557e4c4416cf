"""Python code generation for checked pipelines.

Output is deterministic: a header comment, one sorted import block, one
function per pipeline mirroring its statements, and a main guard.  Style
is fixed (4-space indent, single quotes) so golden-file tests are exact.
"""

from __future__ import annotations

import re

from .diagnostics import Diagnostic, error
from .semantics.checker import PipelineAnalysis
from .syntax.nodes import (
    Assignment, BoolLit, Call, ExpressionStatement, FloatLit, IntLit, Lambda,
    ListLit, MemberAccess, Negation, PipelineDecl, Reference, StringLit,
    annotation_value,
)

HEADER = "# Generated by safepipe. Do not edit by hand."


def snake_case(name: str) -> str:
    return re.sub(r"(?<=[a-z0-9])([A-Z])", r"_\1", name).lower()


def python_name(decl) -> str:
    override = annotation_value(decl, "PythonName")
    return override if override is not None else snake_case(decl.name)


def emit_python(pipeline: PipelineDecl, analysis: PipelineAnalysis, symbols):
    """Render one pipeline as Python source; returns (text|None, diags)."""
    gen = _Generator(pipeline, analysis, symbols)
    try:
        return gen.emit(), []
    except _Unresolved as exc:
        return None, [error("E060", str(exc), exc.span)]


class _Unresolved(Exception):
    def __init__(self, message, span):
        super().__init__(message)
        self.span = span


class _Generator:
    def __init__(self, pipeline, analysis, symbols):
        self.pipeline = pipeline
        self.analysis = analysis
        self.symbols = symbols
        self.imports: dict[str, set] = {}  # module -> names
        self.lambda_names: dict[int, str] = {}
        self.lambda_count = 0

    def emit(self) -> str:
        body_lines = []
        for stmt in self.pipeline.body:
            body_lines.extend(self.emit_statement(stmt))
        if not body_lines:
            body_lines = ["pass"]
        lines = [HEADER, ""]
        for module in sorted(self.imports):
            names = ", ".join(sorted(self.imports[module]))
            lines.append(f"from {module} import {names}")
        if self.imports:
            lines.append("")
        lines.append("")
        lines.append(f"def {self.pipeline.name}():")
        lines.extend("    " + l if l else "" for l in body_lines)
        lines.append("")
        lines.append("")
        lines.append("if __name__ == '__main__':")
        lines.append(f"    {self.pipeline.name}()")
        return "\n".join(lines) + "\n"

    def emit_statement(self, stmt) -> list:
        rhs = stmt.rhs if isinstance(stmt, Assignment) else stmt.expr
        lines = self.hoist_lambdas(rhs)
        expr = self.render(rhs)
        if isinstance(stmt, Assignment):
            lines.append(", ".join(stmt.assignees) + " = " + expr)
        else:
            lines.append(expr)
        return lines

    def hoist_lambdas(self, expr) -> list:
        """Nested defs for every lambda in `expr`, emitted before use."""
        lines = []
        for lam in _lambdas_in(expr):
            self.lambda_count += 1
            name = f"_lambda_{self.lambda_count}"
            self.lambda_names[id(lam)] = name
            params = ", ".join(p.name for p in lam.params)
            lines.append(f"def {name}({params}):")
            inner = []
            last_assignment = None
            for s in lam.body:
                inner.extend(self.emit_statement(s))
                if isinstance(s, Assignment):
                    last_assignment = s
            if last_assignment is not None:
                returns = [a for a in last_assignment.assignees if a != "_"]
                if returns:
                    inner.append("return " + ", ".join(returns))
            if not inner:
                inner = ["pass"]
            lines.extend("    " + l for l in inner)
        return lines

    def render(self, expr) -> str:
        if isinstance(expr, IntLit):
            return str(expr.value)
        if isinstance(expr, FloatLit):
            return repr(expr.value)
        if isinstance(expr, StringLit):
            escaped = expr.value.replace("\\", "\\\\").replace("'", "\\'")
            escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
            return f"'{escaped}'"
        if isinstance(expr, BoolLit):
            return "True" if expr.value else "False"
        if isinstance(expr, ListLit):
            return "[" + ", ".join(self.render(e) for e in expr.elements) + "]"
        if isinstance(expr, Negation):
            return "-" + self.render(expr.operand)
        if isinstance(expr, Reference):
            return expr.name
        if isinstance(expr, Lambda):
            return self.lambda_names[id(expr)]
        if isinstance(expr, MemberAccess):
            return f"{self.render(expr.receiver)}.{expr.member}"
        if isinstance(expr, Call):
            return self.render_call(expr)
        raise _Unresolved(f"cannot generate code for {type(expr).__name__}",
                          getattr(expr, "span", None))

    def render_call(self, call: Call) -> str:
        info = self.analysis.calls.get(id(call))
        if info is None or info.kind == "value" and info.decl is None:
            # a plain function-typed value (e.g. a lambda parameter)
            if info is None:
                raise _Unresolved("call was not resolved by the checker",
                                  call.span)
            callee = self.render(call.callee)
        elif info.kind == "function":
            callee = self.bound_name(info.decl)
        elif info.kind == "constructor":
            callee = self.bound_name(info.decl, keep_case=True)
        elif info.kind == "method":
            method = python_name(info.decl)
            callee = f"{self.render(call.callee.receiver)}.{method}"
        else:
            callee = self.render(call.callee)
        args = []
        for arg in call.args:
            value = self.render(arg.value)
            args.append(value if arg.name is None else f"{arg.name}={value}")
        return f"{callee}({', '.join(args)})"

    def bound_name(self, decl, keep_case=False) -> str:
        override = annotation_value(decl, "PythonName")
        name = override if override is not None else (
            decl.name if keep_case else snake_case(decl.name))
        module = self.symbols.module_of.get(decl.name)
        if module:
            self.imports.setdefault(module, set()).add(name)
        return name


def _lambdas_in(expr):
    if isinstance(expr, Lambda):
        yield expr
        return  # inner lambdas are hoisted inside the def body
    if isinstance(expr, Call):
        yield from _lambdas_in(expr.callee)
        for arg in expr.args:
            yield from _lambdas_in(arg.value)
    elif isinstance(expr, MemberAccess):
        yield from _lambdas_in(expr.receiver)
    elif isinstance(expr, ListLit):
        for e in expr.elements:
            yield from _lambdas_in(e)
    elif isinstance(expr, Negation):
        yield from _lambdas_in(expr.operand)
