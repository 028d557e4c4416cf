"""Name resolution and type checking for pipelines.

One walk does both: references are bound as expressions are inferred, so
the checker can keep going (with Any) after a resolution error instead of
cascading.  The result is a PipelineAnalysis consumed by the schema,
protocol, graph, and codegen stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import Diagnostic, error
from ..syntax.nodes import (
    Assignment, BoolLit, Call, ExpressionStatement, FloatLit, IntLit, Lambda,
    ListLit, MemberAccess, Negation, PipelineDecl, Reference, StringLit,
)
from .consteval import NOT_CONSTANT, eval_const
from .symbols import SymbolTable, satisfies, _show
from .types import (
    ANY, BOOLEAN, FLOAT, INT, NOTHING, STRING, ClassType, EnumType,
    FunctionType, RefinedType, TypeVar, is_subtype, list_of, make_union,
    substitute,
)


@dataclass
class VarInfo:
    type: object
    stmt_index: int
    expr: object  # defining expression (the whole RHS)


@dataclass
class CallInfo:
    kind: str  # function | method | constructor | value
    decl: object = None  # FunDecl for function/method, ClassDecl for constructor
    owner_class: str = None
    receiver: object = None  # receiver expression for methods
    arg_bindings: list = field(default_factory=list)  # (ParamDecl, Expression)
    type_binding: dict = field(default_factory=dict)
    result_types: list = field(default_factory=list)


@dataclass
class PipelineAnalysis:
    pipeline: PipelineDecl
    env: dict = field(default_factory=dict)  # var name -> VarInfo
    const_env: dict = field(default_factory=dict)  # var name -> defining expr
    calls: dict = field(default_factory=dict)  # id(Call) -> CallInfo
    diagnostics: list = field(default_factory=list)


def check_pipeline(pipeline: PipelineDecl, symbols: SymbolTable) -> PipelineAnalysis:
    return _Checker(symbols).run(pipeline)


class _Checker:
    def __init__(self, symbols: SymbolTable):
        self.symbols = symbols
        self.analysis = None
        self.scopes = []  # innermost-last lambda scopes: list[dict name -> VarInfo]

    def run(self, pipeline: PipelineDecl) -> PipelineAnalysis:
        self.analysis = PipelineAnalysis(pipeline)
        for index, stmt in enumerate(pipeline.body):
            self.check_statement(stmt, index, self.analysis.env)
        return self.analysis

    def diag(self, code, message, span):
        self.analysis.diagnostics.append(error(code, message, span))

    # --- statements ---

    def check_statement(self, stmt, index, env):
        if isinstance(stmt, ExpressionStatement):
            self.infer_values(stmt.expr)
            return
        assert isinstance(stmt, Assignment)
        results = self.infer_values(stmt.rhs)
        if len(stmt.assignees) != len(results):
            self.diag("E051",
                      f"{len(stmt.assignees)} assignee(s) for "
                      f"{len(results)} result(s)", stmt.span)
            results = results + [ANY] * max(0, len(stmt.assignees) - len(results))
        for name, ty in zip(stmt.assignees, results):
            if name == "_":
                continue
            if name in env:
                self.diag("E011", f"variable '{name}' is already assigned",
                          stmt.span)
                continue
            env[name] = VarInfo(ty, index, stmt.rhs)
            if env is self.analysis.env and len(stmt.assignees) == 1:
                self.analysis.const_env[name] = stmt.rhs

    # --- inference ---

    def infer_values(self, expr) -> list:
        """Types produced by `expr` in statement-RHS position (0..n)."""
        if isinstance(expr, Call):
            info = self.check_call(expr)
            return list(info.result_types)
        return [self.infer(expr)]

    def infer(self, expr):
        """Type of `expr` in single-value position."""
        if isinstance(expr, IntLit):
            return INT
        if isinstance(expr, FloatLit):
            return FLOAT
        if isinstance(expr, StringLit):
            return STRING
        if isinstance(expr, BoolLit):
            return BOOLEAN
        if isinstance(expr, Negation):
            ty = self.infer(expr.operand)
            if ty not in (INT, FLOAT, ANY):
                self.diag("E020", f"cannot negate a value of type {ty}", expr.span)
                return ANY
            return ty
        if isinstance(expr, ListLit):
            if not expr.elements:
                return list_of(NOTHING)
            return list_of(make_union([self.infer(e) for e in expr.elements]))
        if isinstance(expr, Reference):
            return self.infer_reference(expr)
        if isinstance(expr, MemberAccess):
            return self.infer_member(expr)
        if isinstance(expr, Call):
            info = self.check_call(expr)
            if len(info.result_types) != 1:
                self.diag("E051",
                          f"call produces {len(info.result_types)} results "
                          f"where exactly one value is needed", expr.span)
                return ANY
            return info.result_types[0]
        if isinstance(expr, Lambda):
            return self.check_lambda(expr, expected=None)
        raise TypeError(f"unknown expression {expr!r}")

    def lookup_var(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return self.analysis.env.get(name)

    def infer_reference(self, expr: Reference):
        info = self.lookup_var(expr.name)
        if info is not None:
            return info.type
        if expr.name in self.symbols.functions:
            return self.symbols.fun_type(self.symbols.functions[expr.name])
        if expr.name in self.symbols.classes:
            cls = self.symbols.classes[expr.name]
            return FunctionType((), (ClassType(cls.name),))
        if expr.name in self.symbols.enums:
            return EnumType(expr.name)
        self.diag("E010", f"unresolved reference '{expr.name}'", expr.span)
        return ANY

    def infer_member(self, expr: MemberAccess):
        if (isinstance(expr.receiver, Reference)
                and self.lookup_var(expr.receiver.name) is None
                and expr.receiver.name in self.symbols.enums):
            enum = self.symbols.enums[expr.receiver.name]
            if expr.member in enum.variants:
                return EnumType(enum.name)
            self.diag("E012",
                      f"enum {enum.name} has no variant '{expr.member}'", expr.span)
            return ANY
        receiver_ty = self.infer(expr.receiver)
        if receiver_ty is ANY:
            return ANY
        if isinstance(receiver_ty, ClassType):
            attr, _ = self.symbols.find_attr(receiver_ty.name, expr.member)
            if attr is not None:
                cls = self.symbols.classes[receiver_ty.name]
                tvars = {tp.name for tp in cls.type_params}
                ty = self.symbols.type_from_ref(attr.type_ref, tvars)
                binding = dict(zip(sorted(tvars), ()))  # populated below if generic
                if cls.type_params and receiver_ty.args:
                    binding = {tp.name: arg for tp, arg in
                               zip(cls.type_params, receiver_ty.args)}
                return substitute(ty, binding)
            method, owner = self.symbols.find_method(receiver_ty.name, expr.member)
            if method is not None:
                tvars = {tp.name for tp in owner.type_params}
                return self.symbols.fun_type(method, tvars)
        self.diag("E012",
                  f"type {receiver_ty} has no member '{expr.member}'", expr.span)
        return ANY

    # --- lambdas ---

    def check_lambda(self, expr: Lambda, expected):
        scope = {}
        param_types = []
        for i, p in enumerate(expr.params):
            if p.type_ref is not None:
                ty = self.symbols.type_from_ref(p.type_ref, frozenset(),
                                                self.analysis.diagnostics)
            elif (isinstance(expected, FunctionType)
                    and i < len(expected.params)):
                ty = expected.params[i]
            else:
                ty = ANY
            param_types.append(ty)
            scope[p.name] = VarInfo(ty, -1, None)
        self.scopes.append(scope)
        try:
            last_assignment = None
            for index, stmt in enumerate(expr.body):
                self.check_statement(stmt, index, scope)
                if isinstance(stmt, Assignment):
                    last_assignment = stmt
            results = []
            if last_assignment is not None:
                for name in last_assignment.assignees:
                    if name == "_":
                        results.append(ANY)
                    else:
                        results.append(scope[name].type if name in scope else ANY)
        finally:
            self.scopes.pop()
        return FunctionType(tuple(param_types), tuple(results))

    # --- calls ---

    def check_call(self, call: Call) -> CallInfo:
        callee = call.callee
        info = None
        if isinstance(callee, Reference) and self.lookup_var(callee.name) is None:
            name = callee.name
            if name in self.symbols.functions:
                decl = self.symbols.functions[name]
                info = CallInfo("function", decl)
                self.bind_and_check(call, decl, info, class_tvars=frozenset())
            elif name in self.symbols.classes:
                cls = self.symbols.classes[name]
                info = CallInfo("constructor", cls)
                if call.args:
                    self.diag("E050",
                              f"constructor {name}() takes no arguments", call.span)
                info.result_types = [ClassType(cls.name)]
            elif name in self.symbols.enums:
                self.diag("E020", f"enum {name} is not callable", call.span)
                info = CallInfo("value", result_types=[ANY])
            else:
                self.diag("E010", f"unresolved reference '{name}'", callee.span)
                info = CallInfo("value", result_types=[ANY])
        elif isinstance(callee, MemberAccess):
            receiver_ty = self.infer(callee.receiver)
            if isinstance(receiver_ty, ClassType):
                method, owner = self.symbols.find_method(receiver_ty.name,
                                                         callee.member)
                if method is not None:
                    info = CallInfo("method", method, owner_class=owner.name,
                                    receiver=callee.receiver)
                    class_binding = {}
                    if owner.type_params and receiver_ty.args:
                        class_binding = {tp.name: arg for tp, arg in
                                         zip(owner.type_params, receiver_ty.args)}
                    self.bind_and_check(
                        call, method, info,
                        class_tvars=frozenset(tp.name for tp in owner.type_params),
                        preset_binding=class_binding)
                else:
                    if receiver_ty is not ANY:
                        self.diag("E012",
                                  f"type {receiver_ty} has no member "
                                  f"'{callee.member}'", callee.span)
                    info = CallInfo("value", result_types=[ANY])
            else:
                if receiver_ty is not ANY:
                    self.diag("E012",
                              f"type {receiver_ty} has no member '{callee.member}'",
                              callee.span)
                info = CallInfo("value", result_types=[ANY])
        else:
            callee_ty = self.infer(callee)
            info = CallInfo("value")
            if isinstance(callee_ty, FunctionType):
                self.check_value_call(call, callee_ty, info)
            else:
                if callee_ty is not ANY:
                    self.diag("E020", f"type {callee_ty} is not callable", call.span)
                info.result_types = [ANY]
        self.analysis.calls[id(call)] = info
        return info

    def check_value_call(self, call: Call, fn: FunctionType, info: CallInfo):
        for arg in call.args:
            if arg.name is not None:
                self.diag("E050",
                          "named arguments cannot be used with a function value",
                          arg.span)
        if len(call.args) != len(fn.params):
            self.diag("E050",
                      f"expected {len(fn.params)} argument(s), got {len(call.args)}",
                      call.span)
        for arg, param_ty in zip(call.args, fn.params):
            self.check_arg(arg, param_ty, {}, call)
        info.result_types = list(fn.results)

    def bind_and_check(self, call: Call, decl, info: CallInfo, class_tvars,
                       preset_binding=None):
        tvars = set(class_tvars) | {tp.name for tp in decl.type_params}
        params = decl.params
        by_name = {p.name: i for i, p in enumerate(params)}
        bound: list = [None] * len(params)
        ok = True
        positional_done = False
        for arg in call.args:
            if arg.name is None:
                idx = next((i for i, b in enumerate(bound) if b is None), None)
                if positional_done or idx is None or idx >= len(params):
                    self.diag("E050",
                              f"too many arguments for {decl.name} "
                              f"(expected {len(params)})", arg.span)
                    ok = False
                    continue
                bound[idx] = arg
            else:
                positional_done = True
                if arg.name not in by_name:
                    self.diag("E050",
                              f"{decl.name} has no parameter '{arg.name}'", arg.span)
                    ok = False
                    continue
                idx = by_name[arg.name]
                if bound[idx] is not None:
                    self.diag("E050",
                              f"parameter '{arg.name}' bound twice", arg.span)
                    ok = False
                    continue
                bound[idx] = arg
        if ok:  # missing-argument reports would only restate a binding error
            for p, b in zip(params, bound):
                if b is None and p.default is None:
                    self.diag("E050",
                              f"missing argument for parameter '{p.name}' of "
                              f"{decl.name}", call.span)
        binding = dict(preset_binding or {})
        for p, b in zip(params, bound):
            if b is None:
                continue
            info.arg_bindings.append((p, b.value))
            param_ty = self.symbols.type_from_ref(p.type_ref, tvars)
            self.check_arg(b, param_ty, binding, call, decl)
        # type-parameter bounds
        for tp in decl.type_params:
            if tp.bound is not None and tp.name in binding:
                bound_ty = self.symbols.type_from_ref(tp.bound, tvars)
                if not is_subtype(binding[tp.name], substitute(bound_ty, binding),
                                  self.symbols.hierarchy):
                    self.diag("E052",
                              f"type argument {binding[tp.name]} for {tp.name} "
                              f"is not within bound {bound_ty}", call.span)
        info.type_binding = binding
        result_tvars = tvars
        info.result_types = [
            substitute(self.symbols.type_from_ref(r.type_ref, result_tvars), binding)
            for r in decl.results
        ]

    def check_arg(self, arg, param_ty, binding, call, decl=None):
        if isinstance(param_ty, RefinedType):
            value = eval_const(arg.value, self.analysis.const_env)
            if value is NOT_CONSTANT:
                self.diag("E021",
                          "argument for a refined parameter must be a "
                          "compile-time constant", arg.value.span)
                return
            arg_ty = self.infer(arg.value)
            if arg_ty is not ANY and not is_subtype(
                    arg_ty, param_ty.base, self.symbols.hierarchy):
                self.diag("E020",
                          f"expected {param_ty.base}, got {arg_ty}", arg.value.span)
                return
            for op, bound_value in param_ty.constraints:
                if not satisfies(value, op, bound_value):
                    self.diag("E022",
                              f"{_show(value)} violates it {op} {_show(bound_value)}",
                              arg.value.span)
            return
        if isinstance(arg.value, Lambda):
            expected = param_ty if isinstance(param_ty, FunctionType) else None
            lam_ty = self.check_lambda(arg.value, expected)
            if expected is not None and not is_subtype(
                    lam_ty, substitute(param_ty, binding), self.symbols.hierarchy):
                self.diag("E020",
                          f"expected {param_ty}, got {lam_ty}", arg.value.span)
            return
        arg_ty = self.infer(arg.value)
        conflict = self.unify(param_ty, arg_ty, binding)
        if conflict:
            self.diag("E052",
                      f"cannot unify type variable binding at argument of type "
                      f"{arg_ty} against {param_ty}", arg.value.span)
            return
        if arg_ty is ANY:
            return  # dynamic (or error-recovery) values are accepted anywhere
        resolved = substitute(param_ty, binding)
        if not is_subtype(arg_ty, resolved, self.symbols.hierarchy):
            self.diag("E020", f"expected {resolved}, got {arg_ty}", arg.value.span)

    def unify(self, expected, actual, binding) -> bool:
        """First-match type-argument unification; returns True on conflict."""
        if isinstance(expected, TypeVar):
            if expected.name in binding:
                if not is_subtype(actual, binding[expected.name],
                                  self.symbols.hierarchy):
                    return True
                return False
            binding[expected.name] = actual
            return False
        if isinstance(expected, ClassType) and isinstance(actual, ClassType):
            if expected.name == actual.name and len(expected.args) == len(actual.args):
                return any(self.unify(e, a, binding)
                           for e, a in zip(expected.args, actual.args))
            return False
        if isinstance(expected, FunctionType) and isinstance(actual, FunctionType):
            conflict = False
            for e, a in zip(expected.params, actual.params):
                conflict |= self.unify(e, a, binding)
            for e, a in zip(expected.results, actual.results):
                conflict |= self.unify(e, a, binding)
            return conflict
        return False
