"""Symbol table built from loaded stub files, plus stub validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import Diagnostic, error
from ..syntax.nodes import (
    ClassDecl, EnumDecl, FunDecl, FunctionTypeRef, NamedType, PAlt, PAny,
    POpt, PPlus, PSeq, PStar, PToken, RefinedTypeRef, StubFile, UnionTypeRef,
    has_annotation,
)
from .consteval import NOT_CONSTANT, eval_const
from .types import (
    ANY, NOTHING, BUILTIN_CLASS_NAMES, ClassHierarchy, ClassType, EnumType,
    FunctionType, RefinedType, TypeVar, is_subtype, make_union,
)


@dataclass
class SymbolTable:
    functions: dict = field(default_factory=dict)  # name -> FunDecl
    classes: dict = field(default_factory=dict)    # name -> ClassDecl
    enums: dict = field(default_factory=dict)      # name -> EnumDecl
    module_of: dict = field(default_factory=dict)  # decl name -> python module
    hierarchy: ClassHierarchy = field(default_factory=ClassHierarchy)

    # --- construction ---

    @classmethod
    def from_stub_files(cls, stub_files: list[StubFile]):
        table = cls()
        diags: list[Diagnostic] = []
        for stub in stub_files:
            for decl in stub.declarations:
                registry = (table.functions if isinstance(decl, FunDecl)
                            else table.classes if isinstance(decl, ClassDecl)
                            else table.enums)
                if (decl.name in table.functions or decl.name in table.classes
                        or decl.name in table.enums):
                    diags.append(error(
                        "E004", f"duplicate declaration name '{decl.name}'", decl.span))
                    continue
                registry[decl.name] = decl
                table.module_of[decl.name] = stub.python_module
        for c in table.classes.values():
            tp_names = [tp.name for tp in c.type_params]
            sup = None
            if c.super_type is not None:
                sup = table.type_from_ref(c.super_type, set(tp_names), diags)
            table.hierarchy.add(c.name, tp_names, sup)
        diags.extend(table.validate())
        return table, diags

    # --- lookups ---

    def lookup_class(self, name):
        return self.classes.get(name)

    def find_method(self, class_name: str, member: str):
        """Resolve `member` on `class_name`, walking the super chain."""
        seen = set()
        name = class_name
        while name is not None and name not in seen:
            seen.add(name)
            cls = self.classes.get(name)
            if cls is None:
                return None, None
            for m in cls.methods:
                if m.name == member:
                    return m, cls
            name = None
            if cls.super_type is not None and isinstance(cls.super_type, NamedType):
                name = cls.super_type.name
        return None, None

    def find_attr(self, class_name: str, member: str):
        seen = set()
        name = class_name
        while name is not None and name not in seen:
            seen.add(name)
            cls = self.classes.get(name)
            if cls is None:
                return None, None
            for a in cls.attributes:
                if a.name == member:
                    return a, cls
            name = None
            if cls.super_type is not None and isinstance(cls.super_type, NamedType):
                name = cls.super_type.name
        return None, None

    def is_tabular(self, class_name: str) -> bool:
        seen = set()
        name = class_name
        while name is not None and name not in seen:
            seen.add(name)
            cls = self.classes.get(name)
            if cls is None:
                return False
            if has_annotation(cls, "Tabular"):
                return True
            name = None
            if cls.super_type is not None and isinstance(cls.super_type, NamedType):
                name = cls.super_type.name
        return False

    def is_tabular_type(self, ty) -> bool:
        return isinstance(ty, ClassType) and self.is_tabular(ty.name)

    def protocol_class_of(self, ty):
        """The ancestor class declaring a protocol, if any."""
        if not isinstance(ty, ClassType):
            return None
        seen = set()
        name = ty.name
        while name is not None and name not in seen:
            seen.add(name)
            cls = self.classes.get(name)
            if cls is None:
                return None
            if cls.protocol is not None:
                return cls
            name = None
            if cls.super_type is not None and isinstance(cls.super_type, NamedType):
                name = cls.super_type.name
        return None

    # --- type reference conversion ---

    def type_from_ref(self, ref, type_var_names=frozenset(), diags=None):
        if isinstance(ref, NamedType):
            if ref.name in type_var_names and not ref.args:
                return TypeVar(ref.name)
            if ref.name == "Any":
                return ANY
            if ref.name == "Nothing":
                return NOTHING
            if ref.name in self.enums:
                return EnumType(ref.name)
            if ref.name in self.classes or ref.name in BUILTIN_CLASS_NAMES:
                args = tuple(self.type_from_ref(a, type_var_names, diags)
                             for a in ref.args)
                return ClassType(ref.name, args)
            if diags is not None:
                diags.append(error(
                    "E010", f"unresolved type name '{ref.name}'", ref.span))
            return ANY
        if isinstance(ref, UnionTypeRef):
            return make_union([self.type_from_ref(m, type_var_names, diags)
                               for m in ref.members])
        if isinstance(ref, FunctionTypeRef):
            return FunctionType(
                tuple(self.type_from_ref(p, type_var_names, diags) for p in ref.params),
                tuple(self.type_from_ref(r, type_var_names, diags) for r in ref.results))
        if isinstance(ref, RefinedTypeRef):
            base = self.type_from_ref(ref.base, type_var_names, diags)
            constraints = tuple((c.op, eval_const(c.value)) for c in ref.constraints)
            return RefinedType(base, constraints)
        raise TypeError(f"unknown type reference {ref!r}")

    def fun_type(self, decl: FunDecl, type_var_names=frozenset()) -> FunctionType:
        tvars = set(type_var_names) | {tp.name for tp in decl.type_params}
        return FunctionType(
            tuple(self.type_from_ref(p.type_ref, tvars) for p in decl.params),
            tuple(self.type_from_ref(r.type_ref, tvars) for r in decl.results))

    # --- validation at stub-load time ---

    def validate(self) -> list[Diagnostic]:
        diags: list[Diagnostic] = []
        for decl in self.functions.values():
            self._validate_fun(decl, frozenset(), diags)
        for cls in self.classes.values():
            tvars = frozenset(tp.name for tp in cls.type_params)
            for m in cls.methods:
                self._validate_fun(m, tvars, diags)
            if cls.protocol is not None:
                method_names = {m.name for m in cls.methods}
                for tok in _protocol_tokens(cls.protocol):
                    if tok.name not in method_names:
                        diags.append(error(
                            "E041",
                            f"protocol token '{tok.name}' is not a method of "
                            f"class {cls.name}", tok.span))
        return diags

    def _validate_fun(self, decl: FunDecl, outer_tvars, diags):
        tvars = set(outer_tvars) | {tp.name for tp in decl.type_params}
        for p in decl.params:
            ty = self.type_from_ref(p.type_ref, tvars, diags)
            if isinstance(ty, RefinedType):
                if not (isinstance(ty.base, ClassType)
                        and ty.base.name in ("Int", "Float", "String")):
                    diags.append(error(
                        "E020",
                        f"refined base type must be Int, Float, or String, "
                        f"got {ty.base}", p.type_ref.span))
                    continue
                for op, value in ty.constraints:
                    if ty.base.name == "String" and op not in ("==", "!="):
                        diags.append(error(
                            "E020",
                            f"string refinements support only == and !=, got {op}",
                            p.type_ref.span))
                if p.default is not None:
                    value = eval_const(p.default)
                    if value is NOT_CONSTANT:
                        diags.append(error(
                            "E021", f"default for '{p.name}' is not constant",
                            p.default.span))
                    else:
                        for op, bound in ty.constraints:
                            if not satisfies(value, op, bound):
                                diags.append(error(
                                    "E022",
                                    f"default {_show(value)} for '{p.name}' "
                                    f"violates it {op} {_show(bound)}",
                                    p.default.span))
        for r in decl.results:
            self.type_from_ref(r.type_ref, tvars, diags)


def satisfies(value, op, bound) -> bool:
    """Does a constant satisfy one comparator-vs-constant constraint?"""
    numeric = lambda v: isinstance(v, (int, float)) and not isinstance(v, bool)
    if op in ("<", "<=", ">", ">="):
        if not (numeric(value) and numeric(bound)):
            return False
        return {"<": value < bound, "<=": value <= bound,
                ">": value > bound, ">=": value >= bound}[op]
    same_kind = isinstance(value, bool) == isinstance(bound, bool)
    if op == "==":
        return same_kind and value == bound
    if op == "!=":
        return not same_kind or value != bound
    return False


def _show(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return f'"{v}"'
    return repr(v) if isinstance(v, float) else str(v)


def _protocol_tokens(regex):
    if isinstance(regex, PToken):
        yield regex
    elif isinstance(regex, (PSeq, PAlt)):
        for item in regex.items:
            yield from _protocol_tokens(item)
    elif isinstance(regex, (PStar, PPlus, POpt)):
        yield from _protocol_tokens(regex.inner)
    elif isinstance(regex, PAny):
        return
