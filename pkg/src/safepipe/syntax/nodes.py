"""The metamodel: abstract syntax shared by every view and checker.

Nodes compare structurally; spans are excluded from equality so that
reformatting does not change node identity (`a == b` is AST equality).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..diagnostics import SourceSpan


def _span_field():
    return field(default=None, compare=False, repr=False, kw_only=True)


@dataclass
class Node:
    span: Optional[SourceSpan] = _span_field()


# --- expressions -----------------------------------------------------------


@dataclass
class IntLit(Node):
    value: int = 0


@dataclass
class FloatLit(Node):
    value: float = 0.0


@dataclass
class StringLit(Node):
    value: str = ""


@dataclass
class BoolLit(Node):
    value: bool = False


@dataclass
class ListLit(Node):
    elements: list = field(default_factory=list)


@dataclass
class Reference(Node):
    name: str = ""


@dataclass
class MemberAccess(Node):
    receiver: "Expression" = None
    member: str = ""


@dataclass
class Argument(Node):
    name: Optional[str] = None  # None = positional
    value: "Expression" = None


@dataclass
class Call(Node):
    callee: "Expression" = None
    args: list = field(default_factory=list)


@dataclass
class LambdaParam(Node):
    name: str = ""
    type_ref: Optional["TypeRef"] = None


@dataclass
class Lambda(Node):
    params: list = field(default_factory=list)
    body: list = field(default_factory=list)


@dataclass
class Negation(Node):
    operand: "Expression" = None


Expression = Union[
    IntLit, FloatLit, StringLit, BoolLit, ListLit, Reference,
    MemberAccess, Call, Lambda, Negation,
]


# --- statements ------------------------------------------------------------


@dataclass
class Assignment(Node):
    assignees: list = field(default_factory=list)  # identifiers, '_' = discard
    rhs: Expression = None


@dataclass
class ExpressionStatement(Node):
    expr: Expression = None


Statement = Union[Assignment, ExpressionStatement]


@dataclass
class PipelineDecl(Node):
    name: str = ""
    body: list = field(default_factory=list)


# --- type references -------------------------------------------------------


@dataclass
class NamedType(Node):
    name: str = ""
    args: list = field(default_factory=list)


@dataclass
class UnionTypeRef(Node):
    members: list = field(default_factory=list)


@dataclass
class FunctionTypeRef(Node):
    params: list = field(default_factory=list)
    results: list = field(default_factory=list)


@dataclass
class Constraint(Node):
    op: str = "=="  # one of < <= > >= == !=
    value: Expression = None  # literal, possibly negated


@dataclass
class RefinedTypeRef(Node):
    base: "TypeRef" = None
    constraints: list = field(default_factory=list)


TypeRef = Union[NamedType, UnionTypeRef, FunctionTypeRef, RefinedTypeRef]


# --- stub declarations -----------------------------------------------------


@dataclass
class Annotation(Node):
    name: str = ""
    value: Optional[str] = None


@dataclass
class NameArg(Node):
    """A column-name argument: a string literal or a parameter reference."""

    value: str = ""
    is_param_ref: bool = False


@dataclass
class EffectOp(Node):
    kind: str = ""  # add | remove | rename | retype | keep | drop
    names: list = field(default_factory=list)  # NameArgs
    type_ref: Optional[TypeRef] = None  # for add / retype


@dataclass
class SchemaExprDecl(Node):
    """One `result = base.op().op()` or `result = external(param)` line."""

    result: str = ""
    base: Optional[str] = None  # parameter (or `self`) whose schema we copy
    external_param: Optional[str] = None
    ops: list = field(default_factory=list)


@dataclass
class SchemaRequirementDecl(Node):
    table_param: str = ""
    column: NameArg = None
    required_type: Optional[TypeRef] = None


@dataclass
class TypeParamDecl(Node):
    name: str = ""
    bound: Optional[TypeRef] = None


@dataclass
class ParamDecl(Node):
    name: str = ""
    type_ref: TypeRef = None
    default: Optional[Expression] = None


@dataclass
class ResultDecl(Node):
    name: str = ""
    type_ref: TypeRef = None


@dataclass
class FunDecl(Node):
    name: str = ""
    type_params: list = field(default_factory=list)
    params: list = field(default_factory=list)
    results: list = field(default_factory=list)
    schema_clauses: list = field(default_factory=list)
    require_clauses: list = field(default_factory=list)
    annotations: list = field(default_factory=list)


@dataclass
class AttrDecl(Node):
    name: str = ""
    type_ref: TypeRef = None


# protocol regular expressions
@dataclass
class PToken(Node):
    name: str = ""


@dataclass
class PSeq(Node):
    items: list = field(default_factory=list)


@dataclass
class PAlt(Node):
    items: list = field(default_factory=list)


@dataclass
class PStar(Node):
    inner: "ProtocolRegex" = None


@dataclass
class PPlus(Node):
    inner: "ProtocolRegex" = None


@dataclass
class POpt(Node):
    inner: "ProtocolRegex" = None


@dataclass
class PAny(Node):
    pass


ProtocolRegex = Union[PToken, PSeq, PAlt, PStar, PPlus, POpt, PAny]


@dataclass
class ClassDecl(Node):
    name: str = ""
    type_params: list = field(default_factory=list)
    super_type: Optional[TypeRef] = None
    attributes: list = field(default_factory=list)
    methods: list = field(default_factory=list)
    protocol: Optional[ProtocolRegex] = None
    annotations: list = field(default_factory=list)


@dataclass
class EnumDecl(Node):
    name: str = ""
    variants: list = field(default_factory=list)
    annotations: list = field(default_factory=list)


@dataclass
class StubFile(Node):
    python_module: Optional[str] = None
    declarations: list = field(default_factory=list)


@dataclass
class ProgramAst(Node):
    pipelines: list = field(default_factory=list)
    stub_files: list = field(default_factory=list)


def ast_equal(a, b) -> bool:
    """Structural equality ignoring source spans."""
    return a == b


def has_annotation(decl, name: str) -> bool:
    return any(a.name == name for a in decl.annotations)


def annotation_value(decl, name: str):
    for a in decl.annotations:
        if a.name == name:
            return a.value
    return None
