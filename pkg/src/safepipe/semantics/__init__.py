from .types import (
    ANY, BOOLEAN, FLOAT, INT, NOTHING, STRING, ClassType, EnumType,
    FunctionType, RefinedType, TypeVar, UnionType, is_subtype, list_of,
    make_union, substitute,
)
from .consteval import NOT_CONSTANT, eval_const, is_constant
from .symbols import SymbolTable, satisfies
from .checker import CallInfo, PipelineAnalysis, VarInfo, check_pipeline

__all__ = [
    "ANY", "BOOLEAN", "FLOAT", "INT", "NOTHING", "STRING",
    "ClassType", "EnumType", "FunctionType", "RefinedType", "TypeVar",
    "UnionType", "is_subtype", "list_of", "make_union", "substitute",
    "NOT_CONSTANT", "eval_const", "is_constant",
    "SymbolTable", "satisfies",
    "CallInfo", "PipelineAnalysis", "VarInfo", "check_pipeline",
]
