from .lexer import lex
from .parser import parse_pipeline, parse_stubs
from .formatter import (
    format_program, format_stub_file, format_pipeline, format_statement,
    format_expression, format_type, format_protocol,
)
from .nodes import ast_equal

__all__ = [
    "lex", "parse_pipeline", "parse_stubs", "ast_equal",
    "format_program", "format_stub_file", "format_pipeline",
    "format_statement", "format_expression", "format_type", "format_protocol",
]
