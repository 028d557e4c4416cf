"""Dataset schemas: CSV inference, symbolic schema effects, and the two
static schema checks (column exists / column has type).
"""

from __future__ import annotations

import csv
import enum
import os
import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, SourceSpan, error, warning
from .semantics.consteval import NOT_CONSTANT, eval_const
from .syntax.nodes import Assignment, NamedType, Reference

SAMPLE_ROWS = 1000  # inference scans at most this many data rows


class ColumnType(enum.Enum):
    INT = "Int"
    FLOAT = "Float"
    BOOL = "Boolean"
    STRING = "String"

    def __str__(self):
        return self.value


def widens_to(a: ColumnType, b: ColumnType) -> bool:
    if a == b:
        return True
    return a == ColumnType.INT and b == ColumnType.FLOAT


@dataclass(frozen=True)
class Schema:
    columns: tuple = ()  # ordered (name, ColumnType) pairs

    def __post_init__(self):
        names = [n for n, _ in self.columns]
        assert len(names) == len(set(names)), "duplicate column names"

    def names(self):
        return [n for n, _ in self.columns]

    def get(self, name):
        for n, t in self.columns:
            if n == name:
                return t
        return None

    def __str__(self):
        return "{" + ", ".join(f"{n}: {t}" for n, t in self.columns) + "}"

    def to_json(self):
        return [{"name": n, "type": t.value} for n, t in self.columns]


class UnknownSchema:
    """Marker for tabular values whose schema cannot be tracked."""

    def __repr__(self):
        return "UNKNOWN_SCHEMA"


UNKNOWN = UnknownSchema()


# --- effect algebra --------------------------------------------------------


@dataclass(frozen=True)
class Add:
    name: str
    type: ColumnType


@dataclass(frozen=True)
class Remove:
    name: str


@dataclass(frozen=True)
class Rename:
    old: str
    new: str


@dataclass(frozen=True)
class Retype:
    name: str
    type: ColumnType


@dataclass(frozen=True)
class Keep:
    names: tuple


@dataclass(frozen=True)
class Drop:
    names: tuple


SchemaEffect = Add | Remove | Rename | Retype | Keep | Drop


class EffectError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def apply_effect(schema: Schema, effect: SchemaEffect) -> Schema:
    cols = list(schema.columns)
    names = schema.names()
    if isinstance(effect, Add):
        if effect.name in names:
            raise EffectError("E036", f"column '{effect.name}' already exists")
        return Schema(tuple(cols + [(effect.name, effect.type)]))
    if isinstance(effect, Remove):
        if effect.name not in names:
            raise EffectError("E030", f"column '{effect.name}' does not exist")
        return Schema(tuple(c for c in cols if c[0] != effect.name))
    if isinstance(effect, Rename):
        if effect.old not in names:
            raise EffectError("E030", f"column '{effect.old}' does not exist")
        if effect.new in names and effect.new != effect.old:
            raise EffectError("E036", f"column '{effect.new}' already exists")
        return Schema(tuple((effect.new if n == effect.old else n, t)
                            for n, t in cols))
    if isinstance(effect, Retype):
        if effect.name not in names:
            raise EffectError("E030", f"column '{effect.name}' does not exist")
        return Schema(tuple((n, effect.type if n == effect.name else t)
                            for n, t in cols))
    if isinstance(effect, Keep):
        for n in effect.names:
            if n not in names:
                raise EffectError("E030", f"column '{n}' does not exist")
        kept = set(effect.names)
        return Schema(tuple(c for c in cols if c[0] in kept))
    if isinstance(effect, Drop):
        for n in effect.names:
            if n not in names:
                raise EffectError("E030", f"column '{n}' does not exist")
        dropped = set(effect.names)
        return Schema(tuple(c for c in cols if c[0] not in dropped))
    raise TypeError(f"unknown effect {effect!r}")


def apply_effects(schema: Schema, effects) -> Schema:
    """Apply a left-to-right effect sequence; raises EffectError."""
    for effect in effects:
        schema = apply_effect(schema, effect)
    return schema


# --- CSV inference ---------------------------------------------------------


_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _is_int(cell: str) -> bool:
    return _INT_RE.match(cell.strip()) is not None


def _is_float(cell: str) -> bool:
    return _FLOAT_RE.match(cell.strip()) is not None


_BOOL_CELLS = {"true", "false", "True", "False"}


def infer_csv_schema(path: str, span: SourceSpan = None):
    """Infer a Schema from a CSV file; returns (Schema|None, diagnostics)."""
    span = span or SourceSpan(str(path), 1, 1, 1, 1)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            rows = []
            for i, row in enumerate(reader):
                rows.append(row)
                if i > SAMPLE_ROWS:
                    break
    except OSError as exc:
        return None, [error("E032", f"cannot read data file {path}: {exc}", span)]
    if not rows or rows == [[]]:
        return None, [error("E032", f"data file {path} is empty", span)]
    header = rows[0]
    if len(header) != len(set(header)):
        dupes = sorted({h for h in header if header.count(h) > 1})
        return None, [error(
            "E033", f"duplicate header name(s): {', '.join(dupes)}", span)]
    diags = []
    for i, row in enumerate(rows[1 : SAMPLE_ROWS + 1], start=2):
        if len(row) != len(header):
            diags.append(error(
                "E034",
                f"row {i} has {len(row)} cells, header has {len(header)}", span))
    if diags:
        return None, diags
    types = []
    for col in range(len(header)):
        cells = [row[col] for row in rows[1 : SAMPLE_ROWS + 1] if row[col] != ""]
        if not cells:
            types.append(ColumnType.STRING)
        elif all(_is_int(c) for c in cells):
            types.append(ColumnType.INT)
        elif all(_is_float(c) for c in cells):
            types.append(ColumnType.FLOAT)
        elif all(c.strip() in _BOOL_CELLS for c in cells):
            types.append(ColumnType.BOOL)
        else:
            types.append(ColumnType.STRING)
    return Schema(tuple(zip(header, types))), []


class CsvSchemaCache:
    """Per-session cache keyed by (path, mtime)."""

    def __init__(self):
        self._cache = {}

    def infer(self, path, span=None):
        try:
            mtime = os.stat(path).st_mtime_ns
        except OSError:
            mtime = None
        key = (str(path), mtime)
        if key not in self._cache:
            self._cache[key] = infer_csv_schema(path, span)
        return self._cache[key]


# --- resolving declared effects against a call site ------------------------


def column_type_from_ref(type_ref) -> ColumnType | None:
    if isinstance(type_ref, NamedType):
        try:
            return ColumnType(type_ref.name)
        except ValueError:
            return None
    return None


def _resolve_name_arg(name_arg, const_args, span, diags):
    """A nameArg is a string literal or a constant-valued parameter."""
    if not name_arg.is_param_ref:
        return [name_arg.value]
    value = const_args.get(name_arg.value, NOT_CONSTANT)
    if value is NOT_CONSTANT:
        diags.append(error(
            "E035",
            f"schema-relevant argument '{name_arg.value}' is not a "
            "compile-time constant", span))
        return None
    if isinstance(value, str):
        return [value]
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return value
    diags.append(error(
        "E035",
        f"schema-relevant argument '{name_arg.value}' must be a string or "
        "list of strings", span))
    return None


def resolve_effects(ops, const_args, span, diags):
    """Turn parsed effect ops into concrete SchemaEffects; None on failure."""
    effects = []
    for op in ops:
        names = []
        for name_arg in op.names:
            resolved = _resolve_name_arg(name_arg, const_args, span, diags)
            if resolved is None:
                return None
            names.append(resolved)
        if op.kind in ("keep", "drop"):
            cls = Keep if op.kind == "keep" else Drop
            effects.append(cls(tuple(names[0])))
            continue
        # remaining ops take single names
        flat = [n for group in names for n in group]
        if op.kind == "add":
            effects.append(Add(flat[0], column_type_from_ref(op.type_ref)))
        elif op.kind == "remove":
            effects.append(Remove(flat[0]))
        elif op.kind == "rename":
            effects.append(Rename(flat[0], flat[1]))
        elif op.kind == "retype":
            effects.append(Retype(flat[0], column_type_from_ref(op.type_ref)))
    return effects


def check_requirements(call_site_schemas, requirements, const_args, span):
    """The two basic schema checks: column exists, column has type."""
    diags = []
    for req in requirements:
        schema = call_site_schemas.get(req.table_param)
        if schema is None or schema is UNKNOWN:
            continue  # unknown schemas degrade to silence, not failure
        names = _resolve_name_arg(req.column, const_args, span, diags)
        if names is None:
            continue
        for name in names:
            actual = schema.get(name)
            if actual is None:
                diags.append(error(
                    "E030", f"column '{name}' does not exist", span))
                continue
            if req.required_type is not None:
                required = column_type_from_ref(req.required_type)
                if required is not None and not widens_to(actual, required):
                    diags.append(error(
                        "E031",
                        f"column '{name}' has type {actual}, required {required}",
                        span))
    return diags


# --- pipeline-wide propagation ---------------------------------------------


def propagate(pipeline, analysis, symbols, datasets, csv_cache=None):
    """Walk statements in order, tracking a Schema per tabular variable.

    `datasets` maps manifest dataset keys to CSV paths.  Returns
    (var -> Schema|UNKNOWN, diagnostics).
    """
    csv_cache = csv_cache or CsvSchemaCache()
    schemas: dict = {}
    diags: list[Diagnostic] = []
    for stmt in pipeline.body:
        expr = stmt.rhs if isinstance(stmt, Assignment) else stmt.expr
        info = analysis.calls.get(id(expr))
        result_schemas = []
        if info is not None and info.kind in ("function", "method"):
            result_schemas = _propagate_call(
                expr, info, analysis, symbols, datasets, csv_cache, schemas, diags)
        if isinstance(stmt, Assignment):
            for i, name in enumerate(stmt.assignees):
                if name == "_" or name not in analysis.env:
                    continue
                var_ty = analysis.env[name].type
                if not symbols.is_tabular_type(var_ty):
                    continue
                if info is None and isinstance(expr, Reference):
                    schemas[name] = schemas.get(expr.name, UNKNOWN)
                    continue
                schemas[name] = (result_schemas[i]
                                 if i < len(result_schemas)
                                 and result_schemas[i] is not None else UNKNOWN)
    return schemas, diags


def _propagate_call(call, info, analysis, symbols, datasets, csv_cache,
                    schemas, diags):
    decl = info.decl
    span = call.span
    const_args = {}
    for p in decl.params:
        if p.default is not None:
            const_args[p.name] = eval_const(p.default)
    for p, arg_expr in info.arg_bindings:
        const_args[p.name] = eval_const(arg_expr, analysis.const_env)

    def schema_of_expr(e):
        if isinstance(e, Reference) and e.name in schemas:
            return schemas[e.name]
        return UNKNOWN

    call_site_schemas = {}
    for p, arg_expr in info.arg_bindings:
        p_ty = symbols.type_from_ref(p.type_ref)
        if symbols.is_tabular_type(p_ty):
            call_site_schemas[p.name] = schema_of_expr(arg_expr)
    if info.kind == "method" and info.receiver is not None:
        call_site_schemas["self"] = schema_of_expr(info.receiver)

    diags.extend(check_requirements(
        call_site_schemas, decl.require_clauses, const_args, span))

    clause_by_result = {c.result: c for c in decl.schema_clauses}
    result_schemas = []
    for r in decl.results:
        r_ty = symbols.type_from_ref(r.type_ref)
        if not symbols.is_tabular_type(r_ty):
            result_schemas.append(None)
            continue
        clause = clause_by_result.get(r.name)
        if clause is None:
            diags.append(warning(
                "W001",
                f"{decl.name} declares no schema effect for result "
                f"'{r.name}'; downstream schema checks are skipped", span))
            result_schemas.append(UNKNOWN)
            continue
        result_schemas.append(_eval_clause(
            clause, const_args, call_site_schemas, datasets, csv_cache,
            span, diags))
    return result_schemas


def _eval_clause(clause, const_args, call_site_schemas, datasets, csv_cache,
                 span, diags):
    if clause.external_param is not None:
        key = const_args.get(clause.external_param, NOT_CONSTANT)
        if key is NOT_CONSTANT or not isinstance(key, str):
            diags.append(error(
                "E035",
                f"dataset key argument '{clause.external_param}' is not a "
                "compile-time string constant", span))
            return UNKNOWN
        if key not in datasets:
            diags.append(error(
                "E037", f"unknown dataset key '{key}'", span))
            return UNKNOWN
        schema, file_diags = csv_cache.infer(datasets[key], span)
        diags.extend(file_diags)
        return schema if schema is not None else UNKNOWN
    base = call_site_schemas.get(clause.base)
    if base is None or base is UNKNOWN:
        return UNKNOWN
    effects = resolve_effects(clause.ops, const_args, span, diags)
    if effects is None:
        return UNKNOWN
    try:
        return apply_effects(base, effects)
    except EffectError as exc:
        diags.append(error(exc.code, str(exc), span))
        return UNKNOWN
