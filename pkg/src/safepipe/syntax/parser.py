"""Recursive-descent parsers for pipeline and stub sources.

Syntax errors become E003 diagnostics; recovery skips to the next
statement boundary (newline or closing brace) so one run reports many
errors.  Parsing is a pure function of the input text.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, SourceSpan, error
from .lexer import lex
from .nodes import (
    Annotation, Argument, Assignment, AttrDecl, BoolLit, Call, ClassDecl,
    Constraint, EffectOp, EnumDecl, ExpressionStatement, FloatLit, FunDecl,
    FunctionTypeRef, IntLit, Lambda, LambdaParam, ListLit, MemberAccess,
    NameArg, NamedType, Negation, PAlt, PAny, POpt, PPlus, PSeq, PStar,
    PToken, ParamDecl, PipelineDecl, ProgramAst, RefinedTypeRef, Reference,
    ResultDecl, SchemaExprDecl, SchemaRequirementDecl, StringLit, StubFile,
    TypeParamDecl, UnionTypeRef,
)
from .tokens import Token, TokenKind as T

_EFFECT_ARITY = {"add": 1, "remove": 1, "rename": 2, "retype": 1, "keep": 1, "drop": 1}

_CMP_TOKENS = {
    T.LT: "<", T.LE: "<=", T.GT: ">", T.GE: ">=", T.EQEQ: "==", T.NE: "!=",
}


class ParseError(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token], diags: list[Diagnostic]):
        self.toks = tokens
        self.pos = 0
        self.diags = diags

    # --- token plumbing ---

    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, kind) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != T.EOF:
            self.pos += 1
        return tok

    def accept(self, kind):
        if self.at(kind):
            return self.advance()
        return None

    def expect(self, kind, what=None) -> Token:
        if self.at(kind):
            return self.advance()
        found = self.peek()
        expected = what or kind.value
        self.diags.append(
            error("E003", f"expected {expected}, found {found.describe()}", found.span)
        )
        raise ParseError()

    def skip_newlines(self):
        while self.at(T.NEWLINE):
            self.advance()

    def span_from(self, start_tok: Token) -> SourceSpan:
        end = self.toks[max(self.pos - 1, 0)].span
        s = start_tok.span
        return SourceSpan(s.file, s.start_line, s.start_col, end.end_line, end.end_col)

    def sync_to_statement_boundary(self):
        """Panic-mode recovery: skip to next newline or closing brace."""
        depth = 0
        while not self.at(T.EOF):
            k = self.peek().kind
            if k == T.NEWLINE and depth == 0:
                self.advance()
                return
            if k in (T.LBRACE, T.LPAREN, T.LBRACKET):
                depth += 1
            elif k == T.RBRACE:
                if depth == 0:
                    return
                depth -= 1
            elif k in (T.RPAREN, T.RBRACKET):
                if depth > 0:
                    depth -= 1
            self.advance()

    def ident_like(self, what="identifier") -> Token:
        # contextual keywords may be used as plain names
        if self.peek().kind in (T.IDENT,):
            return self.advance()
        return self.expect(T.IDENT, what)

    def at_contextual(self, word: str) -> bool:
        return self.at(T.IDENT) and self.peek().text == word

    def expect_contextual(self, word: str):
        if self.at_contextual(word):
            return self.advance()
        found = self.peek()
        self.diags.append(
            error("E003", f"expected '{word}', found {found.describe()}", found.span)
        )
        raise ParseError()

    def expect_type_close(self):
        """Expect `>`; splits `>=` so `List<Int>= x` still parses."""
        if self.at(T.GE):
            tok = self.advance()
            s = tok.span
            eq = Token(T.EQUALS, "=", SourceSpan(s.file, s.start_line, s.start_col + 1,
                                                 s.end_line, s.end_col))
            self.toks.insert(self.pos, eq)
            return
        self.expect(T.GT)

    # --- expressions ---

    def parse_expression(self):
        expr = self.parse_primary()
        while True:
            if self.at(T.DOT):
                start = expr.span
                self.advance()
                member = self.expect(T.IDENT)
                expr = MemberAccess(expr, member.text,
                                    span=_join(start, member.span))
            elif self.at(T.LPAREN):
                self.advance()
                args = self.parse_args()
                close = self.expect(T.RPAREN)
                expr = Call(expr, args, span=_join(expr.span, close.span))
            else:
                return expr

    def parse_args(self):
        self.skip_newlines()
        args = []
        seen_named = set()
        if not self.at(T.RPAREN):
            while True:
                self.skip_newlines()
                arg = self.parse_argument()
                if arg.name is None and seen_named:
                    self.diags.append(error(
                        "E003", "positional argument after named argument", arg.span))
                    raise ParseError()
                if arg.name is not None:
                    if arg.name in seen_named:
                        self.diags.append(error(
                            "E003", f"duplicate named argument '{arg.name}'", arg.span))
                        raise ParseError()
                    seen_named.add(arg.name)
                args.append(arg)
                self.skip_newlines()
                if not self.accept(T.COMMA):
                    break
        self.skip_newlines()
        return args

    def parse_argument(self):
        if self.at(T.IDENT) and self.peek(1).kind == T.EQUALS:
            name_tok = self.advance()
            self.advance()  # '='
            value = self.parse_expression()
            return Argument(name_tok.text, value, span=_join(name_tok.span, value.span))
        value = self.parse_expression()
        return Argument(None, value, span=value.span)

    def parse_primary(self):
        tok = self.peek()
        k = tok.kind
        if k == T.INT:
            self.advance()
            return IntLit(int(tok.text), span=tok.span)
        if k == T.FLOAT:
            self.advance()
            return FloatLit(float(tok.text), span=tok.span)
        if k == T.STRING:
            self.advance()
            return StringLit(tok.text, span=tok.span)
        if k == T.KW_TRUE or k == T.KW_FALSE:
            self.advance()
            return BoolLit(k == T.KW_TRUE, span=tok.span)
        if k == T.LBRACKET:
            return self.parse_list_lit()
        if k == T.IDENT:
            self.advance()
            return Reference(tok.text, span=tok.span)
        if k == T.MINUS:
            self.advance()
            operand = self.parse_primary()
            return Negation(operand, span=_join(tok.span, operand.span))
        if k == T.LPAREN:
            if self.looks_like_lambda():
                return self.parse_lambda()
            self.advance()
            self.skip_newlines()
            inner = self.parse_expression()
            self.skip_newlines()
            self.expect(T.RPAREN)
            return inner
        self.diags.append(
            error("E003", f"expected expression, found {tok.describe()}", tok.span))
        raise ParseError()

    def parse_list_lit(self):
        open_tok = self.expect(T.LBRACKET)
        elements = []
        self.skip_newlines()
        if not self.at(T.RBRACKET):
            while True:
                self.skip_newlines()
                elements.append(self.parse_expression())
                self.skip_newlines()
                if not self.accept(T.COMMA):
                    break
        self.skip_newlines()
        close = self.expect(T.RBRACKET)
        return ListLit(elements, span=_join(open_tok.span, close.span))

    def looks_like_lambda(self) -> bool:
        # at '(': scan to the matching ')' and check for '->'
        assert self.at(T.LPAREN)
        depth = 0
        i = self.pos
        while i < len(self.toks):
            k = self.toks[i].kind
            if k in (T.LPAREN, T.LBRACKET, T.LBRACE):
                depth += 1
            elif k in (T.RPAREN, T.RBRACKET, T.RBRACE):
                depth -= 1
                if depth == 0:
                    j = i + 1
                    while j < len(self.toks) and self.toks[j].kind == T.NEWLINE:
                        j += 1
                    return j < len(self.toks) and self.toks[j].kind == T.ARROW
            elif k == T.EOF:
                return False
            i += 1
        return False

    def parse_lambda(self):
        open_tok = self.expect(T.LPAREN)
        params = []
        self.skip_newlines()
        if not self.at(T.RPAREN):
            while True:
                self.skip_newlines()
                name = self.expect(T.IDENT)
                type_ref = None
                if self.accept(T.COLON):
                    type_ref = self.parse_type()
                params.append(LambdaParam(name.text, type_ref, span=self.span_from(name)))
                self.skip_newlines()
                if not self.accept(T.COMMA):
                    break
        self.skip_newlines()
        self.expect(T.RPAREN)
        self.skip_newlines()
        self.expect(T.ARROW)
        self.skip_newlines()
        self.expect(T.LBRACE)
        body = self.parse_statements()
        close = self.expect(T.RBRACE)
        return Lambda(params, body, span=_join(open_tok.span, close.span))

    # --- statements ---

    def parse_statements(self):
        stmts = []
        while True:
            while self.at(T.NEWLINE) or self.at(T.SEMI):
                self.advance()
            if self.at(T.RBRACE) or self.at(T.EOF):
                return stmts
            try:
                stmts.append(self.parse_statement())
            except ParseError:
                self.sync_to_statement_boundary()

    def parse_statement(self):
        start = self.peek()
        if self.looks_like_assignment():
            assignees = []
            while True:
                tok = self.peek()
                if tok.kind in (T.IDENT, T.UNDERSCORE):
                    self.advance()
                    assignees.append(tok.text)
                else:
                    self.expect(T.IDENT, "assignee")
                if not self.accept(T.COMMA):
                    break
            self.expect(T.EQUALS)
            rhs = self.parse_expression()
            stmt = Assignment(assignees, rhs, span=self.span_from(start))
        else:
            expr = self.parse_expression()
            stmt = ExpressionStatement(expr, span=self.span_from(start))
        self.expect_statement_end()
        return stmt

    def expect_statement_end(self):
        k = self.peek().kind
        if k in (T.NEWLINE, T.SEMI):
            self.advance()
            return
        if k in (T.RBRACE, T.EOF):
            return
        found = self.peek()
        self.diags.append(error(
            "E003", f"expected end of statement, found {found.describe()}", found.span))
        raise ParseError()

    def looks_like_assignment(self) -> bool:
        i = self.pos
        while True:
            if self.toks[i].kind not in (T.IDENT, T.UNDERSCORE):
                return False
            i += 1
            if self.toks[i].kind == T.COMMA:
                i += 1
                continue
            return self.toks[i].kind == T.EQUALS

    # --- pipelines ---

    def parse_pipeline_decl(self):
        start = self.expect(T.KW_PIPELINE)
        name = self.expect(T.IDENT, "pipeline name")
        self.skip_newlines()
        self.expect(T.LBRACE)
        body = self.parse_statements()
        self.expect(T.RBRACE)
        return PipelineDecl(name.text, body, span=self.span_from(start))

    def parse_program(self):
        pipelines = []
        while True:
            self.skip_newlines()
            if self.at(T.EOF):
                break
            try:
                pipelines.append(self.parse_pipeline_decl())
            except ParseError:
                self.sync_to_statement_boundary()
        names = set()
        for p in pipelines:
            if p.name in names:
                self.diags.append(error(
                    "E004", f"duplicate pipeline name '{p.name}'", p.span))
            names.add(p.name)
        return ProgramAst(pipelines, [], span=None)

    # --- types ---

    def parse_type(self):
        ty = self.parse_type_atom()
        while self.at(T.KW_WHERE):
            start = self.advance()
            self.skip_newlines()
            self.expect(T.LBRACE)
            constraints = []
            while True:
                self.skip_newlines()
                constraints.append(self.parse_constraint())
                self.skip_newlines()
                if not self.accept(T.COMMA):
                    break
            self.skip_newlines()
            close = self.expect(T.RBRACE)
            ty = RefinedTypeRef(ty, constraints, span=_join(ty.span, close.span))
        return ty

    def parse_type_atom(self):
        tok = self.peek()
        if tok.kind == T.KW_UNION:
            self.advance()
            self.expect(T.LT)
            members = [self.parse_type()]
            while self.accept(T.COMMA):
                members.append(self.parse_type())
            self.expect_type_close()
            return UnionTypeRef(members, span=self.span_from(tok))
        if tok.kind == T.LPAREN:
            self.advance()
            params = []
            if not self.at(T.RPAREN):
                params.append(self.parse_type())
                while self.accept(T.COMMA):
                    params.append(self.parse_type())
            self.expect(T.RPAREN)
            self.expect(T.ARROW)
            self.expect(T.LPAREN)
            results = []
            if not self.at(T.RPAREN):
                results.append(self.parse_type())
                while self.accept(T.COMMA):
                    results.append(self.parse_type())
            self.expect(T.RPAREN)
            return FunctionTypeRef(params, results, span=self.span_from(tok))
        name = self.expect(T.IDENT, "type name")
        args = []
        if self.at(T.LT):
            self.advance()
            args.append(self.parse_type())
            while self.accept(T.COMMA):
                args.append(self.parse_type())
            self.expect_type_close()
        return NamedType(name.text, args, span=self.span_from(name))

    def parse_constraint(self):
        start = self.expect(T.KW_IT)
        cmp_tok = self.peek()
        if cmp_tok.kind not in _CMP_TOKENS:
            self.diags.append(error(
                "E003", f"expected comparator, found {cmp_tok.describe()}", cmp_tok.span))
            raise ParseError()
        self.advance()
        value = self.parse_constant()
        return Constraint(_CMP_TOKENS[cmp_tok.kind], value, span=self.span_from(start))

    def parse_constant(self):
        tok = self.peek()
        if tok.kind == T.INT:
            self.advance()
            return IntLit(int(tok.text), span=tok.span)
        if tok.kind == T.FLOAT:
            self.advance()
            return FloatLit(float(tok.text), span=tok.span)
        if tok.kind == T.STRING:
            self.advance()
            return StringLit(tok.text, span=tok.span)
        if tok.kind in (T.KW_TRUE, T.KW_FALSE):
            self.advance()
            return BoolLit(tok.kind == T.KW_TRUE, span=tok.span)
        if tok.kind == T.MINUS:
            self.advance()
            inner = self.parse_constant()
            return Negation(inner, span=_join(tok.span, inner.span))
        self.diags.append(error(
            "E003", f"expected constant, found {tok.describe()}", tok.span))
        raise ParseError()

    # --- stubs ---

    def parse_stub_file(self):
        python_module = None
        declarations = []
        pending_annotations = []
        start = self.peek()
        while True:
            self.skip_newlines()
            tok = self.peek()
            if tok.kind == T.EOF:
                break
            try:
                if tok.kind == T.AT:
                    ann = self.parse_annotation()
                    if ann.name == "PythonModule" and not declarations:
                        python_module = ann.value
                    else:
                        pending_annotations.append(ann)
                elif tok.kind == T.KW_FUN:
                    decl = self.parse_fun_decl()
                    decl.annotations = pending_annotations
                    pending_annotations = []
                    declarations.append(decl)
                elif tok.kind == T.KW_CLASS:
                    decl = self.parse_class_decl()
                    decl.annotations = pending_annotations
                    pending_annotations = []
                    declarations.append(decl)
                elif tok.kind == T.KW_ENUM:
                    decl = self.parse_enum_decl()
                    decl.annotations = pending_annotations
                    pending_annotations = []
                    declarations.append(decl)
                else:
                    self.diags.append(error(
                        "E003",
                        f"expected declaration, found {tok.describe()}", tok.span))
                    raise ParseError()
            except ParseError:
                self.sync_to_statement_boundary()
        names = set()
        for d in declarations:
            if d.name in names:
                self.diags.append(error(
                    "E004", f"duplicate declaration name '{d.name}'", d.span))
            names.add(d.name)
        return StubFile(python_module, declarations, span=self.span_from(start))

    def parse_annotation(self):
        start = self.expect(T.AT)
        name = self.expect(T.IDENT, "annotation name")
        value = None
        if self.accept(T.LPAREN):
            value = self.expect(T.STRING).text
            self.expect(T.RPAREN)
        return Annotation(name.text, value, span=self.span_from(start))

    def parse_fun_decl(self):
        start = self.expect(T.KW_FUN)
        name = self.expect(T.IDENT, "function name")
        type_params = self.parse_type_params()
        self.expect(T.LPAREN)
        params = []
        self.skip_newlines()
        if not self.at(T.RPAREN):
            while True:
                self.skip_newlines()
                params.append(self.parse_param())
                self.skip_newlines()
                if not self.accept(T.COMMA):
                    break
        self.skip_newlines()
        self.expect(T.RPAREN)
        results = []
        if self.accept(T.ARROW):
            results = self.parse_results()
        schema_clauses = []
        require_clauses = []
        # a '{' on the same line opens the fun body
        if self.at(T.LBRACE):
            self.advance()
            while True:
                self.skip_newlines()
                if self.at(T.RBRACE) or self.at(T.EOF):
                    break
                if self.at(T.KW_SCHEMA):
                    schema_clauses.extend(self.parse_schema_clause())
                elif self.at(T.KW_REQUIRE):
                    require_clauses.append(self.parse_require_clause())
                else:
                    tok = self.peek()
                    self.diags.append(error(
                        "E003",
                        f"expected 'schema' or 'require', found {tok.describe()}",
                        tok.span))
                    raise ParseError()
            self.expect(T.RBRACE)
        decl = FunDecl(name.text, type_params, params, results,
                       schema_clauses, require_clauses, [],
                       span=self.span_from(start))
        seen = set()
        for item in params + results:
            if item.name in seen:
                self.diags.append(error(
                    "E004", f"duplicate name '{item.name}' in declaration", item.span))
            seen.add(item.name)
        return decl

    def parse_type_params(self):
        if not self.at(T.LT):
            return []
        self.advance()
        type_params = []
        while True:
            name = self.expect(T.IDENT, "type parameter")
            bound = None
            if self.accept(T.KW_SUB):
                bound = self.parse_type()
            type_params.append(TypeParamDecl(name.text, bound, span=self.span_from(name)))
            if not self.accept(T.COMMA):
                break
        self.expect_type_close()
        return type_params

    def parse_param(self):
        name = self.expect(T.IDENT, "parameter name")
        self.expect(T.COLON)
        type_ref = self.parse_type()
        default = None
        if self.accept(T.EQUALS):
            default = self.parse_constant()
        return ParamDecl(name.text, type_ref, default, span=self.span_from(name))

    def parse_results(self):
        if self.accept(T.LPAREN):
            results = [self.parse_result()]
            while self.accept(T.COMMA):
                results.append(self.parse_result())
            self.expect(T.RPAREN)
            return results
        return [self.parse_result()]

    def parse_result(self):
        self.skip_newlines()
        name = self.expect(T.IDENT, "result name")
        self.expect(T.COLON)
        type_ref = self.parse_type()
        return ResultDecl(name.text, type_ref, span=self.span_from(name))

    def parse_schema_clause(self):
        self.expect(T.KW_SCHEMA)
        self.skip_newlines()
        self.expect(T.LBRACE)
        entries = []
        while True:
            self.skip_newlines()
            if self.at(T.RBRACE) or self.at(T.EOF):
                break
            name = self.expect(T.IDENT, "result name")
            self.expect(T.EQUALS)
            entries.append(self.parse_schema_expr(name))
        self.expect(T.RBRACE)
        return entries

    def parse_schema_expr(self, result_tok):
        if self.at_contextual("external"):
            self.advance()
            self.expect(T.LPAREN)
            param = self.expect(T.IDENT, "parameter name")
            self.expect(T.RPAREN)
            return SchemaExprDecl(result_tok.text, None, param.text, [],
                                  span=self.span_from(result_tok))
        base = self.expect(T.IDENT, "parameter name")
        ops = []
        while self.at(T.DOT):
            self.advance()
            ops.append(self.parse_effect_op())
        return SchemaExprDecl(result_tok.text, base.text, None, ops,
                              span=self.span_from(result_tok))

    def parse_effect_op(self):
        kind_tok = self.expect(T.IDENT, "schema effect")
        kind = kind_tok.text
        if kind not in _EFFECT_ARITY:
            self.diags.append(error(
                "E003",
                f"expected one of add/remove/rename/retype/keep/drop, found '{kind}'",
                kind_tok.span))
            raise ParseError()
        self.expect(T.LPAREN)
        names = [self.parse_name_arg()]
        type_ref = None
        if kind == "add":
            self.expect(T.COLON)
            type_ref = self.parse_type()
        elif kind == "rename":
            self.expect(T.COMMA)
            names.append(self.parse_name_arg())
        elif kind == "retype":
            self.expect(T.COMMA)
            type_ref = self.parse_type()
        self.expect(T.RPAREN)
        return EffectOp(kind, names, type_ref, span=self.span_from(kind_tok))

    def parse_name_arg(self):
        tok = self.peek()
        if tok.kind == T.STRING:
            self.advance()
            return NameArg(tok.text, False, span=tok.span)
        if tok.kind == T.IDENT:
            self.advance()
            return NameArg(tok.text, True, span=tok.span)
        self.diags.append(error(
            "E003", f"expected column name, found {tok.describe()}", tok.span))
        raise ParseError()

    def parse_require_clause(self):
        start = self.expect(T.KW_REQUIRE)
        table = self.expect(T.IDENT, "parameter name")
        self.expect_contextual("has")
        self.expect_contextual("column")
        column = self.parse_name_arg()
        required_type = None
        if self.accept(T.COLON):
            required_type = self.parse_type()
        return SchemaRequirementDecl(table.text, column, required_type,
                                     span=self.span_from(start))

    def parse_class_decl(self):
        start = self.expect(T.KW_CLASS)
        name = self.expect(T.IDENT, "class name")
        type_params = self.parse_type_params()
        super_type = None
        if self.accept(T.KW_SUB):
            super_type = self.parse_type()
        attributes = []
        methods = []
        protocol = None
        if self.at(T.LBRACE):
            self.advance()
            pending = []
            while True:
                self.skip_newlines()
                tok = self.peek()
                if tok.kind in (T.RBRACE, T.EOF):
                    break
                if tok.kind == T.AT:
                    pending.append(self.parse_annotation())
                elif tok.kind == T.KW_ATTR:
                    self.advance()
                    attr_name = self.expect(T.IDENT, "attribute name")
                    self.expect(T.COLON)
                    attributes.append(AttrDecl(attr_name.text, self.parse_type(),
                                               span=self.span_from(attr_name)))
                elif tok.kind == T.KW_FUN:
                    m = self.parse_fun_decl()
                    m.annotations = pending
                    pending = []
                    methods.append(m)
                elif tok.kind == T.KW_PROTOCOL:
                    if protocol is not None:
                        self.diags.append(error(
                            "E004", "class already declares a protocol", tok.span))
                    self.advance()
                    protocol = self.parse_proto_alt(top_level=True)
                else:
                    self.diags.append(error(
                        "E003",
                        f"expected class member, found {tok.describe()}", tok.span))
                    raise ParseError()
            self.expect(T.RBRACE)
        seen = set()
        for m in methods:
            if m.name in seen:
                self.diags.append(error(
                    "E004", f"duplicate method name '{m.name}'", m.span))
            seen.add(m.name)
        return ClassDecl(name.text, type_params, super_type, attributes,
                         methods, protocol, [], span=self.span_from(start))

    # protocol regexes; at top level a newline or '}' ends the regex
    def parse_proto_alt(self, top_level=False):
        start = self.peek()
        seqs = [self.parse_proto_seq(top_level)]
        while self.at(T.PIPE):
            self.advance()
            if top_level:
                self.skip_newlines()
            seqs.append(self.parse_proto_seq(top_level))
        if len(seqs) == 1:
            return seqs[0]
        return PAlt(seqs, span=self.span_from(start))

    def parse_proto_seq(self, top_level):
        start = self.peek()
        items = []
        while True:
            tok = self.peek()
            if tok.kind not in (T.IDENT, T.DOT, T.LPAREN):
                break
            items.append(self.parse_proto_factor(top_level))
        if len(items) == 1:
            return items[0]
        return PSeq(items, span=self.span_from(start) if items else start.span)

    def parse_proto_factor(self, top_level):
        atom = self.parse_proto_atom(top_level)
        tok = self.peek()
        if tok.kind == T.STAR:
            self.advance()
            return PStar(atom, span=self.span_from(tok))
        if tok.kind == T.PLUS:
            self.advance()
            return PPlus(atom, span=self.span_from(tok))
        if tok.kind == T.QUESTION:
            self.advance()
            return POpt(atom, span=self.span_from(tok))
        return atom

    def parse_proto_atom(self, top_level):
        tok = self.peek()
        if tok.kind == T.IDENT:
            self.advance()
            return PToken(tok.text, span=tok.span)
        if tok.kind == T.DOT:
            self.advance()
            return PAny(span=tok.span)
        if tok.kind == T.LPAREN:
            self.advance()
            self.skip_newlines()
            inner = self.parse_proto_alt(top_level=False)
            self.skip_newlines()
            self.expect(T.RPAREN)
            return inner
        self.diags.append(error(
            "E003", f"expected protocol atom, found {tok.describe()}", tok.span))
        raise ParseError()

    def parse_enum_decl(self):
        start = self.expect(T.KW_ENUM)
        name = self.expect(T.IDENT, "enum name")
        self.skip_newlines()
        self.expect(T.LBRACE)
        self.skip_newlines()
        variants = [self.expect(T.IDENT, "enum variant").text]
        self.skip_newlines()
        while self.accept(T.COMMA):
            self.skip_newlines()
            variants.append(self.expect(T.IDENT, "enum variant").text)
            self.skip_newlines()
        self.expect(T.RBRACE)
        return EnumDecl(name.text, variants, [], span=self.span_from(start))


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.file, a.start_line, a.start_col, b.end_line, b.end_col)


def parse_pipeline(source: str, file: str = "<input>"):
    """Parse pipeline source into a ProgramAst; returns (ast, diagnostics)."""
    tokens, diags = lex(source, file)
    parser = Parser(tokens, diags)
    ast = parser.parse_program()
    return ast, diags


def parse_stubs(source: str, file: str = "<input>"):
    """Parse a stub file; returns (StubFile, diagnostics)."""
    tokens, diags = lex(source, file)
    parser = Parser(tokens, diags)
    stub = parser.parse_stub_file()
    return stub, diags
