"""Recursive-descent parser for the supported JavaScript subset.

Supported: var/let/const, function declarations and expressions, arrows,
classes with methods/getters/setters, blocks, all common statements,
template literals with interpolation, import/export with relative string
paths, member access, object/array literals.

Out of subset (raises UnsupportedSyntax so the file is copied through
verbatim): labeled statements, destructuring, generators, async/await,
class fields, optional chaining, dynamic import(), computed method names.

The same pass records everything the cross-file analysis needs: imports,
exports and dynamic sites (eval, with, Function constructor).
"""

from .errors import ParseError, UnsupportedSyntax
from .nodes import Node
from .tokens import (
    COMMENT,
    IDENT,
    KEYWORD,
    NUMBER,
    PUNCT,
    REGEX,
    STRING,
    TEMPLATE,
    WHITESPACE,
)

# binary operator precedence; higher binds tighter
_BINARY_PREC = {
    "??": 1, "||": 1, "&&": 2,
    "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6, "===": 6, "!==": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "in": 7, "instanceof": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
    "**": 11,
}
_LOGICAL_OPS = frozenset({"&&", "||", "??"})
_ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "??="}
)
_UNARY_OPS = frozenset({"!", "~", "+", "-", "typeof", "void", "delete"})


class FileSummary:
    """Per-file facts consumed by the cross-file analysis.

    ``imports`` holds (source path, [imported names]) pairs where a default
    import appears as "default" and a namespace import as "*".
    """

    __slots__ = (
        "file_id",
        "declared_globals",
        "free_names",
        "imports",
        "exports",
        "export_pairs",
        "dynamic_sites",
        "size",
    )

    def __init__(self, file_id):
        self.file_id = file_id
        self.declared_globals = []
        self.free_names = []
        self.imports = []
        self.exports = []
        self.export_pairs = []  # (local binding, exported name) for named exports
        self.dynamic_sites = []
        self.size = 0

    def __repr__(self):
        return (
            f"FileSummary({self.file_id}, globals={self.declared_globals}, "
            f"free={self.free_names}, imports={self.imports}, exports={self.exports})"
        )


def parse_ast(tokens, file_id="<input>"):
    """Parse a token stream into an AST root, skipping summary extraction.

    Returns (root, dynamic site spans); callers that need the FileSummary
    use ``parse``.
    """
    parser = _Parser(tokens, file_id)
    root = parser.parse_program()
    return root, parser.dynamic_sites


def parse(tokens, file_id="<input>"):
    """Parse a token stream into (AST root, FileSummary)."""
    parser = _Parser(tokens, file_id)
    root = parser.parse_program()
    summary = FileSummary(file_id)
    summary.imports = parser.imports
    summary.exports = parser.exports
    summary.export_pairs = parser.export_pairs
    summary.dynamic_sites = parser.dynamic_sites
    summary.size = parser.end_offset
    # declared globals and free names need scope resolution
    from .scopes import build_scope_tree

    tree = build_scope_tree(root, file_id)
    summary.declared_globals = sorted(tree.nodes[tree.root].declarations)
    free = set()
    for occ in tree.occurrences:
        binding = tree.resolve(occ.name, occ.scope_id)
        if binding.is_global():
            free.add(occ.name)
    summary.free_names = sorted(free)
    return root, summary


class _Parser:
    def __init__(self, tokens, file_id):
        self.file_id = file_id
        sig = []
        nl = []
        saw_nl = False
        for t in tokens:
            if t.kind == WHITESPACE or t.kind == COMMENT:
                if "\n" in t.text or "\r" in t.text:
                    saw_nl = True
                continue
            sig.append(t)
            nl.append(saw_nl)
            saw_nl = False
        self.toks = sig
        self.nl_before = nl
        self.i = 0
        self.end_offset = tokens[-1].end if tokens else 0
        self.dynamic_sites = []
        self.imports = []
        self.exports = []
        self.export_pairs = []

    # ---- token helpers ----

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text):
        # contextual keywords (from, as, get, set) lex as identifiers
        t = self.peek()
        return t is not None and t.text == text and t.kind in (PUNCT, KEYWORD, IDENT)

    def at_kind(self, kind):
        t = self.peek()
        return t is not None and t.kind == kind

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message):
        t = self.peek()
        offset = t.start if t is not None else self.end_offset
        raise ParseError(message, self.file_id, offset)

    def unsupported(self, message):
        t = self.peek()
        offset = t.start if t is not None else self.end_offset
        raise UnsupportedSyntax(message, self.file_id, offset)

    def newline_before_current(self):
        return self.i < len(self.nl_before) and self.nl_before[self.i]

    def consume_semicolon(self):
        t = self.peek()
        if t is not None and t.kind == PUNCT and t.text == ";":
            self.advance()
            return
        if t is None or (t.kind == PUNCT and t.text == "}"):
            return
        if self.newline_before_current():
            return
        self.error("expected ';'")

    # ---- program / statements ----

    def parse_program(self):
        stmts = []
        while self.peek() is not None:
            stmts.append(self.parse_statement())
        return Node("program", 0, self.end_offset, children=stmts)

    def parse_statement(self):
        t = self.peek()
        if t.kind == PUNCT:
            if t.text == "{":
                return self.parse_block()
            if t.text == ";":
                tok = self.advance()
                return Node("empty", tok.start, tok.end)
        if t.kind == KEYWORD:
            text = t.text
            if text in ("var", "let", "const"):
                node = self.parse_var_decl()
                self.consume_semicolon()
                return node
            if text == "function":
                return self.parse_function_decl()
            if text == "class":
                return self.parse_class(decl=True)
            if text == "if":
                return self.parse_if()
            if text == "for":
                return self.parse_for()
            if text == "while":
                return self.parse_while()
            if text == "do":
                return self.parse_do_while()
            if text == "switch":
                return self.parse_switch()
            if text == "try":
                return self.parse_try()
            if text == "return":
                return self.parse_return_like("return")
            if text == "throw":
                return self.parse_return_like("throw", require_arg=True)
            if text == "break" or text == "continue":
                tok = self.advance()
                if (
                    self.peek() is not None
                    and self.peek().kind == IDENT
                    and not self.newline_before_current()
                ):
                    self.unsupported("labeled break/continue is not supported")
                self.consume_semicolon()
                return Node(tok.text, tok.start, tok.end)
            if text == "with":
                return self.parse_with()
            if text == "import":
                if self.peek(1) is not None and self.peek(1).text == "(":
                    self.unsupported("dynamic import() is not supported")
                if self.peek(1) is not None and self.peek(1).text == ".":
                    self.unsupported("import.meta is not supported")
                return self.parse_import()
            if text == "export":
                return self.parse_export()
            if text == "debugger":
                tok = self.advance()
                self.consume_semicolon()
                return Node("other-statement", tok.start, tok.end, name="debugger")
            if text in ("async", "await", "yield"):
                self.unsupported(f"'{text}' is not supported")
        if t.kind == IDENT:
            nxt = self.peek(1)
            if nxt is not None and nxt.kind == PUNCT and nxt.text == ":":
                self.unsupported("labeled statements are not supported")
        expr = self.parse_expression()
        self.consume_semicolon()
        if expr.kind == "string-lit":
            # directive prologue candidates ("use strict") must stay verbatim
            expr.aux = "directive"
        return Node("expr-stmt", expr.start, expr.end, children=[expr])

    def parse_block(self):
        lbrace = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.peek() is None:
                self.error("unterminated block")
            stmts.append(self.parse_statement())
        rbrace = self.expect("}")
        return Node("block", lbrace.start, rbrace.end, children=stmts)

    def parse_var_decl(self, no_in=False):
        kw = self.advance()
        declarators = []
        while True:
            name_tok = self.peek()
            if name_tok is None or name_tok.kind != IDENT:
                if name_tok is not None and name_tok.kind == PUNCT and name_tok.text in ("{", "["):
                    self.unsupported("destructuring declarations are not supported")
                self.error("expected identifier in declaration")
            self.advance()
            decl = Node(
                "declarator",
                name_tok.start,
                name_tok.end,
                name=name_tok.text,
                value=(name_tok.start, name_tok.end),
            )
            if self.at("="):
                self.advance()
                init = self.parse_assign(no_in=no_in)
                decl.children.append(init)
                decl.end = init.end
            declarators.append(decl)
            if self.at(","):
                self.advance()
                continue
            break
        end = declarators[-1].end
        return Node("var-decl", kw.start, end, name=kw.text, children=declarators)

    def parse_function_decl(self):
        kw = self.expect("function")
        if self.at("*"):
            self.unsupported("generator functions are not supported")
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != IDENT:
            self.error("expected function name")
        self.advance()
        params = self.parse_params()
        body = self.parse_block()
        return Node(
            "function-decl",
            kw.start,
            body.end,
            name=name_tok.text,
            value=(name_tok.start, name_tok.end),
            children=params + [body],
        )

    def parse_params(self):
        self.expect("(")
        params = []
        while not self.at(")"):
            rest = False
            if self.at("..."):
                self.advance()
                rest = True
            t = self.peek()
            if t is None or t.kind != IDENT:
                if t is not None and t.kind == PUNCT and t.text in ("{", "["):
                    self.unsupported("destructuring parameters are not supported")
                self.error("expected parameter name")
            self.advance()
            param = Node(
                "param",
                t.start,
                t.end,
                name=t.text,
                value=(t.start, t.end),
                aux="rest" if rest else None,
            )
            if self.at("="):
                self.advance()
                default = self.parse_assign()
                param.children.append(default)
                param.end = default.end
            params.append(param)
            if self.at(","):
                self.advance()
        self.expect(")")
        return params

    def parse_class(self, decl):
        kw = self.expect("class")
        name = None
        name_span = None
        t = self.peek()
        if t is not None and t.kind == IDENT:
            self.advance()
            name = t.text
            name_span = (t.start, t.end)
        elif decl:
            self.error("expected class name")
        children = []
        has_extends = False
        if self.at("extends"):
            self.advance()
            children.append(self.parse_unary_chain_for_extends())
            has_extends = True
        self.expect("{")
        while not self.at("}"):
            if self.at(";"):
                self.advance()
                continue
            children.append(self.parse_class_member())
        rbrace = self.expect("}")
        return Node(
            "class" if decl else "class-expr",
            kw.start,
            rbrace.end,
            name=name,
            value=name_span,
            children=children,
            aux=has_extends or None,
        )

    def parse_unary_chain_for_extends(self):
        # extends clause takes a LeftHandSideExpression
        return self.parse_call_member(self.parse_primary())

    def parse_class_member(self):
        start_tok = self.peek()
        role = "method"
        if self.at("static"):
            self.advance()
        t = self.peek()
        if t is not None and t.kind == IDENT and t.text in ("get", "set"):
            nxt = self.peek(1)
            if nxt is not None and nxt.text != "(":
                role = t.text
                self.advance()
        if self.at("*"):
            self.unsupported("generator methods are not supported")
        name_tok = self.peek()
        if name_tok is None:
            self.error("unterminated class body")
        if name_tok.kind == PUNCT and name_tok.text == "[":
            self.unsupported("computed method names are not supported")
        if name_tok.kind not in (IDENT, KEYWORD, STRING, NUMBER):
            self.error("expected method name")
        self.advance()
        if not self.at("("):
            self.unsupported("class fields are not supported")
        params = self.parse_params()
        body = self.parse_block()
        return Node(
            "method",
            start_tok.start,
            body.end,
            name=name_tok.text,
            children=params + [body],
            aux=role,
        )

    def parse_if(self):
        kw = self.expect("if")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        then = self.parse_statement()
        children = [cond, then]
        end = then.end
        if self.at("else"):
            self.advance()
            alt = self.parse_statement()
            children.append(alt)
            end = alt.end
        return Node("if", kw.start, end, children=children)

    def parse_for(self):
        kw = self.expect("for")
        self.expect("(")
        init = None
        if self.at(";"):
            pass
        elif self.peek() is not None and self.peek().kind == KEYWORD and self.peek().text in (
            "var",
            "let",
            "const",
        ):
            init = self.parse_var_decl(no_in=True)
        else:
            init = self.parse_expression(no_in=True)
        t = self.peek()
        if t is not None and (t.text == "in" or t.text == "of"):
            loop_kind = "for-in" if t.text == "in" else "for-of"
            self.advance()
            iterable = self.parse_assign() if loop_kind == "for-of" else self.parse_expression()
            self.expect(")")
            body = self.parse_statement()
            return Node(loop_kind, kw.start, body.end, children=[init, iterable, body])
        self.expect(";")
        cond = None if self.at(";") else self.parse_expression()
        self.expect(";")
        update = None if self.at(")") else self.parse_expression()
        rparen = self.expect(")")
        body = self.parse_statement()
        children = [
            init if init is not None else Node("empty", kw.end, kw.end),
            cond if cond is not None else Node("empty", rparen.start, rparen.start),
            update if update is not None else Node("empty", rparen.start, rparen.start),
            body,
        ]
        return Node("for", kw.start, body.end, children=children)

    def parse_while(self):
        kw = self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return Node("while", kw.start, body.end, children=[cond, body])

    def parse_do_while(self):
        kw = self.expect("do")
        body = self.parse_statement()
        self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        rp = self.expect(")")
        end = rp.end
        if self.at(";"):
            end = self.advance().end
        return Node("do-while", kw.start, end, children=[body, cond])

    def parse_switch(self):
        kw = self.expect("switch")
        self.expect("(")
        disc = self.parse_expression()
        self.expect(")")
        self.expect("{")
        cases = []
        while not self.at("}"):
            if self.at("case"):
                ck = self.advance()
                test = self.parse_expression()
                self.expect(":")
                stmts = self.parse_case_body()
                end = stmts[-1].end if stmts else ck.end
                cases.append(Node("case", ck.start, end, children=[test] + stmts))
            elif self.at("default"):
                ck = self.advance()
                self.expect(":")
                stmts = self.parse_case_body()
                end = stmts[-1].end if stmts else ck.end
                cases.append(Node("case", ck.start, end, children=stmts, aux="default"))
            else:
                self.error("expected 'case' or 'default'")
        rbrace = self.expect("}")
        return Node("switch", kw.start, rbrace.end, children=[disc] + cases)

    def parse_case_body(self):
        stmts = []
        while not (self.at("case") or self.at("default") or self.at("}")):
            if self.peek() is None:
                self.error("unterminated switch body")
            stmts.append(self.parse_statement())
        return stmts

    def parse_try(self):
        kw = self.expect("try")
        block = self.parse_block()
        children = [block]
        end = block.end
        if self.at("catch"):
            ck = self.advance()
            name = None
            name_span = None
            if self.at("("):
                self.advance()
                t = self.peek()
                if t is None or t.kind != IDENT:
                    self.unsupported("catch parameter must be a plain identifier")
                self.advance()
                name = t.text
                name_span = (t.start, t.end)
                self.expect(")")
            cblock = self.parse_block()
            children.append(
                Node("catch", ck.start, cblock.end, name=name, value=name_span, children=[cblock])
            )
            end = cblock.end
        if self.at("finally"):
            self.advance()
            fblock = self.parse_block()
            children.append(fblock)
            end = fblock.end
        if len(children) == 1:
            self.error("try requires catch or finally")
        return Node("try", kw.start, end, children=children)

    def parse_return_like(self, kind, require_arg=False):
        kw = self.advance()
        t = self.peek()
        has_arg = not (
            t is None
            or (t.kind == PUNCT and t.text in (";", "}"))
            or self.newline_before_current()
        )
        if require_arg and not has_arg:
            self.error(f"{kind} requires an argument")
        children = []
        end = kw.end
        if has_arg:
            expr = self.parse_expression()
            children.append(expr)
            end = expr.end
        self.consume_semicolon()
        return Node(kind, kw.start, end, children=children)

    def parse_with(self):
        kw = self.expect("with")
        self.expect("(")
        expr = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        node = Node("with", kw.start, body.end, children=[expr, body])
        self.dynamic_sites.append((kw.start, body.end))
        return node

    # ---- modules ----

    def parse_import(self):
        kw = self.expect("import")
        info = {"source": None, "default": None, "namespace": None, "names": []}
        t = self.peek()
        if t is not None and t.kind == STRING:
            self.advance()
            info["source"] = _string_value(t.text)
            src_end = t.end
        else:
            if t is not None and t.kind == IDENT:
                self.advance()
                info["default"] = (t.text, (t.start, t.end))
                if self.at(","):
                    self.advance()
                    t = self.peek()
            if self.at("*"):
                self.advance()
                self.expect("as")
                nt = self.peek()
                if nt is None or nt.kind != IDENT:
                    self.error("expected namespace alias")
                self.advance()
                info["namespace"] = (nt.text, (nt.start, nt.end))
            elif self.at("{"):
                self.advance()
                while not self.at("}"):
                    ext = self.peek()
                    if ext is None or ext.kind not in (IDENT, KEYWORD, STRING):
                        self.error("expected import specifier")
                    self.advance()
                    local_tok = ext
                    if self.at("as"):
                        self.advance()
                        local_tok = self.peek()
                        if local_tok is None or local_tok.kind != IDENT:
                            self.error("expected local alias")
                        self.advance()
                    ext_name = _string_value(ext.text) if ext.kind == STRING else ext.text
                    info["names"].append(
                        (ext_name, local_tok.text, (local_tok.start, local_tok.end))
                    )
                    if self.at(","):
                        self.advance()
                self.expect("}")
            self.expect("from")
            src = self.peek()
            if src is None or src.kind != STRING:
                self.error("expected module path string")
            self.advance()
            info["source"] = _string_value(src.text)
            src_end = src.end
        self.consume_semicolon()
        imported = []
        if info["default"] is not None:
            imported.append("default")
        if info["namespace"] is not None:
            imported.append("*")
        imported.extend(ext for ext, _local, _span in info["names"])
        self.imports.append((info["source"], imported))
        return Node("import-decl", kw.start, src_end, value=info)

    def parse_export(self):
        kw = self.expect("export")
        info = {"source": None, "names": [], "default": False, "declaration": None}
        t = self.peek()
        if t is None:
            self.error("unterminated export")
        if t.text == "default" and t.kind == KEYWORD:
            self.advance()
            info["default"] = True
            inner = None
            if self.at("function"):
                inner = self.parse_function_decl()
            elif self.at("class"):
                inner = self.parse_class(decl=True)
            else:
                inner = self.parse_expression()
                self.consume_semicolon()
            self.exports.append("default")
            node = Node("export-decl", kw.start, inner.end, value=info, children=[inner])
            info["declaration"] = inner.kind
            return node
        if t.kind == KEYWORD and t.text in ("var", "let", "const"):
            inner = self.parse_var_decl()
            self.consume_semicolon()
            for decl in inner.children:
                info["names"].append((decl.name, decl.name))
                self.exports.append(decl.name)
                self.export_pairs.append((decl.name, decl.name))
            info["declaration"] = inner.kind
            return Node("export-decl", kw.start, inner.end, value=info, children=[inner])
        if t.kind == KEYWORD and t.text == "function":
            inner = self.parse_function_decl()
            info["names"].append((inner.name, inner.name))
            info["declaration"] = inner.kind
            self.exports.append(inner.name)
            self.export_pairs.append((inner.name, inner.name))
            return Node("export-decl", kw.start, inner.end, value=info, children=[inner])
        if t.kind == KEYWORD and t.text == "class":
            inner = self.parse_class(decl=True)
            info["names"].append((inner.name, inner.name))
            info["declaration"] = inner.kind
            self.exports.append(inner.name)
            self.export_pairs.append((inner.name, inner.name))
            return Node("export-decl", kw.start, inner.end, value=info, children=[inner])
        if t.text == "{":
            self.advance()
            locals_ = []
            while not self.at("}"):
                lt = self.peek()
                if lt is None or lt.kind not in (IDENT, KEYWORD):
                    self.error("expected export specifier")
                self.advance()
                exported = lt.text
                if self.at("as"):
                    self.advance()
                    et = self.peek()
                    if et is None or et.kind not in (IDENT, KEYWORD, STRING):
                        self.error("expected export alias")
                    self.advance()
                    exported = _string_value(et.text) if et.kind == STRING else et.text
                info["names"].append((lt.text, exported))
                locals_.append((lt.text, (lt.start, lt.end)))
                if self.at(","):
                    self.advance()
            rb = self.expect("}")
            end = rb.end
            if self.at("from"):
                self.advance()
                src = self.peek()
                if src is None or src.kind != STRING:
                    self.error("expected module path string")
                self.advance()
                info["source"] = _string_value(src.text)
                self.imports.append((info["source"], [loc for loc, _ in info["names"]]))
                end = src.end
            self.consume_semicolon()
            for local, exported in info["names"]:
                self.exports.append(exported)
                if info["source"] is None:
                    self.export_pairs.append((local, exported))
            node = Node("export-decl", kw.start, end, value=info)
            if info["source"] is None:
                # bare `export {a, b}`: the locals are references to module bindings
                for local, span in locals_:
                    node.children.append(
                        Node("identifier-ref", span[0], span[1], name=local, aux="export")
                    )
            return node
        self.error("unsupported export form")

    # ---- expressions ----

    def parse_expression(self, no_in=False):
        expr = self.parse_assign(no_in=no_in)
        if not self.at(","):
            return expr
        exprs = [expr]
        while self.at(","):
            self.advance()
            exprs.append(self.parse_assign(no_in=no_in))
        return Node("sequence", exprs[0].start, exprs[-1].end, children=exprs)

    def parse_assign(self, no_in=False):
        left = self.parse_conditional(no_in=no_in)
        t = self.peek()
        if t is not None and t.kind == PUNCT and t.text in _ASSIGN_OPS:
            if left.kind not in ("identifier-ref", "member-access", "computed-member", "paren"):
                self.error("invalid assignment target")
            self.advance()
            right = self.parse_assign(no_in=no_in)
            return Node("assign", left.start, right.end, name=t.text, children=[left, right])
        return left

    def parse_conditional(self, no_in=False):
        cond = self.parse_binary(1, no_in=no_in)
        if self.at("?"):
            self.advance()
            consequent = self.parse_assign()
            self.expect(":")
            alternate = self.parse_assign(no_in=no_in)
            return Node(
                "ternary", cond.start, alternate.end, children=[cond, consequent, alternate]
            )
        return cond

    def parse_binary(self, min_prec, no_in=False):
        left = self.parse_unary()
        while True:
            t = self.peek()
            if t is None:
                return left
            op = t.text
            if op == "in" and no_in:
                return left
            if t.kind == PUNCT or (t.kind == KEYWORD and op in ("in", "instanceof")):
                prec = _BINARY_PREC.get(op)
                if prec is None or prec < min_prec:
                    return left
                self.advance()
                if op == "**":
                    right = self.parse_binary(prec, no_in=no_in)  # right-assoc
                else:
                    right = self.parse_binary(prec + 1, no_in=no_in)
                kind = "logical" if op in _LOGICAL_OPS else "binary"
                left = Node(kind, left.start, right.end, name=op, children=[left, right])
                continue
            return left

    def parse_unary(self):
        t = self.peek()
        if t is not None and (
            (t.kind == PUNCT and t.text in ("!", "~", "+", "-"))
            or (t.kind == KEYWORD and t.text in ("typeof", "void", "delete"))
        ):
            self.advance()
            operand = self.parse_unary()
            return Node("unary", t.start, operand.end, name=t.text, children=[operand])
        if t is not None and t.kind == PUNCT and t.text in ("++", "--"):
            self.advance()
            operand = self.parse_unary()
            return Node(
                "update", t.start, operand.end, name=t.text, children=[operand], aux="prefix"
            )
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_call_member(self.parse_primary())
        t = self.peek()
        if (
            t is not None
            and t.kind == PUNCT
            and t.text in ("++", "--")
            and not self.newline_before_current()
        ):
            self.advance()
            return Node("update", expr.start, t.end, name=t.text, children=[expr], aux="postfix")
        return expr

    def parse_call_member(self, expr, allow_call=True):
        while True:
            t = self.peek()
            if t is None:
                return expr
            if t.kind == PUNCT and t.text == "?.":
                self.unsupported("optional chaining is not supported")
            if t.kind == PUNCT and t.text == ".":
                dot = self.advance()
                prop = self.peek()
                if prop is None or prop.kind not in (IDENT, KEYWORD):
                    self.error("expected property name")
                self.advance()
                expr = Node(
                    "member-access",
                    expr.start,
                    prop.end,
                    name=prop.text,
                    value=(dot.start, prop.end),
                    children=[expr],
                )
                continue
            if t.kind == PUNCT and t.text == "[":
                self.advance()
                index = self.parse_expression()
                rb = self.expect("]")
                expr = Node("computed-member", expr.start, rb.end, children=[expr, index])
                continue
            if allow_call and t.kind == PUNCT and t.text == "(":
                args, rp = self.parse_arguments()
                expr = Node("call", expr.start, rp.end, children=[expr] + args)
                if expr.children[0].kind == "identifier-ref" and expr.children[0].name in (
                    "eval",
                    "Function",
                ):
                    self.dynamic_sites.append((expr.start, expr.end))
                continue
            if t.kind == TEMPLATE and t.text.startswith("`"):
                tpl = self.parse_template()
                expr = Node("tagged-template", expr.start, tpl.end, children=[expr, tpl])
                continue
            return expr

    def parse_arguments(self):
        self.expect("(")
        args = []
        while not self.at(")"):
            if self.at("..."):
                s = self.advance()
                arg = self.parse_assign()
                args.append(Node("spread", s.start, arg.end, children=[arg]))
            else:
                args.append(self.parse_assign())
            if self.at(","):
                self.advance()
        rp = self.expect(")")
        return args, rp

    def parse_primary(self):
        t = self.peek()
        if t is None:
            self.error("unexpected end of input")
        if t.kind == IDENT:
            nxt = self.peek(1)
            if nxt is not None and nxt.kind == PUNCT and nxt.text == "=>":
                return self.parse_arrow([self.parse_single_param()])
            self.advance()
            return Node("identifier-ref", t.start, t.end, name=t.text)
        if t.kind == NUMBER:
            self.advance()
            return Node("num-lit", t.start, t.end)
        if t.kind == STRING:
            self.advance()
            return Node("string-lit", t.start, t.end)
        if t.kind == REGEX:
            self.advance()
            return Node("regex-lit", t.start, t.end)
        if t.kind == TEMPLATE:
            return self.parse_template()
        if t.kind == KEYWORD:
            if t.text in ("true", "false", "null"):
                self.advance()
                return Node("literal", t.start, t.end, name=t.text)
            if t.text == "this":
                self.advance()
                return Node("this", t.start, t.end)
            if t.text == "super":
                self.advance()
                return Node("super", t.start, t.end)
            if t.text == "function":
                return self.parse_function_expr()
            if t.text == "class":
                return self.parse_class(decl=False)
            if t.text == "new":
                return self.parse_new()
            if t.text in ("async", "await", "yield"):
                self.unsupported(f"'{t.text}' is not supported")
            if t.text == "import":
                self.unsupported("dynamic import() is not supported")
            self.error(f"unexpected keyword {t.text!r}")
        if t.kind == PUNCT:
            if t.text == "(":
                if self.is_arrow_ahead():
                    return self.parse_arrow(None)
                lp = self.advance()
                inner = self.parse_expression()
                rp = self.expect(")")
                return Node("paren", lp.start, rp.end, children=[inner])
            if t.text == "[":
                return self.parse_array()
            if t.text == "{":
                return self.parse_object()
        self.error(f"unexpected token {t.text!r}")

    def parse_single_param(self):
        t = self.advance()
        return Node("param", t.start, t.end, name=t.text, value=(t.start, t.end))

    def is_arrow_ahead(self):
        # at '(' : find the matching ')' and look for '=>'
        depth = 0
        j = self.i
        while j < len(self.toks):
            text = self.toks[j].text
            kind = self.toks[j].kind
            if kind == PUNCT:
                if text == "(" or text == "[" or text == "{":
                    depth += 1
                elif text == ")" or text == "]" or text == "}":
                    depth -= 1
                    if depth == 0:
                        nxt = self.toks[j + 1] if j + 1 < len(self.toks) else None
                        return nxt is not None and nxt.kind == PUNCT and nxt.text == "=>"
            j += 1
        return False

    def parse_arrow(self, params):
        start = self.peek().start if params is None else params[0].start
        if params is None:
            params = self.parse_params()
        self.expect("=>")
        if self.at("{"):
            body = self.parse_block()
            aux = None
        else:
            body = self.parse_assign()
            aux = "expr"
        return Node("arrow", start, body.end, children=params + [body], aux=aux)

    def parse_function_expr(self):
        kw = self.expect("function")
        if self.at("*"):
            self.unsupported("generator functions are not supported")
        name = None
        name_span = None
        t = self.peek()
        if t is not None and t.kind == IDENT:
            self.advance()
            name = t.text
            name_span = (t.start, t.end)
        params = self.parse_params()
        body = self.parse_block()
        return Node(
            "function-expr",
            kw.start,
            body.end,
            name=name,
            value=name_span,
            children=params + [body],
        )

    def parse_new(self):
        kw = self.expect("new")
        if self.at("."):
            self.unsupported("new.target is not supported")
        callee = self.parse_call_member(self.parse_primary(), allow_call=False)
        args = []
        end = callee.end
        if self.at("("):
            args, rp = self.parse_arguments()
            end = rp.end
        node = Node("new", kw.start, end, children=[callee] + args)
        if callee.kind == "identifier-ref" and callee.name == "Function":
            self.dynamic_sites.append((node.start, node.end))
        return self.parse_call_member(node)

    def parse_template(self):
        first = self.advance()
        node = Node("template", first.start, first.end)
        if first.text.endswith("`") and len(first.text) >= 2:
            return node
        # chunk ends with "${": expressions follow until a chunk closes with `
        while True:
            expr = self.parse_expression()
            node.children.append(expr)
            t = self.peek()
            if t is None or t.kind != TEMPLATE:
                self.error("unterminated template literal")
            self.advance()
            if t.text.endswith("`"):
                node.end = t.end
                return node

    def parse_array(self):
        lb = self.expect("[")
        elements = []
        while not self.at("]"):
            if self.at(","):
                hole = self.advance()
                elements.append(Node("empty", hole.start, hole.start))
                continue
            if self.at("..."):
                s = self.advance()
                expr = self.parse_assign()
                elements.append(Node("spread", s.start, expr.end, children=[expr]))
            else:
                elements.append(self.parse_assign())
            if self.at(","):
                self.advance()
        rb = self.expect("]")
        return Node("array", lb.start, rb.end, children=elements)

    def parse_object(self):
        lb = self.expect("{")
        props = []
        while not self.at("}"):
            props.append(self.parse_property())
            if self.at(","):
                self.advance()
        rb = self.expect("}")
        return Node("object", lb.start, rb.end, children=props)

    def parse_property(self):
        t = self.peek()
        if t is None:
            self.error("unterminated object literal")
        if t.kind == PUNCT and t.text == "...":
            self.advance()
            expr = self.parse_assign()
            return Node("property", t.start, expr.end, children=[expr], aux="spread")
        role = None
        if t.kind == IDENT and t.text in ("get", "set"):
            nxt = self.peek(1)
            if nxt is not None and (nxt.kind in (IDENT, KEYWORD, STRING, NUMBER)):
                role = t.text
                self.advance()
                t = self.peek()
        if t.kind == PUNCT and t.text == "[":
            self.advance()
            key_expr = self.parse_assign()
            self.expect("]")
            if self.at("("):
                params = self.parse_params()
                body = self.parse_block()
                fn = Node("method", t.start, body.end, children=params + [body], aux=role or "method")
                return Node(
                    "property", t.start, body.end, children=[key_expr, fn], aux="computed"
                )
            self.expect(":")
            value = self.parse_assign()
            return Node("property", t.start, value.end, children=[key_expr, value], aux="computed")
        if t.kind not in (IDENT, KEYWORD, STRING, NUMBER):
            self.error("expected property key")
        self.advance()
        key_node = None
        if t.kind == STRING:
            key_node = Node("string-lit", t.start, t.end, aux="key")
        elif t.kind == NUMBER:
            key_node = Node("num-lit", t.start, t.end, aux="key")
        if role is not None or self.at("("):
            params = self.parse_params()
            body = self.parse_block()
            fn = Node("method", t.start, body.end, name=t.text, children=params + [body], aux=role or "method")
            prop = Node("property", t.start, body.end, name=t.text, children=[fn], aux=role or "method")
            if key_node is not None:
                prop.children.insert(0, key_node)
            return prop
        if self.at(":"):
            self.advance()
            value = self.parse_assign()
            prop = Node("property", t.start, value.end, name=t.text, children=[value], aux="init")
            if key_node is not None:
                prop.children.insert(0, key_node)
            return prop
        # shorthand { name }
        if t.kind != IDENT:
            self.error("expected ':' after property key")
        ref = Node("identifier-ref", t.start, t.end, name=t.text, aux="shorthand")
        return Node("property", t.start, t.end, name=t.text, children=[ref], aux="shorthand")


_SIMPLE_ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v",
    "0": "\0", "'": "'", '"': '"', "\\": "\\", "`": "`", "\n": "", "\r": "",
}


def _string_value(raw):
    """Decode a JavaScript string literal (including the quotes) to its value.

    Raises ValueError for escapes outside the supported set; callers treat
    such literals as ineligible rather than failing the file.
    """
    body = raw[1:-1]
    if "\\" not in body:
        return body
    out = []
    i = 0
    n = len(body)
    while i < n:
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        i += 1
        if i >= n:
            raise ValueError("dangling backslash")
        esc = body[i]
        if esc == "u":
            if i + 1 < n and body[i + 1] == "{":
                j = body.index("}", i)
                out.append(chr(int(body[i + 2 : j], 16)))
                i = j + 1
                continue
            out.append(chr(int(body[i + 1 : i + 5], 16)))
            i += 5
            continue
        if esc == "x":
            out.append(chr(int(body[i + 1 : i + 3], 16)))
            i += 3
            continue
        if esc == "\r":
            if i + 1 < n and body[i + 1] == "\n":
                i += 1
            i += 1
            continue
        if esc in _SIMPLE_ESCAPES:
            out.append(_SIMPLE_ESCAPES[esc])
            i += 1
            continue
        if esc.isdigit():
            raise ValueError("legacy octal escape")
        out.append(esc)
        i += 1
    return "".join(out)
