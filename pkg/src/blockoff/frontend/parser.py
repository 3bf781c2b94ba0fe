"""Tolerant recursive-descent parser for a C subset.

The parser recognizes function/struct definitions, typedefs, declarations,
the usual statement forms, and full expressions (calls in particular).
Anything outside the subset is captured as an OpaqueStmt with an exact span,
so no input byte is ever lost. The only hard error is an unbalanced
delimiter, because then statement boundaries cannot be trusted.
"""

from __future__ import annotations

from typing import Optional, Union

from .lexer import Token, tokenize
from .nodes import (
    AstNode,
    Definition,
    NodeKind,
    SourceUnit,
    UnbalancedDelimiters,
)

TYPE_KEYWORDS = {
    "void", "char", "short", "int", "long", "float", "double",
    "signed", "unsigned",
}
QUALIFIERS = {
    "const", "volatile", "static", "extern", "register", "inline", "restrict",
    "_Bool",
}
BUILTIN_TYPEDEFS = {
    "size_t", "ssize_t", "ptrdiff_t", "FILE",
    "int8_t", "int16_t", "int32_t", "int64_t",
    "uint8_t", "uint16_t", "uint32_t", "uint64_t",
}
# Statement keywords outside the subset; they go straight to opaque recovery.
_OPAQUE_STMT_KEYWORDS = {
    "break", "continue", "goto", "switch", "case", "default",
    "enum", "union", "asm", "__asm__", "else",
}
_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}
_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
)
_UNARY_OPS = {"+", "-", "!", "~", "*", "&", "++", "--"}


class _Reject(Exception):
    """Internal backtrack signal; never escapes parse()."""


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    nl = text.rfind("\n", 0, offset)
    return line, offset - nl


def _check_balance(path: str, text: str, toks: list[Token]) -> None:
    pairs = {")": "(", "]": "[", "}": "{"}
    stack: list[Token] = []
    for t in toks:
        if t.kind != "punct":
            continue
        if t.text in "([{":
            stack.append(t)
        elif t.text in ")]}":
            if not stack or stack[-1].text != pairs[t.text]:
                line, col = _line_col(text, t.start)
                raise UnbalancedDelimiters(
                    path, line, col, f"unmatched '{t.text}'")
            stack.pop()
    if stack:
        t = stack[-1]
        line, col = _line_col(text, t.start)
        raise UnbalancedDelimiters(path, line, col, f"unclosed '{t.text}'")


class _Parser:
    def __init__(self, path: str, text: str, toks: list[Token]):
        self.path = path
        self.text = text
        self.toks = toks
        self.pos = 0
        self.typedef_names = set(BUILTIN_TYPEDEFS)

    # --- token plumbing -------------------------------------------------

    def tok(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.toks) - 1)
        return self.toks[i]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok().text == text and self.tok().kind in ("punct", "ident")

    def eat(self, text: str) -> Token:
        if not self.at(text):
            raise _Reject(f"expected {text!r}")
        return self.advance()

    def _is_type_name(self, t: Token) -> bool:
        return t.kind == "ident" and (
            t.text in TYPE_KEYWORDS
            or t.text in QUALIFIERS
            or t.text in self.typedef_names
        )

    def _is_decl_start(self) -> bool:
        t = self.tok()
        if t.kind != "ident":
            return False
        if t.text in ("struct", "union"):
            return self.tok(1).kind == "ident" or self.tok(1).text == "{"
        return self._is_type_name(t)

    # --- entry ----------------------------------------------------------

    def parse_unit(self) -> AstNode:
        items: list[AstNode] = []
        while self.tok().kind != "eof":
            items.append(self.parse_top())
        return AstNode(NodeKind.TRANSLATION_UNIT, 0, len(self.text), items)

    def parse_top(self) -> AstNode:
        t = self.tok()
        if t.kind == "pp":
            self.advance()
            return AstNode(NodeKind.OPAQUE_STMT, t.start, t.end)
        if t.text == "typedef":
            return self.parse_typedef()
        if t.text in ("struct", "union"):
            nxt, nxt2 = self.tok(1), self.tok(2)
            if nxt.text == "{" or (nxt.kind == "ident" and nxt2.text == "{"):
                return self.parse_struct_def(require_semi=True)
        mark = self.pos
        if self._is_decl_start():
            try:
                return self.parse_decl_or_funcdef()
            except _Reject:
                self.pos = mark
        return self.recover_stmt()

    # --- definitions and declarations ------------------------------------

    def parse_typedef(self) -> AstNode:
        start = self.eat("typedef")
        children: list[AstNode] = []
        t = self.tok()
        if t.text in ("struct", "union") and (
            self.tok(1).text == "{"
            or (self.tok(1).kind == "ident" and self.tok(2).text == "{")
        ):
            children.append(self.parse_struct_def(require_semi=False))
        name: Optional[str] = None
        last = start
        depth = 0
        while True:
            t = self.tok()
            if t.kind == "eof":
                break
            if depth == 0 and t.text == ";":
                last = self.advance()
                break
            if t.kind == "ident" and t.text not in TYPE_KEYWORDS \
                    and t.text not in QUALIFIERS:
                name = t.text
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                depth -= 1
            last = self.advance()
        if name:
            self.typedef_names.add(name)
        return AstNode(NodeKind.TYPEDEF, start.start, last.end, children, name)

    def parse_struct_def(self, require_semi: bool) -> AstNode:
        start = self.advance()  # struct / union
        name = None
        if self.tok().kind == "ident" and self.tok().text != "{":
            name = self.advance().text
        self.eat("{")
        fields: list[AstNode] = []
        while not self.at("}") and self.tok().kind != "eof":
            t = self.tok()
            if t.kind == "pp":
                self.advance()
                fields.append(AstNode(NodeKind.OPAQUE_STMT, t.start, t.end))
                continue
            mark = self.pos
            try:
                fields.append(self.parse_decl_stmt())
            except _Reject:
                self.pos = mark
                fields.append(self.recover_stmt())
        last = self.eat("}")
        if require_semi:
            # Absorb any trailing declarator ("} instance;") into the span.
            while self.tok().kind != "eof" and not self.at(";"):
                last = self.advance()
            if self.at(";"):
                last = self.advance()
        return AstNode(NodeKind.STRUCT_DEF, start.start, last.end, fields, name)

    def _parse_specifiers(self) -> tuple[str, int]:
        """Consume declaration specifiers; returns (type text, start offset)."""
        first = self.tok()
        saw_base = False
        while True:
            t = self.tok()
            if t.kind != "ident":
                break
            if t.text in QUALIFIERS:
                self.advance()
                continue
            if t.text in TYPE_KEYWORDS:
                saw_base = True
                self.advance()
                continue
            if t.text in ("struct", "union") and self.tok(1).kind == "ident":
                self.advance()
                self.advance()
                saw_base = True
                break
            if not saw_base and t.text in self.typedef_names:
                self.advance()
                saw_base = True
                break
            break
        if not saw_base:
            raise _Reject("no type specifier")
        end = self.toks[self.pos - 1].end
        text = " ".join(self.text[first.start:end].split())
        return text, first.start

    def _declarator_type(self, base: str, stars: int, is_array: bool) -> str:
        return base + "*" * stars + ("[]" if is_array else "")

    def parse_decl_or_funcdef(self) -> AstNode:
        base, start = self._parse_specifiers()
        stars = 0
        while self.at("*"):
            stars += 1
            self.advance()
        name_tok = self.tok()
        if name_tok.kind != "ident" or self._is_type_name(name_tok):
            raise _Reject("expected declarator name")
        self.advance()
        if self.at("("):
            return self._finish_function_or_prototype(base, stars, name_tok, start)
        return self._finish_var_decl(base, stars, name_tok, start)

    def _finish_function_or_prototype(
        self, base: str, stars: int, name_tok: Token, start: int
    ) -> AstNode:
        params = self.parse_param_list()
        if self.at("{"):
            body = self.parse_compound()
            node = AstNode(
                NodeKind.FUNCTION_DEF, start, body.end,
                [params, body], name_tok.text,
            )
            node.type_text = self._declarator_type(base, stars, False)
            node.name_span = (name_tok.start, name_tok.end)
            return node
        if self.at(";"):
            last = self.advance()
            return AstNode(NodeKind.DECL_STMT, start, last.end, [], name_tok.text)
        raise _Reject("not a function definition or prototype")

    def _finish_var_decl(
        self, base: str, stars: int, name_tok: Token, start: int
    ) -> AstNode:
        declared: list[tuple[str, str]] = []
        inits: list[AstNode] = []
        cur_name, cur_stars = name_tok, stars
        while True:
            is_array = False
            while self.at("["):
                self._skip_balanced("[", "]")
                is_array = True
            declared.append(
                (cur_name.text, self._declarator_type(base, cur_stars, is_array)))
            if self.at("="):
                self.advance()
                if self.at("{"):
                    self._skip_balanced("{", "}")  # initializer list: gap bytes
                else:
                    inits.append(self.parse_assign())
            if self.at(","):
                self.advance()
                cur_stars = 0
                while self.at("*"):
                    cur_stars += 1
                    self.advance()
                cur_name = self.tok()
                if cur_name.kind != "ident":
                    raise _Reject("expected declarator name")
                self.advance()
                continue
            break
        last = self.eat(";")
        node = AstNode(NodeKind.DECL_STMT, start, last.end, inits)
        node.type_text = base
        node.declared = tuple(declared)
        return node

    def _skip_balanced(self, open_t: str, close_t: str) -> Token:
        self.eat(open_t)
        depth = 1
        last = self.tok()
        while depth and self.tok().kind != "eof":
            last = self.advance()
            if last.text == open_t:
                depth += 1
            elif last.text == close_t:
                depth -= 1
        return last

    def parse_param_list(self) -> AstNode:
        lparen = self.eat("(")
        params: list[AstNode] = []
        if self.at("void") and self.tok(1).text == ")":
            self.advance()
        while not self.at(")") and self.tok().kind != "eof":
            params.append(self.parse_param())
            if self.at(","):
                self.advance()
            else:
                break
        rparen = self.eat(")")
        return AstNode(NodeKind.PARAM_LIST, lparen.start, rparen.end, params)

    def parse_param(self) -> AstNode:
        first = self.tok()
        if self.at("..."):
            t = self.advance()
            return AstNode(NodeKind.PARAM, t.start, t.end, [], None)
        try:
            base, start = self._parse_specifiers()
        except _Reject:
            # Unrecognized parameter: swallow to the next ',' or ')'.
            last = first
            depth = 0
            while self.tok().kind != "eof":
                t = self.tok()
                if depth == 0 and t.text in (",", ")"):
                    break
                if t.text in "([":
                    depth += 1
                elif t.text in ")]":
                    depth -= 1
                last = self.advance()
            return AstNode(NodeKind.PARAM, first.start, last.end, [], None)
        stars = 0
        while self.at("*"):
            stars += 1
            self.advance()
        name = None
        name_span = None
        last_end = self.toks[self.pos - 1].end
        if self.tok().kind == "ident" and not self._is_type_name(self.tok()):
            t = self.advance()
            name = t.text
            name_span = (t.start, t.end)
            last_end = t.end
        is_array = False
        while self.at("["):
            last_end = self._skip_balanced("[", "]").end
            is_array = True
        node = AstNode(NodeKind.PARAM, start, last_end, [], name)
        node.type_text = self._declarator_type(base, stars, is_array)
        node.name_span = name_span
        return node

    def parse_decl_stmt(self) -> AstNode:
        base, start = self._parse_specifiers()
        stars = 0
        while self.at("*"):
            stars += 1
            self.advance()
        name_tok = self.tok()
        if name_tok.kind != "ident" or self._is_type_name(name_tok):
            raise _Reject("expected declarator name")
        self.advance()
        if self.at("("):
            raise _Reject("function declarator in statement position")
        return self._finish_var_decl(base, stars, name_tok, start)

    # --- statements -------------------------------------------------------

    def parse_compound(self) -> AstNode:
        lbrace = self.eat("{")
        stmts: list[AstNode] = []
        while not self.at("}") and self.tok().kind != "eof":
            stmts.append(self.parse_stmt())
        rbrace = self.eat("}")
        return AstNode(NodeKind.COMPOUND_STMT, lbrace.start, rbrace.end, stmts)

    def parse_stmt(self) -> AstNode:
        t = self.tok()
        if t.kind == "pp":
            self.advance()
            return AstNode(NodeKind.OPAQUE_STMT, t.start, t.end)
        if t.text == "{":
            return self.parse_compound()
        if t.text == ";":
            self.advance()
            return AstNode(NodeKind.EXPR_STMT, t.start, t.end)
        if t.text in _OPAQUE_STMT_KEYWORDS:
            return self.recover_stmt()
        handlers = {
            "if": self.parse_if,
            "for": self.parse_for,
            "while": self.parse_while,
            "do": self.parse_do,
            "return": self.parse_return,
        }
        if t.text in handlers:
            mark = self.pos
            try:
                return handlers[t.text]()
            except _Reject:
                self.pos = mark
                return self.recover_stmt()
        mark = self.pos
        if self._is_decl_start():
            try:
                return self.parse_decl_stmt()
            except _Reject:
                self.pos = mark
        try:
            expr = self.parse_expr()
            last = self.eat(";")
            return AstNode(NodeKind.EXPR_STMT, t.start, last.end, [expr])
        except _Reject:
            self.pos = mark
            return self.recover_stmt()

    def parse_if(self) -> AstNode:
        start = self.eat("if")
        self.eat("(")
        cond = self.parse_expr()
        self.eat(")")
        then = self.parse_stmt()
        children = [cond, then]
        end = then.end
        if self.at("else"):
            self.advance()
            other = self.parse_stmt()
            children.append(other)
            end = other.end
        return AstNode(NodeKind.IF_STMT, start.start, end, children)

    def parse_for(self) -> AstNode:
        start = self.eat("for")
        self.eat("(")
        children: list[AstNode] = []
        if self.at(";"):
            self.advance()
        elif self._is_decl_start():
            children.append(self.parse_decl_stmt())
        else:
            first = self.tok()
            expr = self.parse_expr()
            last = self.eat(";")
            children.append(
                AstNode(NodeKind.EXPR_STMT, first.start, last.end, [expr]))
        if not self.at(";"):
            children.append(self.parse_expr())
        self.eat(";")
        if not self.at(")"):
            children.append(self.parse_expr())
        self.eat(")")
        body = self.parse_stmt()
        children.append(body)
        return AstNode(NodeKind.FOR_STMT, start.start, body.end, children)

    def parse_while(self) -> AstNode:
        start = self.eat("while")
        self.eat("(")
        cond = self.parse_expr()
        self.eat(")")
        body = self.parse_stmt()
        return AstNode(NodeKind.WHILE_STMT, start.start, body.end, [cond, body])

    def parse_do(self) -> AstNode:
        start = self.eat("do")
        body = self.parse_stmt()
        self.eat("while")
        self.eat("(")
        cond = self.parse_expr()
        self.eat(")")
        last = self.eat(";")
        return AstNode(NodeKind.DO_STMT, start.start, last.end, [body, cond])

    def parse_return(self) -> AstNode:
        start = self.eat("return")
        children = []
        if not self.at(";"):
            children.append(self.parse_expr())
        last = self.eat(";")
        return AstNode(NodeKind.RETURN_STMT, start.start, last.end, children)

    def recover_stmt(self) -> AstNode:
        """Swallow one unparseable construct into an OpaqueStmt.

        Stops after a top-level ';', after a balanced '{...}' group (plus an
        optional trailing ';'), or before a '}' closing the enclosing block.
        """
        first = self.tok()
        last: Optional[Token] = None
        depth = 0
        while True:
            t = self.tok()
            if t.kind == "eof":
                break
            if depth == 0 and t.text == "}":
                break
            if t.kind == "pp" and last is not None:
                break
            last = self.advance()
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                depth -= 1
                if depth == 0:
                    if self.at(";"):
                        last = self.advance()
                    break
            elif t.text == ";" and depth == 0:
                break
        if last is None:
            last = self.advance()  # guarantee progress
        return AstNode(NodeKind.OPAQUE_STMT, first.start, last.end)

    # --- expressions ------------------------------------------------------

    def parse_expr(self) -> AstNode:
        node = self.parse_assign()
        while self.at(","):
            self.advance()
            rhs = self.parse_assign()
            node = AstNode(
                NodeKind.BINARY_EXPR, node.start, rhs.end, [node, rhs], ",")
        return node

    def parse_assign(self) -> AstNode:
        lhs = self.parse_ternary()
        t = self.tok()
        if t.kind == "punct" and t.text in _ASSIGN_OPS:
            self.advance()
            rhs = self.parse_assign()
            return AstNode(
                NodeKind.ASSIGN_EXPR, lhs.start, rhs.end, [lhs, rhs], t.text)
        return lhs

    def parse_ternary(self) -> AstNode:
        cond = self.parse_binary(0)
        if self.at("?"):
            self.advance()
            then = self.parse_expr()
            self.eat(":")
            other = self.parse_ternary()
            return AstNode(
                NodeKind.BINARY_EXPR, cond.start, other.end,
                [cond, then, other], "?:")
        return cond

    def parse_binary(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        node = self.parse_binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.tok().kind == "punct" and self.tok().text in ops:
            op = self.advance().text
            rhs = self.parse_binary(level + 1)
            node = AstNode(
                NodeKind.BINARY_EXPR, node.start, rhs.end, [node, rhs], op)
        return node

    def parse_unary(self) -> AstNode:
        t = self.tok()
        if t.kind == "punct" and t.text in _UNARY_OPS:
            self.advance()
            child = self.parse_unary()
            return AstNode(
                NodeKind.UNARY_EXPR, t.start, child.end, [child], t.text)
        if t.text == "sizeof":
            self.advance()
            if self.at("("):
                last = self._skip_balanced("(", ")")
                return AstNode(
                    NodeKind.UNARY_EXPR, t.start, last.end, [], "sizeof")
            child = self.parse_unary()
            return AstNode(
                NodeKind.UNARY_EXPR, t.start, child.end, [child], "sizeof")
        return self.parse_postfix()

    def parse_postfix(self) -> AstNode:
        node = self.parse_primary()
        while True:
            t = self.tok()
            if t.text == "(":
                node = self._parse_call(node)
            elif t.text == "[":
                self.advance()
                idx = self.parse_expr()
                last = self.eat("]")
                node = AstNode(
                    NodeKind.INDEX_EXPR, node.start, last.end, [node, idx])
            elif t.text in (".", "->"):
                self.advance()
                field = self.tok()
                if field.kind != "ident":
                    raise _Reject("expected member name")
                self.advance()
                node = AstNode(
                    NodeKind.MEMBER_EXPR, node.start, field.end,
                    [node], field.text)
            elif t.text in ("++", "--"):
                self.advance()
                node = AstNode(
                    NodeKind.UNARY_EXPR, node.start, t.end, [node],
                    "post" + t.text)
            else:
                return node

    def _parse_call(self, callee: AstNode) -> AstNode:
        lparen = self.eat("(")
        args: list[AstNode] = []
        while not self.at(")") and self.tok().kind != "eof":
            args.append(self.parse_assign())
            if self.at(","):
                self.advance()
            else:
                break
        rparen = self.eat(")")
        arglist = AstNode(NodeKind.ARG_LIST, lparen.start, rparen.end, args)
        if callee.kind is NodeKind.IDENTIFIER and not callee.children:
            # Plain-name call: the callee identifier is carried in `name`,
            # leaving ArgList as the single child.
            return AstNode(
                NodeKind.CALL_EXPR, callee.start, rparen.end,
                [arglist], callee.name)
        return AstNode(
            NodeKind.CALL_EXPR, callee.start, rparen.end, [callee, arglist])

    def parse_primary(self) -> AstNode:
        t = self.tok()
        if t.kind == "ident":
            self.advance()
            return AstNode(NodeKind.IDENTIFIER, t.start, t.end, [], t.text)
        if t.kind in ("num", "str", "char"):
            self.advance()
            return AstNode(NodeKind.LITERAL, t.start, t.end, [], t.text)
        if t.text == "(":
            cast = self._try_cast(t)
            if cast is not None:
                return cast
            self.advance()
            node = self.parse_expr()
            self.eat(")")
            return node
        raise _Reject(f"unexpected token {t.text!r}")

    def _try_cast(self, lparen: Token) -> Optional[AstNode]:
        """Recognize `(type) expr`; parens around plain exprs return None."""
        i = self.pos + 1
        saw_type = False
        while i < len(self.toks):
            t = self.toks[i]
            if t.text == ")":
                break
            if t.kind == "ident" and (
                t.text in TYPE_KEYWORDS
                or t.text in QUALIFIERS
                or t.text in self.typedef_names
            ):
                saw_type = saw_type or t.text not in QUALIFIERS
                i += 1
                continue
            if t.text == "*":
                i += 1
                continue
            return None
        else:
            return None
        if not saw_type or i == self.pos + 1:
            return None
        after = self.toks[i + 1] if i + 1 < len(self.toks) else None
        if after is None or (
            after.kind not in ("ident", "num", "str", "char")
            and after.text not in _UNARY_OPS
            and after.text != "("
        ):
            return None
        type_text = " ".join(
            self.text[self.toks[self.pos + 1].start:self.toks[i - 1].end].split())
        self.pos = i + 1  # past ')'
        child = self.parse_unary()
        return AstNode(
            NodeKind.UNARY_EXPR, lparen.start, child.end, [child],
            f"cast:{type_text}")


def parse(path: str, text: Union[str, bytes]) -> SourceUnit:
    """Parse one translation unit into a span-preserving tree.

    Raises UnbalancedDelimiters when brace/paren/bracket nesting does not
    close; everything else degrades to OpaqueStmt nodes.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    toks = tokenize(text)
    _check_balance(path, text, toks)
    parser = _Parser(path, text, toks)
    root = parser.parse_unit()
    return SourceUnit(path=path, text=text, root=root)


def list_calls(unit: SourceUnit) -> list[tuple[Optional[str], AstNode]]:
    """All call expressions in document order (enclosing call first)."""
    return [(n.name, n) for n in unit.root.walk()
            if n.kind is NodeKind.CALL_EXPR]


def list_definitions(unit: SourceUnit) -> list[Definition]:
    """Function and struct definitions in document order; no prototypes."""
    out = []
    for n in unit.root.walk():
        if n.kind is NodeKind.FUNCTION_DEF:
            out.append(Definition(NodeKind.FUNCTION_DEF, n.name or "", n))
        elif n.kind is NodeKind.STRUCT_DEF:
            out.append(Definition(NodeKind.STRUCT_DEF, n.name or "", n))
    return out
