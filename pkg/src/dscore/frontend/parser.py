"""Recursive-descent parser for the decompiled-C subset."""

import re

from ..errors import DialectError, ParseError
from . import ast as A
from .lexer import TYPE_NAMES, Token, tokenize

_BASE_TYPES = {
    "char": A.I8, "short": A.I16, "int": A.I32, "long": A.I64,
    "undefined": A.U8, "undefined1": A.U8, "undefined2": A.U16,
    "undefined4": A.U32, "undefined8": A.U64,
    "byte": A.U8, "uchar": A.U8, "ushort": A.U16, "uint": A.U32,
    "ulong": A.U64, "bool": A.U8, "size_t": A.U64, "ssize_t": A.I64,
    "int8_t": A.I8, "int16_t": A.I16, "int32_t": A.I32, "int64_t": A.I64,
    "uint8_t": A.U8, "uint16_t": A.U16, "uint32_t": A.U32, "uint64_t": A.U64,
    "intptr_t": A.I64, "uintptr_t": A.U64, "uuid_t": A.U64,
    "code": A.CType("code-address", 64),
}

_PSEUDO = re.compile(r"^(CONCAT|SUB)([1-8])([1-8])$")

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}

_INT_MAX = {8: 0x7F, 16: 0x7FFF, 32: 0x7FFFFFFF, 64: 0x7FFFFFFFFFFFFFFF}


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0

    # --- token plumbing ---

    def peek(self, offset=0) -> Token:
        return self.toks[min(self.pos + offset, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("punct", "kw")

    def accept(self, text) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            tok = self.peek()
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return self.next()

    def fail(self, message):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    # --- types ---

    def at_type(self, offset=0) -> bool:
        tok = self.peek(offset)
        if tok.text in ("const", "volatile", "static", "extern", "struct", "union", "enum"):
            return True
        return tok.text in TYPE_NAMES and tok.kind in ("kw", "id")

    def parse_type(self) -> A.CType:
        while self.peek().text in ("const", "volatile", "static", "extern"):
            self.next()
        tok = self.peek()
        if tok.text in ("float", "double"):
            raise DialectError(f"floating-point type {tok.text!r}", tok.line, tok.col)
        if tok.text in ("struct", "union", "enum"):
            self.next()
            if self.peek().kind == "id":
                self.next()
            # struct values only legal behind a pointer in this dialect
            base = A.I8
        elif tok.text in ("signed", "unsigned"):
            signed = tok.text == "signed"
            self.next()
            width = 32
            if self.peek().text in ("char", "short", "int", "long"):
                width = _BASE_TYPES[self.next().text].width_bits
                if width == 64 and self.accept("long"):
                    pass
                self.accept("int")
            base = A.CType("signed-int" if signed else "unsigned-int", width)
        elif tok.text == "void":
            self.next()
            base = A.VOID
        elif tok.text == "long":
            self.next()
            self.accept("long")
            unsigned = self.accept("unsigned")
            self.accept("int")
            base = A.U64 if unsigned else A.I64
        elif tok.text in _BASE_TYPES:
            self.next()
            base = _BASE_TYPES[tok.text]
        else:
            self.fail(f"expected type, found {tok.text!r}")
        while self.peek().text in ("const", "volatile"):
            self.next()
        while self.accept("*"):
            base = base.pointer_to()
            while self.peek().text in ("const", "volatile"):
                self.next()
        return base

    # --- entry point ---

    def parse_function(self) -> A.FunctionAst:
        fn = None
        while self.peek().kind != "eof":
            mark = self.pos
            try:
                fn = self._try_function()
            except ParseError:
                fn = None
            if fn is not None:
                break
            # leading declaration / prototype: skip to matching ';'
            self.pos = mark
            self._skip_toplevel_decl()
        if fn is None:
            self.fail("no function definition found")
        _resolve(fn)
        return fn

    def _skip_toplevel_decl(self):
        depth = 0
        while self.peek().kind != "eof":
            tok = self.next()
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
            elif tok.text == ";" and depth == 0:
                return
        self.fail("unterminated declaration")

    def _try_function(self):
        ret = self.parse_type()
        name_tok = self.peek()
        if name_tok.kind != "id":
            return None
        self.next()
        if not self.at("("):
            return None
        self.next()
        params = self._parse_params()
        if not self.at("{"):
            return None
        body = self.parse_block()
        return A.FunctionAst(name_tok.text, params, ret, body)

    def _parse_params(self) -> list:
        params = []
        if self.accept(")"):
            return params
        if self.at("void") and self.peek(1).text == ")":
            self.next()
            self.expect(")")
            return params
        while True:
            ptype = self.parse_type()
            pname = ""
            if self.peek().kind == "id":
                pname = self.next().text
            if self.accept("["):
                self.expect_int_or_empty()
                ptype = ptype.pointer_to()
            params.append(A.Param(pname, ptype))
            if self.accept(")"):
                return params
            self.expect(",")

    def expect_int_or_empty(self):
        if self.peek().kind == "int":
            self.next()
        self.expect("]")

    # --- statements ---

    def parse_block(self) -> A.Block:
        self.expect("{")
        stmts = []
        while not self.accept("}"):
            if self.peek().kind == "eof":
                self.fail("unterminated block")
            stmts.append(self.parse_stmt())
        return A.Block(stmts)

    def parse_stmt(self):
        tok = self.peek()
        if self.at("{"):
            return self.parse_block()
        if self.accept(";"):
            return A.Block([])
        if self.at("if"):
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_stmt()
            other = self.parse_stmt() if self.accept("else") else None
            return A.If(cond, then, other)
        if self.at("while"):
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            return A.While(cond, self.parse_stmt())
        if self.at("do"):
            self.next()
            body = self.parse_stmt()
            self.expect("while")
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return A.DoWhile(body, cond)
        if self.at("for"):
            self.next()
            self.expect("(")
            init = None
            if not self.at(";"):
                if self.at_type() and not _PSEUDO.match(self.peek().text):
                    init = self.parse_decl()
                else:
                    init = A.ExprStmt(self.parse_expr())
                    self.expect(";")
            else:
                self.next()
            cond = None if self.at(";") else self.parse_expr()
            self.expect(";")
            step = None if self.at(")") else self.parse_expr()
            self.expect(")")
            init_expr = init.expr if isinstance(init, A.ExprStmt) else init
            return A.For(init_expr, cond, step, self.parse_stmt())
        if self.at("return"):
            self.next()
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return A.Return(value)
        if self.at("goto"):
            self.next()
            label = self.next()
            if label.kind != "id":
                self.fail("expected label name")
            self.expect(";")
            return A.Goto(label.text)
        if self.at("break"):
            self.next()
            self.expect(";")
            return A.Break()
        if self.at("continue"):
            self.next()
            self.expect(";")
            return A.Continue()
        if self.at("switch"):
            return self.parse_switch()
        if tok.kind == "id" and self.peek(1).text == ":" and self.peek(2).text != ":":
            self.next()
            self.next()
            stmt = None
            if not self.at("}"):
                stmt = self.parse_stmt()
            return A.Label(tok.text, stmt)
        if self.at_type() and self._looks_like_decl():
            return self.parse_decl()
        expr = self.parse_expr()
        self.expect(";")
        return A.ExprStmt(expr)

    def _looks_like_decl(self) -> bool:
        # distinguish "ulong x;" from "undefined8 = 1;" style misuse and
        # from expressions starting with a typedef-named identifier
        i = 0
        while self.peek(i).text in ("const", "volatile", "static", "extern"):
            i += 1
        if self.peek(i).text in ("struct", "union", "enum"):
            return True
        if not (self.peek(i).text in TYPE_NAMES and self.peek(i).kind in ("kw", "id")):
            return False
        i += 1
        while self.peek(i).text in ("unsigned", "signed", "int", "long", "char", "short",
                                    "const", "volatile"):
            i += 1
        while self.peek(i).text == "*":
            i += 1
        return self.peek(i).kind == "id"

    def parse_decl(self) -> A.Decl:
        base = self.parse_type()
        declarators = []
        while True:
            ctype = base
            while self.accept("*"):
                ctype = ctype.pointer_to()
            name = self.next()
            if name.kind != "id":
                raise ParseError("expected declarator name", name.line, name.col)
            array_len = 0
            if self.accept("["):
                if self.peek().kind == "int":
                    array_len = self.next().value
                self.expect("]")
            init = None
            if self.accept("="):
                init = self.parse_assignment()
            declarators.append(A.Declarator(name.text, ctype, array_len, init))
            if self.accept(";"):
                return A.Decl(declarators)
            self.expect(",")

    def parse_switch(self) -> A.Switch:
        self.expect("switch")
        self.expect("(")
        value = self.parse_expr()
        self.expect(")")
        self.expect("{")
        cases = []
        current = None
        while not self.accept("}"):
            if self.accept("case"):
                lit = self.parse_ternary()
                self.expect(":")
                current = (lit, [])
                cases.append(current)
            elif self.accept("default"):
                self.expect(":")
                current = (None, [])
                cases.append(current)
            else:
                if current is None:
                    self.fail("statement before first case")
                current[1].append(self.parse_stmt())
        return A.Switch(value, cases)

    # --- expressions, by precedence ---

    def parse_expr(self):
        first = self.parse_assignment()
        if not self.at(","):
            return first
        parts = [first]
        while self.accept(","):
            parts.append(self.parse_assignment())
        return A.Comma(parts)

    def parse_assignment(self):
        left = self.parse_ternary()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in _ASSIGN_OPS:
            self.next()
            return A.Assign(tok.text, left, self.parse_assignment())
        return left

    def parse_ternary(self):
        cond = self.parse_binary(0)
        if self.accept("?"):
            then = self.parse_expr()
            self.expect(":")
            return A.Ternary(cond, then, self.parse_assignment())
        return cond

    _LEVELS = [
        ["||"], ["&&"], ["|"], ["^"], ["&"],
        ["==", "!="], ["<", "<=", ">", ">="],
        ["<<", ">>"], ["+", "-"], ["*", "/", "%"],
    ]

    def parse_binary(self, level):
        if level >= len(self._LEVELS):
            return self.parse_cast()
        left = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text in self._LEVELS[level]:
                self.next()
                right = self.parse_binary(level + 1)
                left = A.Binary(tok.text, left, right)
            else:
                return left

    def parse_cast(self):
        if self.at("(") and self.at_type(1):
            mark = self.pos
            self.next()
            try:
                ctype = self.parse_type()
                self.expect(")")
            except ParseError:
                self.pos = mark
                return self.parse_unary()
            return A.Cast(ctype, self.parse_cast())
        return self.parse_unary()

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("-", "+", "~", "!", "*", "&"):
            self.next()
            return A.Unary(tok.text, self.parse_cast())
        if tok.kind == "punct" and tok.text in ("++", "--"):
            self.next()
            return A.Unary(tok.text, self.parse_cast(), prefix=True)
        if self.at("sizeof"):
            self.next()
            if self.at("(") and self.at_type(1):
                self.expect("(")
                ctype = self.parse_type()
                array_len = 0
                if self.accept("["):
                    if self.peek().kind == "int":
                        array_len = self.next().value
                    self.expect("]")
                self.expect(")")
                return A.SizeofType(ctype, array_len)
            self.expect("(")
            expr = self.parse_expr()
            self.expect(")")
            return A.SizeofExpr(expr)
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_primary()
        while True:
            if self.at("["):
                self.next()
                index = self.parse_expr()
                self.expect("]")
                expr = A.Subscript(expr, index)
            elif self.at("++") or self.at("--"):
                expr = A.Unary(self.next().text, expr, prefix=False)
            elif self.at("->") or self.at("."):
                tok = self.peek()
                raise DialectError("struct member access", tok.line, tok.col)
            else:
                return expr

    def parse_primary(self):
        tok = self.next()
        if tok.kind == "int":
            return A.IntLit(tok.value, _literal_type(tok), tok.text)
        if tok.kind == "char":
            return A.IntLit(tok.value, A.I32, tok.text)
        if tok.kind == "str":
            return A.StrLit(tok.value)
        if tok.text == "(":
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if tok.kind == "id":
            if tok.text == "NULL":
                return A.IntLit(0, A.I64, "0")
            m = _PSEUDO.match(tok.text)
            if m and self.at("("):
                return self._parse_pseudo(m)
            if self.at("("):
                self.next()
                args = []
                if not self.accept(")"):
                    while True:
                        args.append(self.parse_assignment())
                        if self.accept(")"):
                            break
                        self.expect(",")
                return A.Call(tok.text, args)
            return A.Ident(tok.text)
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)

    def _parse_pseudo(self, m):
        op, first, second = m.group(1), int(m.group(2)), int(m.group(3))
        self.expect("(")
        a = self.parse_assignment()
        self.expect(",")
        b = self.parse_assignment()
        self.expect(")")
        if op == "CONCAT":
            return A.ConcatOp(first, second, a, b)
        return A.ExtractOp(first, second, a, b)


def _literal_type(tok: Token) -> A.CType:
    text = tok.text
    unsigned = "u" in text or "U" in text
    value = tok.value
    if text.lower().startswith("0x"):
        # hex literals take the smallest fitting C type, unsigned if the
        # value exceeds the signed range at that width
        for width in (32, 64):
            if value <= _INT_MAX[width]:
                return A.CType("unsigned-int", width) if unsigned else A.CType("signed-int", width)
            if value < 1 << width:
                return A.CType("unsigned-int", width)
        raise ParseError(f"literal {text} does not fit 64 bits", tok.line, tok.col)
    longish = "l" in text or "L" in text
    width = 64 if longish or value > _INT_MAX[32] else 32
    if value >= 1 << width:
        raise ParseError(f"literal {text} does not fit {width} bits", tok.line, tok.col)
    return A.CType("unsigned-int", width) if unsigned else A.CType("signed-int", width)


def _resolve(fn: A.FunctionAst):
    """Record locals/labels/externals and check goto targets."""
    names = {p.name for p in fn.params}
    for node in A.walk(fn):
        if isinstance(node, A.Decl):
            for d in node.declarators:
                fn.locals[d.name] = d
                names.add(d.name)
        elif isinstance(node, A.Label):
            fn.labels.add(node.name)
    for node in A.walk(fn):
        if isinstance(node, A.Goto) and node.label not in fn.labels:
            raise ParseError(f"goto targets undefined label {node.label!r}")
        if isinstance(node, A.Call) and node.callee != fn.name:
            fn.externals.add(node.callee)
        if isinstance(node, A.Ident) and node.name not in names:
            fn.externals.add(node.name)


def parse_function(src: str) -> A.FunctionAst:
    """Parse one function definition from decompiled source text."""
    if not src or not src.strip():
        raise ParseError("empty source")
    return Parser(src).parse_function()
