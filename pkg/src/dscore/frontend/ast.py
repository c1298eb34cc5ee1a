"""AST node definitions, pretty printing, and JSON dumps."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CType:
    kind: str                 # "signed-int", "unsigned-int", "void", "code-address"
    width_bits: int = 64      # 8, 16, 32, 64
    indirection: int = 0

    def __post_init__(self):
        if self.kind != "void" and self.width_bits not in (8, 16, 32, 64):
            raise ValueError(f"bad width {self.width_bits}")

    @property
    def is_pointer(self) -> bool:
        return self.indirection > 0

    @property
    def is_void(self) -> bool:
        return self.kind == "void" and self.indirection == 0

    @property
    def is_signed(self) -> bool:
        return self.kind == "signed-int" and self.indirection == 0

    def pointee(self) -> "CType":
        assert self.indirection > 0
        return CType(self.kind, self.width_bits, self.indirection - 1)

    def pointer_to(self) -> "CType":
        return CType(self.kind, self.width_bits, self.indirection + 1)

    @property
    def value_width(self) -> int:
        """Width of a value of this type when held in a register."""
        return 64 if self.indirection > 0 or self.kind == "code-address" else self.width_bits

    def sizeof(self) -> int:
        if self.indirection > 0 or self.kind == "code-address":
            return 8
        if self.kind == "void":
            return 1
        return self.width_bits // 8


VOID = CType("void", 64)
I8 = CType("signed-int", 8)
I16 = CType("signed-int", 16)
I32 = CType("signed-int", 32)
I64 = CType("signed-int", 64)
U8 = CType("unsigned-int", 8)
U16 = CType("unsigned-int", 16)
U32 = CType("unsigned-int", 32)
U64 = CType("unsigned-int", 64)


class Node:
    kind = "node"

    def children(self):
        return []


# --- expressions ---

@dataclass
class IntLit(Node):
    value: int
    ctype: CType = I32
    text: str = ""
    kind = "int-lit"


@dataclass
class StrLit(Node):
    value: str
    kind = "str-lit"


@dataclass
class Ident(Node):
    name: str
    kind = "ident"


@dataclass
class Unary(Node):
    op: str          # "-", "+", "~", "!", "*", "&", "++", "--"
    operand: Node
    prefix: bool = True
    kind = "unary"

    def children(self):
        return [self.operand]


@dataclass
class Binary(Node):
    op: str
    left: Node
    right: Node
    kind = "binary"

    def children(self):
        return [self.left, self.right]


@dataclass
class Assign(Node):
    op: str          # "=", "+=", ...
    target: Node
    value: Node
    kind = "assign"

    def children(self):
        return [self.target, self.value]


@dataclass
class Ternary(Node):
    cond: Node
    then: Node
    other: Node
    kind = "ternary"

    def children(self):
        return [self.cond, self.then, self.other]


@dataclass
class Cast(Node):
    ctype: CType
    expr: Node
    kind = "cast"

    def children(self):
        return [self.expr]


@dataclass
class Call(Node):
    callee: str
    args: list
    kind = "call"

    def children(self):
        return list(self.args)


@dataclass
class ConcatOp(Node):
    """CONCATn-m(hi, lo): n high bytes glued above m low bytes."""
    hi_bytes: int
    lo_bytes: int
    hi: Node
    lo: Node
    kind = "concat-op"

    def children(self):
        return [self.hi, self.lo]


@dataclass
class ExtractOp(Node):
    """SUBn-m(src, k): m bytes of an n-byte value at byte offset k."""
    src_bytes: int
    out_bytes: int
    src: Node
    offset: Node
    kind = "extract-op"

    def children(self):
        return [self.src, self.offset]


@dataclass
class Subscript(Node):
    base: Node
    index: Node
    kind = "subscript"

    def children(self):
        return [self.base, self.index]


@dataclass
class SizeofType(Node):
    ctype: CType
    array_len: int = 0
    kind = "sizeof-type"


@dataclass
class SizeofExpr(Node):
    expr: Node
    kind = "sizeof-expr"

    def children(self):
        return [self.expr]


@dataclass
class Comma(Node):
    parts: list
    kind = "comma"

    def children(self):
        return list(self.parts)


# --- statements ---

@dataclass
class Block(Node):
    stmts: list
    kind = "block"

    def children(self):
        return list(self.stmts)


@dataclass
class Declarator:
    name: str
    ctype: CType
    array_len: int = 0   # 0 means scalar
    init: Node = None


@dataclass
class Decl(Node):
    declarators: list
    kind = "decl"

    def children(self):
        return [d.init for d in self.declarators if d.init is not None]


@dataclass
class ExprStmt(Node):
    expr: Node
    kind = "expr-stmt"

    def children(self):
        return [self.expr]


@dataclass
class If(Node):
    cond: Node
    then: Node
    other: Node = None
    kind = "if"

    def children(self):
        return [self.cond, self.then] + ([self.other] if self.other else [])


@dataclass
class While(Node):
    cond: Node
    body: Node
    kind = "while"

    def children(self):
        return [self.cond, self.body]


@dataclass
class DoWhile(Node):
    body: Node
    cond: Node
    kind = "do-while"

    def children(self):
        return [self.body, self.cond]


@dataclass
class For(Node):
    init: Node
    cond: Node
    step: Node
    body: Node
    kind = "for"

    def children(self):
        return [n for n in (self.init, self.cond, self.step, self.body) if n is not None]


@dataclass
class Return(Node):
    value: Node = None
    kind = "return"

    def children(self):
        return [self.value] if self.value is not None else []


@dataclass
class Goto(Node):
    label: str
    kind = "goto"


@dataclass
class Label(Node):
    name: str
    stmt: Node
    kind = "label"

    def children(self):
        return [self.stmt] if self.stmt is not None else []


@dataclass
class Break(Node):
    kind = "break"


@dataclass
class Continue(Node):
    kind = "continue"


@dataclass
class Switch(Node):
    value: Node
    cases: list          # list of (IntLit-or-None-for-default, [stmts])
    kind = "switch"

    def children(self):
        out = [self.value]
        for _, stmts in self.cases:
            out.extend(stmts)
        return out


@dataclass
class Param:
    name: str
    ctype: CType


@dataclass
class FunctionAst(Node):
    name: str
    params: list
    return_type: CType
    body: Block
    locals: dict = field(default_factory=dict)      # name -> Declarator
    labels: set = field(default_factory=set)
    externals: set = field(default_factory=set)     # unresolved identifiers
    kind = "function"

    def children(self):
        return [self.body]


def walk(node):
    """Yield node and all descendants, pre-order."""
    yield node
    for child in node.children():
        yield from walk(child)


# --- JSON dump (stable field names: kind, children, literal, width) ---

def to_json(node) -> dict:
    out = {"kind": node.kind}
    if isinstance(node, IntLit):
        out["literal"] = node.value
        out["width"] = node.ctype.width_bits
    elif isinstance(node, StrLit):
        out["literal"] = node.value
    elif isinstance(node, Ident):
        out["literal"] = node.name
    elif isinstance(node, (Unary, Binary, Assign)):
        out["literal"] = node.op
    elif isinstance(node, Call):
        out["literal"] = node.callee
    elif isinstance(node, Cast):
        out["literal"] = type_name(node.ctype)
        out["width"] = node.ctype.value_width
    elif isinstance(node, (Goto, Label)):
        out["literal"] = node.label if isinstance(node, Goto) else node.name
    elif isinstance(node, FunctionAst):
        out["literal"] = node.name
    elif isinstance(node, Decl):
        out["literal"] = ",".join(d.name for d in node.declarators)
    children = [to_json(c) for c in node.children() if isinstance(c, Node)]
    if children:
        out["children"] = children
    return out


# --- pretty printer ---

_BASE_NAMES = {
    ("signed-int", 8): "char",
    ("signed-int", 16): "short",
    ("signed-int", 32): "int",
    ("signed-int", 64): "long",
    ("unsigned-int", 8): "unsigned char",
    ("unsigned-int", 16): "unsigned short",
    ("unsigned-int", 32): "unsigned int",
    ("unsigned-int", 64): "unsigned long",
}


def type_name(t: CType) -> str:
    if t.kind == "void":
        base = "void"
    elif t.kind == "code-address":
        base = "code"
    else:
        base = _BASE_NAMES[(t.kind, t.width_bits)]
    return base + " " + "*" * t.indirection if t.indirection else base


class PrettyPrinter:
    def __init__(self):
        self.lines = []
        self.depth = 0

    def emit(self, text):
        self.lines.append("  " * self.depth + text)

    def function(self, fn: FunctionAst) -> str:
        params = ", ".join(f"{type_name(p.ctype)} {p.name}" for p in fn.params) or "void"
        self.emit(f"{type_name(fn.return_type)} {fn.name}({params})")
        self.stmt(fn.body)
        return "\n".join(self.lines) + "\n"

    def stmt(self, s):
        if isinstance(s, Block):
            self.emit("{")
            self.depth += 1
            for sub in s.stmts:
                self.stmt(sub)
            self.depth -= 1
            self.emit("}")
        elif isinstance(s, Decl):
            for d in s.declarators:
                suffix = f"[{d.array_len}]" if d.array_len else ""
                init = f" = {self.expr(d.init)}" if d.init is not None else ""
                self.emit(f"{type_name(d.ctype)} {d.name}{suffix}{init};")
        elif isinstance(s, ExprStmt):
            self.emit(self.expr(s.expr) + ";")
        elif isinstance(s, If):
            self.emit(f"if ({self.expr(s.cond)})")
            self.stmt(_blockify(s.then))
            if s.other is not None:
                self.emit("else")
                self.stmt(_blockify(s.other))
        elif isinstance(s, While):
            self.emit(f"while ({self.expr(s.cond)})")
            self.stmt(_blockify(s.body))
        elif isinstance(s, DoWhile):
            self.emit("do")
            self.stmt(_blockify(s.body))
            self.emit(f"while ({self.expr(s.cond)});")
        elif isinstance(s, For):
            init = self.expr(s.init) if s.init is not None else ""
            cond = self.expr(s.cond) if s.cond is not None else ""
            step = self.expr(s.step) if s.step is not None else ""
            self.emit(f"for ({init}; {cond}; {step})")
            self.stmt(_blockify(s.body))
        elif isinstance(s, Return):
            self.emit("return" + (f" {self.expr(s.value)}" if s.value is not None else "") + ";")
        elif isinstance(s, Goto):
            self.emit(f"goto {s.label};")
        elif isinstance(s, Label):
            self.emit(f"{s.name}:")
            if s.stmt is not None:
                self.stmt(s.stmt)
        elif isinstance(s, Break):
            self.emit("break;")
        elif isinstance(s, Continue):
            self.emit("continue;")
        elif isinstance(s, Switch):
            self.emit(f"switch ({self.expr(s.value)})")
            self.emit("{")
            self.depth += 1
            for lit, stmts in s.cases:
                self.emit(f"case {self.expr(lit)}:" if lit is not None else "default:")
                self.depth += 1
                for sub in stmts:
                    self.stmt(sub)
                self.depth -= 1
            self.depth -= 1
            self.emit("}")
        else:
            raise TypeError(f"unprintable statement {s!r}")

    def expr(self, e) -> str:
        if isinstance(e, IntLit):
            return e.text or str(e.value)
        if isinstance(e, StrLit):
            return '"' + e.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
        if isinstance(e, Ident):
            return e.name
        if isinstance(e, Unary):
            inner = self.expr(e.operand)
            if e.prefix:
                return f"({e.op}{inner})"
            return f"({inner}{e.op})"
        if isinstance(e, Binary):
            return f"({self.expr(e.left)} {e.op} {self.expr(e.right)})"
        if isinstance(e, Assign):
            return f"{self.expr(e.target)} {e.op} {self.expr(e.value)}"
        if isinstance(e, Ternary):
            return f"({self.expr(e.cond)} ? {self.expr(e.then)} : {self.expr(e.other)})"
        if isinstance(e, Cast):
            return f"(({type_name(e.ctype)}){self.expr(e.expr)})"
        if isinstance(e, Call):
            return f"{e.callee}({', '.join(self.expr(a) for a in e.args)})"
        if isinstance(e, ConcatOp):
            return f"CONCAT{e.hi_bytes}{e.lo_bytes}({self.expr(e.hi)},{self.expr(e.lo)})"
        if isinstance(e, ExtractOp):
            return f"SUB{e.src_bytes}{e.out_bytes}({self.expr(e.src)},{self.expr(e.offset)})"
        if isinstance(e, Subscript):
            return f"{self.expr(e.base)}[{self.expr(e.index)}]"
        if isinstance(e, SizeofType):
            suffix = f"[{e.array_len}]" if e.array_len else ""
            return f"sizeof({type_name(e.ctype)}{suffix})"
        if isinstance(e, SizeofExpr):
            return f"sizeof({self.expr(e.expr)})"
        if isinstance(e, Comma):
            return "(" + ", ".join(self.expr(p) for p in e.parts) + ")"
        raise TypeError(f"unprintable expression {e!r}")


def _blockify(s):
    return s if isinstance(s, Block) else Block([s])


def pretty_print(fn: FunctionAst) -> str:
    return PrettyPrinter().function(fn)
