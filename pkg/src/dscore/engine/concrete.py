"""Concrete big-step interpreter over native Python integers.

Kept deliberately independent of the symbolic executor: same language,
separate evaluation code, so the two routes can cross-check each other.
Addresses are concrete 64-bit integers; memory is a byte dict seeded
from ``initial_memory`` and defaulting every untouched byte to zero.
"""

from collections import Counter
from dataclasses import dataclass

from ..errors import EngineFailure
from ..frontend import ast as A

_M64 = (1 << 64) - 1


@dataclass
class ConcreteConfig:
    unroll_bound: int = 32
    external_return_value: int = 0
    max_steps: int = 1_000_000


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Goto(Exception):
    def __init__(self, label):
        self.label = label


def _mask(v, w):
    return v & ((1 << w) - 1)


def _signed(v, w):
    v = _mask(v, w)
    return v - (1 << w) if v >= (1 << (w - 1)) else v


class _Cell:
    __slots__ = ("value", "ctype")

    def __init__(self, value, ctype):
        self.value = value
        self.ctype = ctype


class Interpreter:
    _HEAP_BASE = 0x2_0000_0000
    _HEAP_STRIDE = 0x10_0000

    def __init__(self, fn: A.FunctionAst, args, cfg: ConcreteConfig, initial_memory=None):
        self.fn = fn
        self.cfg = cfg
        self.env = {}
        self.memory = dict(initial_memory or {})
        self.counts = Counter()
        self.steps = 0
        self.allocs = {}
        if len(args) != len(fn.params):
            raise ValueError(f"{fn.name} takes {len(fn.params)} arguments, got {len(args)}")
        for p, v in zip(fn.params, args):
            self.env[p.name] = _Cell(_mask(int(v), p.ctype.value_width), p.ctype)

    def run(self):
        try:
            self.exec_block(self.fn.body.stmts)
        except _Return as r:
            return r.value, self.counts
        except (_Break, _Continue):
            raise EngineFailure(EngineFailure.UNSUPPORTED, "break/continue outside loop")
        except _Goto as g:
            raise EngineFailure(EngineFailure.UNSUPPORTED, f"goto {g.label!r} out of scope")
        if self.fn.return_type.is_void:
            return None, self.counts
        return 0, self.counts

    # --- helpers ---

    def _tick(self):
        self.steps += 1
        if self.steps > self.cfg.max_steps:
            raise EngineFailure(EngineFailure.TIMEOUT, "concrete step budget exhausted")

    def _alloc(self, key):
        found = self.allocs.get(key)
        if found is None:
            found = self._HEAP_BASE + len(self.allocs) * self._HEAP_STRIDE
            self.allocs[key] = found
        return found

    def _load(self, addr, width):
        out = 0
        for k in range(width // 8):
            out |= self.memory.get((addr + k) & _M64, 0) << (8 * k)
        return out

    def _store(self, addr, value, width):
        for k in range(width // 8):
            self.memory[(addr + k) & _M64] = (value >> (8 * k)) & 0xFF

    # --- statements ---

    def exec_block(self, stmts):
        i = 0
        labels = {s.name: j for j, s in enumerate(stmts) if isinstance(s, A.Label)}
        while i < len(stmts):
            try:
                self.exec_stmt(stmts[i])
            except _Goto as g:
                if g.label not in labels:
                    raise
                i = labels[g.label]
                continue
            i += 1

    def exec_stmt(self, stmt):
        self._tick()
        if isinstance(stmt, A.Block):
            self.exec_block(stmt.stmts)
        elif isinstance(stmt, A.Decl):
            for d in stmt.declarators:
                if d.array_len:
                    addr = self._alloc(f"local:{d.name}")
                    self.env[d.name] = ("array", addr, d.ctype, d.array_len)
                else:
                    value = 0
                    if d.init is not None:
                        v, vt = self.eval(d.init)
                        value = _mask(v, d.ctype.value_width)
                    self.env[d.name] = _Cell(value, d.ctype)
        elif isinstance(stmt, A.ExprStmt):
            self.eval(stmt.expr)
        elif isinstance(stmt, A.If):
            v, _ = self.eval(stmt.cond)
            if v != 0:
                self.exec_stmt(stmt.then)
            elif stmt.other is not None:
                self.exec_stmt(stmt.other)
        elif isinstance(stmt, A.While):
            self._loop(cond=stmt.cond, body=stmt.body, step=None, post=False)
        elif isinstance(stmt, A.DoWhile):
            self._loop(cond=stmt.cond, body=stmt.body, step=None, post=True)
        elif isinstance(stmt, A.For):
            if stmt.init is not None:
                if isinstance(stmt.init, A.Decl):
                    self.exec_stmt(stmt.init)
                else:
                    self.eval(stmt.init)
            self._loop(cond=stmt.cond, body=stmt.body, step=stmt.step, post=False)
        elif isinstance(stmt, A.Return):
            if stmt.value is None or self.fn.return_type.is_void:
                if stmt.value is not None:
                    self.eval(stmt.value)
                raise _Return(None)
            v, vt = self.eval(stmt.value)
            w = self.fn.return_type.value_width
            raise _Return(_mask(_signed(v, vt.value_width) if vt.is_signed else v, w))
        elif isinstance(stmt, A.Goto):
            raise _Goto(stmt.label)
        elif isinstance(stmt, A.Label):
            if stmt.stmt is not None:
                self.exec_stmt(stmt.stmt)
        elif isinstance(stmt, A.Break):
            raise _Break()
        elif isinstance(stmt, A.Continue):
            raise _Continue()
        elif isinstance(stmt, A.Switch):
            self._switch(stmt)
        else:
            raise EngineFailure(EngineFailure.UNSUPPORTED, f"statement {stmt.kind}")

    def _loop(self, cond, body, step, post):
        iters = 0
        first = post
        while True:
            if not first:
                if cond is not None:
                    v, _ = self.eval(cond)
                    if v == 0:
                        return
                if iters >= self.cfg.unroll_bound:
                    raise EngineFailure(EngineFailure.PATH_EXPLOSION,
                                        "loop exceeded unroll bound")
            first = False
            try:
                self.exec_stmt(body)
            except _Break:
                return
            except _Continue:
                pass
            if step is not None:
                self.eval(step)
            iters += 1
            if post:
                v, _ = self.eval(cond)
                if v == 0:
                    return
                if iters >= self.cfg.unroll_bound:
                    raise EngineFailure(EngineFailure.PATH_EXPLOSION,
                                        "loop exceeded unroll bound")
                first = True

    def _switch(self, stmt):
        v, vt = self.eval(stmt.value)
        entry = None
        default = None
        for i, (lit, _) in enumerate(stmt.cases):
            if lit is None:
                default = i
            elif _mask(lit.value, vt.value_width) == _mask(v, vt.value_width):
                entry = i
                break
        if entry is None:
            entry = default
        if entry is None:
            return
        try:
            for _, stmts in stmt.cases[entry:]:
                for s in stmts:
                    self.exec_stmt(s)
        except _Break:
            pass

    # --- expressions: eval returns (value masked to width, ctype) ---

    def eval(self, e):
        self._tick()
        if isinstance(e, A.IntLit):
            return _mask(e.value, e.ctype.value_width), e.ctype
        if isinstance(e, A.StrLit):
            base = self._alloc(f"str:{e.value!r}")
            data = e.value.encode("utf-8", "surrogateescape") + b"\x00"
            for k, byte in enumerate(data):
                self.memory.setdefault((base + k) & _M64, byte)
            return base, A.I8.pointer_to()
        if isinstance(e, A.Ident):
            slot = self.env.get(e.name)
            if slot is None:
                return 0, A.I64     # unresolved global reads as zero
            if isinstance(slot, tuple):
                _, addr, ctype, _n = slot
                return addr, ctype.pointer_to()
            return slot.value, slot.ctype
        if isinstance(e, A.SizeofType):
            return e.ctype.sizeof() * (e.array_len or 1), A.U64
        if isinstance(e, A.SizeofExpr):
            return self._static_sizeof(e.expr), A.U64
        if isinstance(e, A.Cast):
            v, vt = self.eval(e.expr)
            w = e.ctype.value_width
            return _mask(_signed(v, vt.value_width) if vt.is_signed else v, w), e.ctype
        if isinstance(e, A.Comma):
            out = (0, A.I32)
            for part in e.parts:
                out = self.eval(part)
            return out
        if isinstance(e, A.Call):
            if e.callee == self.fn.name:
                raise EngineFailure(EngineFailure.UNSUPPORTED, "recursion")
            for arg in e.args:
                self.eval(arg)
            self.counts[e.callee] += 1
            return _mask(self.cfg.external_return_value, 64), A.I64
        if isinstance(e, A.ConcatOp):
            hi, _ = self.eval(e.hi)
            lo, _ = self.eval(e.lo)
            width = (e.hi_bytes + e.lo_bytes) * 8
            if width > 64:
                raise EngineFailure(EngineFailure.UNSUPPORTED, "concat wider than 64 bits")
            return (_mask(hi, e.hi_bytes * 8) << (e.lo_bytes * 8)) | _mask(lo, e.lo_bytes * 8), \
                A.CType("unsigned-int", width)
        if isinstance(e, A.ExtractOp):
            src, _ = self.eval(e.src)
            off, _ = self.eval(e.offset)
            src = _mask(src, e.src_bytes * 8)
            return _mask(src >> (8 * off), e.out_bytes * 8), \
                A.CType("unsigned-int", e.out_bytes * 8)
        if isinstance(e, A.Ternary):
            v, _ = self.eval(e.cond)
            return self.eval(e.then if v != 0 else e.other)
        if isinstance(e, A.Unary):
            return self._unary(e)
        if isinstance(e, A.Binary):
            return self._binary(e)
        if isinstance(e, A.Assign):
            return self._assign(e)
        if isinstance(e, A.Subscript):
            addr, ctype = self._subscript_addr(e)
            return self._load(addr, ctype.value_width), ctype
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"expression {e.kind}")

    def _static_sizeof(self, e):
        if isinstance(e, A.Ident):
            slot = self.env.get(e.name)
            if slot is None:
                return 8
            if isinstance(slot, tuple):
                return slot[2].sizeof() * slot[3]
            return slot.ctype.sizeof()
        if isinstance(e, A.Cast):
            return e.ctype.sizeof()
        if isinstance(e, A.IntLit):
            return e.ctype.sizeof()
        raise EngineFailure(EngineFailure.UNSUPPORTED, "sizeof of complex expression")

    def _unary(self, e):
        op = e.op
        if op in ("++", "--"):
            loc = self._lvalue(e.operand)
            old, ctype = self._read(loc)
            step = ctype.pointee().sizeof() if ctype.is_pointer else 1
            new = _mask(old + step if op == "++" else old - step, ctype.value_width)
            self._write(loc, new)
            return (new if e.prefix else old), ctype
        if op == "*":
            v, vt = self.eval(e.operand)
            if not vt.is_pointer:
                raise EngineFailure(EngineFailure.UNSUPPORTED, "dereference of non-pointer")
            pointee = vt.pointee()
            return self._load(v, pointee.value_width), pointee
        if op == "&":
            loc = self._lvalue(e.operand)
            if loc[0] != "mem":
                raise EngineFailure(EngineFailure.UNSUPPORTED, "address of register local")
            return loc[1], loc[2].pointer_to()
        v, vt = self.eval(e.operand)
        if op == "-":
            w = max(32, vt.value_width)
            return _mask(-self._extend(v, vt, w), w), _promote(vt)
        if op == "+":
            return v, vt
        if op == "~":
            w = max(32, vt.value_width)
            return _mask(~self._extend(v, vt, w), w), _promote(vt)
        if op == "!":
            return (0 if v != 0 else 1), A.I32
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"unary {op}")

    @staticmethod
    def _extend(v, vt, w):
        return _signed(v, vt.value_width) if vt.is_signed else v

    def _binary(self, e):
        op = e.op
        if op == "&&":
            v, _ = self.eval(e.left)
            if v == 0:
                return 0, A.I32
            v, _ = self.eval(e.right)
            return (1 if v != 0 else 0), A.I32
        if op == "||":
            v, _ = self.eval(e.left)
            if v != 0:
                return 1, A.I32
            v, _ = self.eval(e.right)
            return (1 if v != 0 else 0), A.I32
        lv, lt = self.eval(e.left)
        rv, rt = self.eval(e.right)
        return self._apply(op, lv, lt, rv, rt)

    def _apply(self, op, lv, lt, rv, rt):
        if op in ("<<", ">>"):
            w = max(32, lt.value_width)
            a = self._extend(lv, lt, w)
            sh = _mask(self._extend(rv, rt, 64), 64)
            if op == "<<":
                return _mask(a << sh if sh < w else 0, w), _promote(lt)
            if lt.is_signed:
                sa = _signed(a, w)
                return _mask(sa >> sh if sh < w else (-1 if sa < 0 else 0), w), _promote(lt)
            return (_mask(a, w) >> sh if sh < w else 0), _promote(lt)
        if lt.is_pointer or rt.is_pointer:
            return self._pointer_apply(op, lv, lt, rv, rt)
        ct = _common_type(lt, rt)
        w = ct.value_width
        if ct.is_signed:
            a, b = _signed(self._extend(lv, lt, w), w), _signed(self._extend(rv, rt, w), w)
        else:
            a, b = _mask(self._extend(lv, lt, w), w), _mask(self._extend(rv, rt, w), w)
        if op in ("==", "!=", "<", "<=", ">", ">="):
            res = {"==": a == b, "!=": a != b, "<": a < b,
                   "<=": a <= b, ">": a > b, ">=": a >= b}[op]
            return (1 if res else 0), A.I32
        if op == "+":
            out = a + b
        elif op == "-":
            out = a - b
        elif op == "*":
            out = a * b
        elif op == "/":
            out = _c_div(a, b, ct.is_signed, w)
        elif op == "%":
            out = _c_rem(a, b, ct.is_signed, w)
        elif op == "&":
            out = a & b
        elif op == "|":
            out = a | b
        elif op == "^":
            out = a ^ b
        else:
            raise EngineFailure(EngineFailure.UNSUPPORTED, f"operator {op}")
        return _mask(out, w), ct

    def _pointer_apply(self, op, lv, lt, rv, rt):
        if op in ("==", "!=", "<", "<=", ">", ">="):
            a, b = _mask(lv, 64), _mask(rv, 64)
            res = {"==": a == b, "!=": a != b, "<": a < b,
                   "<=": a <= b, ">": a > b, ">=": a >= b}[op]
            return (1 if res else 0), A.I32
        if op == "+" and lt.is_pointer and not rt.is_pointer:
            off = self._extend(rv, rt, 64) * lt.pointee().sizeof()
            return _mask(lv + off, 64), lt
        if op == "+" and rt.is_pointer:
            return self._pointer_apply(op, rv, rt, lv, lt)
        if op == "-" and lt.is_pointer and not rt.is_pointer:
            off = self._extend(rv, rt, 64) * lt.pointee().sizeof()
            return _mask(lv - off, 64), lt
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"pointer operator {op}")

    def _assign(self, e):
        loc = self._lvalue(e.target)
        rv, rt = self.eval(e.value)
        target_t = loc[2]
        if e.op == "=":
            value = _mask(self._extend(rv, rt, target_t.value_width), target_t.value_width)
        else:
            old, _ = self._read(loc)
            value, vt = self._apply(e.op[:-1], old, target_t, rv, rt)
            value = _mask(self._extend(value, vt, target_t.value_width), target_t.value_width)
        self._write(loc, value)
        return value, target_t

    # --- lvalues: ("var", name, ctype) | ("mem", addr, ctype) ---

    def _lvalue(self, e):
        if isinstance(e, A.Ident):
            slot = self.env.get(e.name)
            if slot is None:
                raise EngineFailure(EngineFailure.UNSUPPORTED, f"assignment to external {e.name!r}")
            if isinstance(slot, tuple):
                raise EngineFailure(EngineFailure.UNSUPPORTED, "assignment to array")
            return ("var", e.name, slot.ctype)
        if isinstance(e, A.Unary) and e.op == "*":
            v, vt = self.eval(e.operand)
            if not vt.is_pointer:
                raise EngineFailure(EngineFailure.UNSUPPORTED, "store through non-pointer")
            return ("mem", _mask(v, 64), vt.pointee())
        if isinstance(e, A.Subscript):
            addr, ctype = self._subscript_addr(e)
            return ("mem", addr, ctype)
        if isinstance(e, A.Cast):
            loc = self._lvalue(e.expr)
            if loc[0] == "mem":
                return ("mem", loc[1], e.ctype)
            return loc
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"lvalue {e.kind}")

    def _subscript_addr(self, e):
        base, bt = self.eval(e.base)
        if not bt.is_pointer:
            raise EngineFailure(EngineFailure.UNSUPPORTED, "subscript of non-pointer")
        idx, it = self.eval(e.index)
        addr = _mask(base + self._extend(idx, it, 64) * bt.pointee().sizeof(), 64)
        return addr, bt.pointee()

    def _read(self, loc):
        if loc[0] == "var":
            cell = self.env[loc[1]]
            return cell.value, cell.ctype
        _, addr, ctype = loc
        return self._load(addr, ctype.value_width), ctype

    def _write(self, loc, value):
        if loc[0] == "var":
            self.env[loc[1]].value = value
        else:
            self._store(loc[1], value, loc[2].value_width)


def _promote(t):
    return A.I32 if t.value_width < 32 else t


def _common_type(a, b):
    wa, wb = a.value_width, b.value_width
    w = max(32, wa, wb)
    unsigned = False
    for t, tw in ((a, wa), (b, wb)):
        if tw == w and (t.kind == "unsigned-int" or t.is_pointer or t.kind == "code-address"):
            unsigned = True
    return A.CType("unsigned-int" if unsigned else "signed-int", w)


def _c_div(a, b, signed, w):
    if b == 0:
        return -1 if signed else (1 << w) - 1
    if signed:
        q = abs(a) // abs(b)
        return -q if (a < 0) != (b < 0) else q
    return a // b


def _c_rem(a, b, signed, w):
    if b == 0:
        return a
    if signed:
        r = abs(a) % abs(b)
        return -r if a < 0 else r
    return a % b


def concrete_eval(fn: A.FunctionAst, args, cfg: ConcreteConfig | None = None,
                  initial_memory=None):
    """Run ``fn`` on concrete arguments; returns (return value or None, call counts)."""
    if cfg is None:
        cfg = ConcreteConfig()
    return Interpreter(fn, args, cfg, initial_memory).run()
